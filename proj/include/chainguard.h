/* Copyright 2026 The ChainGuard Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the ChainGuard identity and access-control ledger.
 *
 * Every fallible call returns a cg_status. On failure a description is
 * available from cg_last_error() on the same thread until the next call.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with cg_string_free().
 */
#ifndef CHAINGUARD_H
#define CHAINGUARD_H

#include <stddef.h>
#include <stdint.h>

#if defined(CHAINGUARD_BUILDING_LIBRARY)
#define CG_API __attribute__((visibility("default")))
#else
#define CG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cg_status {
  CG_OK = 0,
  CG_ALREADY_REGISTERED,
  CG_UNKNOWN_ORG,
  CG_UNKNOWN_ROLE,
  CG_NOT_ELIGIBLE,
  CG_ROLE_FULL,
  CG_ADDRESS_MISMATCH,
  CG_NOT_REGISTERED,
  CG_NO_SUCH_ASSIGNMENT,
  CG_ALREADY_ASSIGNED,
  CG_NOT_AUTHORIZED,
  CG_DUPLICATE_GRANT,
  CG_NOT_GRANTED,
  CG_INVALID_PAYLOAD,
  CG_BAD_NONCE,
  CG_BAD_SIGNATURE,
  CG_WEAK_PASSPHRASE,
  CG_BAD_PASSPHRASE,
  CG_SENDER_MISMATCH,
  CG_INVALID_TRANSACTION,
  CG_LINK_MISMATCH,
  CG_HEIGHT_GAP,
  CG_ROOT_MISMATCH,
  CG_REPLAY_DIVERGENCE,
  CG_VERIFICATION_FAILED,
  CG_CORRUPT_STORE,
  CG_MALFORMED,
  CG_MISSING_PARAM,
  CG_NOT_FOUND,
  CG_UNAVAILABLE,
  CG_TIMEOUT,
  CG_IO_ERROR,
  CG_INTERNAL
} cg_status;

typedef struct cg_wallet cg_wallet;
typedef struct cg_node cg_node;

CG_API const char* cg_version(void);
/* Error code name, e.g. "BadSignature"; "Ok" for CG_OK. */
CG_API const char* cg_status_name(cg_status status);
CG_API const char* cg_last_error(void);
CG_API void cg_string_free(char* s);

/* seed_hex may be NULL for a random key. iterations 0 selects the default. */
CG_API cg_status cg_wallet_create(const char* seed_hex, const char* passphrase, uint32_t iterations,
                                  cg_wallet** out);
CG_API cg_status cg_wallet_load(const char* path, cg_wallet** out);
CG_API cg_status cg_wallet_save(const cg_wallet* wallet, const char* path);
/* {"address", "public_key", "kdf_iterations"} */
CG_API cg_status cg_wallet_info(const cg_wallet* wallet, char** json_out);
/* The serialized wallet file contents (sealed key only). */
CG_API cg_status cg_wallet_export(const cg_wallet* wallet, char** json_out);
CG_API void cg_wallet_free(cg_wallet* wallet);

/* RegisterUser payload for the wallet's own identity. */
CG_API cg_status cg_wallet_register_payload(const cg_wallet* wallet, const char* org, const char* role,
                                            char** payload_json_out);
/* Signs {sender, nonce, payload} and returns the transaction JSON. */
CG_API cg_status cg_wallet_sign(const cg_wallet* wallet, const char* passphrase, uint64_t nonce,
                                const char* payload_json, char** tx_json_out);

CG_API cg_status cg_tx_id(const char* tx_json, char** id_hex_out);
/* CG_OK when the signature verifies under public_key_hex. */
CG_API cg_status cg_tx_verify(const char* tx_json, const char* public_key_hex);

/* Verifies a chain.jsonl file against a genesis file. On failure
 * *failing_height (if non-NULL) receives the first bad height. */
CG_API cg_status cg_chain_verify_file(const char* chain_path, const char* genesis_path,
                                      uint64_t* failing_height, char** summary_json_out);

/* Runs a scenario file. The report is produced even on CG_TIMEOUT. When
 * chains_dir is non-NULL each validator's chain is written there as
 * node-<i>.jsonl, next to the genesis.json they verify against. */
CG_API cg_status cg_sim_run(const char* scenario_path, const char* chains_dir, char** report_json_out);

/* config_json is a node configuration object; with apply_env non-zero the
 * CHAINGUARD_* environment overrides are applied on top. */
CG_API cg_status cg_node_create(const char* config_json, int apply_env, cg_node** out);
CG_API cg_status cg_node_start(cg_node* node);
CG_API uint16_t cg_node_port(const cg_node* node, size_t validator);
CG_API cg_status cg_node_advance(cg_node* node, uint64_t ticks);
CG_API cg_status cg_node_stop(cg_node* node);
CG_API void cg_node_free(cg_node* node);

#ifdef __cplusplus
}
#endif

#endif /* CHAINGUARD_H */
