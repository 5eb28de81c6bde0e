// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "chainguard.h"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "api/service.hpp"
#include "common/crypto.hpp"
#include "consensus/scenario.hpp"
#include "persistence/store.hpp"
#include "wallet/wallet.hpp"

using namespace chainguard;

struct cg_wallet {
  wallet::Wallet w;
};

struct cg_node {
  std::unique_ptr<api::NodeService> svc;
};

namespace {

thread_local std::string g_last_error;

cg_status to_status(ErrorCode code) { return static_cast<cg_status>(static_cast<int>(code) + 1); }

cg_status fail(const Error& e) {
  g_last_error = std::string(error_name(e.code)) + ": " + e.describe();
  return to_status(e.code);
}

cg_status fail(ErrorCode code, std::string message) { return fail(make_error(code, std::move(message))); }

cg_status ok() {
  g_last_error.clear();
  return CG_OK;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cg_status put(char** out, const std::string& s) {
  if (!out) return fail(ErrorCode::Malformed, "output pointer is NULL");
  *out = dup(s);
  return *out ? ok() : fail(ErrorCode::Internal, "out of memory");
}

template <class F>
cg_status guarded(F&& f) {
  try {
    return f();
  } catch (const DecodeError& e) {
    return fail(ErrorCode::Malformed, e.what());
  } catch (const std::exception& e) {
    return fail(ErrorCode::Internal, e.what());
  } catch (...) {
    return fail(ErrorCode::Internal, "unknown exception");
  }
}

bool null_arg(const void* p, const char* name, cg_status& st) {
  if (p) return false;
  st = fail(ErrorCode::Malformed, std::string(name) + " is NULL");
  return true;
}

Result<SignedTransaction> parse_tx(const char* json) {
  auto j = parse_json(json);
  if (!j) return make_error(ErrorCode::Malformed, "transaction is not JSON");
  try {
    return tx_from_json(*j);
  } catch (const DecodeError& e) {
    return make_error(ErrorCode::Malformed, e.what());
  }
}

}  // namespace

extern "C" {

CG_API const char* cg_version(void) { return "0.1.0"; }

CG_API const char* cg_status_name(cg_status status) {
  if (status == CG_OK) return "Ok";
  const int idx = static_cast<int>(status) - 1;
  const auto& codes = all_error_codes();
  if (idx < 0 || idx >= static_cast<int>(codes.size())) return "Unknown";
  return error_name(codes[idx]).data();
}

CG_API const char* cg_last_error(void) { return g_last_error.c_str(); }

CG_API void cg_string_free(char* s) { std::free(s); }

CG_API cg_status cg_wallet_create(const char* seed_hex, const char* passphrase, uint32_t iterations,
                                  cg_wallet** out) {
  return guarded([&] {
    cg_status st;
    if (null_arg(passphrase, "passphrase", st) || null_arg(out, "out", st)) return st;
    wallet::Seed seed;
    if (seed_hex) {
      auto b = from_hex(seed_hex);
      if (!b || b->size() != seed.size()) return fail(ErrorCode::Malformed, "seed must be 32 bytes of lowercase hex");
      std::copy(b->begin(), b->end(), seed.begin());
      crypto::wipe(*b);
    } else {
      crypto::random_bytes(seed);
    }
    wallet::CreateOptions opts;
    if (iterations) opts.kdf_iterations = iterations;
    auto w = wallet::create_wallet(seed, passphrase, opts);
    crypto::wipe(seed);
    if (!w) return fail(w.error());
    *out = new cg_wallet{std::move(*w)};
    return ok();
  });
}

CG_API cg_status cg_wallet_load(const char* path, cg_wallet** out) {
  return guarded([&] {
    cg_status st;
    if (null_arg(path, "path", st) || null_arg(out, "out", st)) return st;
    auto w = wallet::load_wallet_file(path);
    if (!w) return fail(w.error());
    *out = new cg_wallet{std::move(*w)};
    return ok();
  });
}

CG_API cg_status cg_wallet_save(const cg_wallet* wallet, const char* path) {
  return guarded([&] {
    cg_status st;
    if (null_arg(wallet, "wallet", st) || null_arg(path, "path", st)) return st;
    if (auto s = wallet::save_wallet_file(wallet->w, path); !s) return fail(s.error());
    return ok();
  });
}

CG_API cg_status cg_wallet_info(const cg_wallet* wallet, char** json_out) {
  return guarded([&] {
    cg_status st;
    if (null_arg(wallet, "wallet", st)) return st;
    const Json j{{"address", wallet->w.address.hex()},
                 {"public_key", wallet->w.public_key.hex()},
                 {"kdf_iterations", wallet->w.kdf_iterations}};
    return put(json_out, canonical_dump(j));
  });
}

CG_API cg_status cg_wallet_export(const cg_wallet* wallet, char** json_out) {
  return guarded([&] {
    cg_status st;
    if (null_arg(wallet, "wallet", st)) return st;
    return put(json_out, canonical_dump(wallet::wallet_to_json(wallet->w)));
  });
}

CG_API void cg_wallet_free(cg_wallet* wallet) { delete wallet; }

CG_API cg_status cg_wallet_register_payload(const cg_wallet* wallet, const char* org, const char* role,
                                            char** payload_json_out) {
  return guarded([&] {
    cg_status st;
    if (null_arg(wallet, "wallet", st) || null_arg(org, "org", st) || null_arg(role, "role", st)) return st;
    RegisterUser p{wallet->w.address, wallet->w.public_key, wallet->w.password_digest, org, role};
    return put(payload_json_out, canonical_dump(payload_to_json(p)));
  });
}

CG_API cg_status cg_wallet_sign(const cg_wallet* wallet, const char* passphrase, uint64_t nonce,
                                const char* payload_json, char** tx_json_out) {
  return guarded([&] {
    cg_status st;
    if (null_arg(wallet, "wallet", st) || null_arg(passphrase, "passphrase", st) ||
        null_arg(payload_json, "payload_json", st))
      return st;
    auto pj = parse_json(payload_json);
    if (!pj) return fail(ErrorCode::Malformed, "payload is not JSON");
    TxBody body{wallet->w.address, nonce, payload_from_json(*pj)};
    auto tx = wallet::sign_transaction(wallet->w, passphrase, body);
    if (!tx) return fail(tx.error());
    return put(tx_json_out, canonical_dump(tx_to_json(*tx)));
  });
}

CG_API cg_status cg_tx_id(const char* tx_json, char** id_hex_out) {
  return guarded([&] {
    cg_status st;
    if (null_arg(tx_json, "tx_json", st)) return st;
    auto tx = parse_tx(tx_json);
    if (!tx) return fail(tx.error());
    return put(id_hex_out, tx_id(*tx).hex());
  });
}

CG_API cg_status cg_tx_verify(const char* tx_json, const char* public_key_hex) {
  return guarded([&] {
    cg_status st;
    if (null_arg(tx_json, "tx_json", st) || null_arg(public_key_hex, "public_key_hex", st)) return st;
    auto tx = parse_tx(tx_json);
    if (!tx) return fail(tx.error());
    auto pk = PublicKey::parse(public_key_hex);
    if (!pk) return fail(ErrorCode::Malformed, "public key must be 32 bytes of hex");
    if (!wallet::verify_signature(*tx, *pk)) return fail(ErrorCode::BadSignature, "signature does not verify");
    return ok();
  });
}

CG_API cg_status cg_chain_verify_file(const char* chain_path, const char* genesis_path,
                                      uint64_t* failing_height, char** summary_json_out) {
  return guarded([&] {
    cg_status st;
    if (null_arg(chain_path, "chain_path", st) || null_arg(genesis_path, "genesis_path", st)) return st;
    auto g = persistence::load_genesis_file(genesis_path);
    if (!g) return fail(g.error());
    auto loaded = persistence::read_chain_file(chain_path, persistence::genesis_state(*g));
    if (!loaded) {
      const Error& e = loaded.error();
      if (failing_height && e.height) *failing_height = *e.height;
      Error v = make_error(ErrorCode::VerificationFailed, e.message);
      v.height = e.height;
      if (e.code == ErrorCode::IoError) return fail(e);
      if (summary_json_out) {
        Json j{{"ok", false}, {"code", error_name(ErrorCode::VerificationFailed)}, {"message", e.message}};
        if (e.height) j["height"] = *e.height;
        *summary_json_out = dup(canonical_dump(j));
      }
      return fail(v);
    }
    const auto& chain = loaded->chain;
    // An audit copy must be complete; a torn tail is only tolerated on node restart.
    if (chain.empty() || !loaded->warnings.empty()) {
      Error v = make_error(ErrorCode::VerificationFailed,
                           chain.empty() ? "chain file is empty" : loaded->warnings.front());
      v.height = chain.size();
      if (failing_height) *failing_height = *v.height;
      if (summary_json_out)
        *summary_json_out = dup(canonical_dump(Json{{"ok", false},
                                                    {"code", error_name(v.code)},
                                                    {"message", v.message},
                                                    {"height", *v.height}}));
      return fail(v);
    }
    if (!summary_json_out) return ok();
    Json warnings = loaded->warnings;
    const Json j{{"ok", true},
                 {"blocks", chain.size()},
                 {"height", chain.tip().header.height},
                 {"tip_hash", ledger::hash_header(chain.tip().header).hex()},
                 {"state_root", chain.tip().header.state_root.hex()},
                 {"warnings", warnings}};
    return put(summary_json_out, canonical_dump(j));
  });
}

CG_API cg_status cg_sim_run(const char* scenario_path, const char* chains_dir, char** report_json_out) {
  return guarded([&] {
    cg_status st;
    if (null_arg(scenario_path, "scenario_path", st)) return st;
    auto sc = consensus::load_scenario_file(scenario_path);
    if (!sc) return fail(sc.error());
    const auto run = consensus::run_scenario(*sc);
    if (chains_dir) {
      std::error_code ec;
      std::filesystem::create_directories(chains_dir, ec);
      {
        const std::string path = std::string(chains_dir) + "/genesis.json";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << persistence::genesis_bytes(sc->genesis) << '\n';
        if (!out) return fail(ErrorCode::IoError, "cannot write " + path);
      }
      for (std::size_t i = 0; i < run.chains.size(); ++i) {
        const std::string path = std::string(chains_dir) + "/node-" + std::to_string(i) + ".jsonl";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        for (const auto& b : run.chains[i].blocks()) out << persistence::encode_store_line(b) << '\n';
        if (!out) return fail(ErrorCode::IoError, "cannot write " + path);
      }
    }
    if (report_json_out) *report_json_out = dup(consensus::sim_run_to_json(run).dump(2));
    if (run.outcome.error) return fail(*run.outcome.error);
    return ok();
  });
}

CG_API cg_status cg_node_create(const char* config_json, int apply_env, cg_node** out) {
  return guarded([&] {
    cg_status st;
    if (null_arg(config_json, "config_json", st) || null_arg(out, "out", st)) return st;
    auto j = parse_json(config_json);
    if (!j) return fail(ErrorCode::Malformed, "config is not JSON");
    auto cfg = api::node_config_from_json(*j);
    if (!cfg) return fail(cfg.error());
    if (apply_env)
      if (auto s = api::apply_env_overrides(*cfg, api::process_env()); !s) return fail(s.error());
    if (cfg->genesis_path.empty()) return fail(ErrorCode::MissingParam, "no genesis path configured");
    auto g = persistence::load_genesis_file(cfg->genesis_path);
    if (!g) return fail(g.error());
    auto svc = api::NodeService::create(std::move(*cfg), std::move(*g));
    if (!svc) return fail(svc.error());
    *out = new cg_node{std::move(*svc)};
    return ok();
  });
}

CG_API cg_status cg_node_start(cg_node* node) {
  return guarded([&] {
    cg_status st;
    if (null_arg(node, "node", st)) return st;
    if (auto s = node->svc->start(); !s) return fail(s.error());
    return ok();
  });
}

CG_API uint16_t cg_node_port(const cg_node* node, size_t validator) {
  return node ? node->svc->port(validator) : 0;
}

CG_API cg_status cg_node_advance(cg_node* node, uint64_t ticks) {
  return guarded([&] {
    cg_status st;
    if (null_arg(node, "node", st)) return st;
    node->svc->advance(ticks);
    return ok();
  });
}

CG_API cg_status cg_node_stop(cg_node* node) {
  return guarded([&] {
    cg_status st;
    if (null_arg(node, "node", st)) return st;
    node->svc->stop();
    return ok();
  });
}

CG_API void cg_node_free(cg_node* node) { delete node; }

}  // extern "C"
