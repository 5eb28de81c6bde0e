// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "state/apply.hpp"

#include "contracts/sco.hpp"
#include "contracts/scu.hpp"
#include "wallet/wallet.hpp"

namespace chainguard::state {

std::uint64_t expected_nonce(const WorldState& s, const Address& sender) {
  auto it = s.nonces.find(sender);
  return it == s.nonces.end() ? 0 : it->second + 1;
}

namespace {
std::optional<PublicKey> verifying_key(const WorldState& s, const SignedTransaction& tx) {
  if (auto k = known_key(s, tx.sender)) return k;
  // First contact: the key travels with the registration itself.
  if (const auto* reg = std::get_if<RegisterUser>(&tx.payload); reg && reg->user == tx.sender)
    return reg->public_key;
  return std::nullopt;
}

struct Dispatch {
  WorldState& s;
  const Address& signer;
  TxContext ctx;
  Result<std::vector<Event>> operator()(const RegisterUser& p) { return scu::register_user(s, signer, p, ctx); }
  Result<std::vector<Event>> operator()(const UpdateUserRole& p) { return scu::update_user_role(s, signer, p, ctx); }
  Result<std::vector<Event>> operator()(const GrantPermission& p) { return sco::grant_permission(s, signer, p, ctx); }
  Result<std::vector<Event>> operator()(const RevokePermission& p) { return sco::revoke_permission(s, signer, p, ctx); }
};
}  // namespace

Status check_signature(const WorldState& s, const SignedTransaction& tx) {
  if (tx.signature.size() != 64) return make_error(ErrorCode::BadSignature, "signature must be 64 bytes");
  auto key = verifying_key(s, tx);
  if (!key) return ok_status();  // cannot judge yet; decided when the tx is applied
  if (!wallet::verify_signature(tx, *key)) return make_error(ErrorCode::BadSignature, "signature does not verify");
  return ok_status();
}

Result<std::vector<Event>> apply_in_place(WorldState& s, const SignedTransaction& tx, TxContext ctx) {
  auto key = verifying_key(s, tx);
  if (!key) return make_error(ErrorCode::NotRegistered, "no key on record for sender " + tx.sender.hex());
  if (!wallet::verify_signature(tx, *key)) return make_error(ErrorCode::BadSignature, "signature does not verify");
  const std::uint64_t want = expected_nonce(s, tx.sender);
  if (tx.nonce != want)
    return make_error(ErrorCode::BadNonce,
                      "expected nonce " + std::to_string(want) + ", got " + std::to_string(tx.nonce));

  auto events = std::visit(Dispatch{s, tx.sender, ctx}, tx.payload);
  if (!events) return events;
  s.nonces[tx.sender] = tx.nonce;
  return events;
}

Result<Applied> apply_transaction(const WorldState& s, const SignedTransaction& tx, TxContext ctx) {
  Applied out{s, {}};
  auto events = apply_in_place(out.state, tx, ctx);
  if (!events) return events.error();
  out.events = std::move(*events);
  return out;
}

}  // namespace chainguard::state
