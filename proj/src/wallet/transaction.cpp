// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "wallet/transaction.hpp"

#include "common/crypto.hpp"

namespace chainguard {

bool valid_identifier(std::string_view id) {
  if (id.empty() || id.size() > kMaxIdentifierLength) return false;
  for (char c : id)
    if (c <= 0x20 || c >= 0x7f) return false;
  return true;
}

bool valid_permission(const Permission& p) {
  return valid_identifier(p.resource) && valid_identifier(p.action);
}

namespace {
struct PayloadEncoder {
  Json operator()(const RegisterUser& p) const {
    return Json{{"type", "RegisterUser"},
                {"user", p.user.hex()},
                {"public_key", p.public_key.hex()},
                {"password_digest", p.password_digest.hex()},
                {"org", p.org},
                {"requested_role", p.requested_role}};
  }
  Json operator()(const UpdateUserRole& p) const {
    return Json{{"type", "UpdateUserRole"},
                {"user", p.user.hex()},
                {"org", p.org},
                {"old_role", p.old_role},
                {"new_role", p.new_role}};
  }
  Json operator()(const GrantPermission& p) const {
    return Json{{"type", "GrantPermission"},
                {"org", p.org},
                {"role", p.role},
                {"permission", {{"resource", p.permission.resource}, {"action", p.permission.action}}}};
  }
  Json operator()(const RevokePermission& p) const {
    return Json{{"type", "RevokePermission"},
                {"org", p.org},
                {"role", p.role},
                {"permission", {{"resource", p.permission.resource}, {"action", p.permission.action}}}};
  }
};

Permission permission_from_json(const Json& j) {
  ObjectReader r(j, {"resource", "action"}, "permission");
  return {r.str("resource"), r.str("action")};
}
}  // namespace

std::string_view payload_type(const Payload& p) {
  switch (p.index()) {
    case 0: return "RegisterUser";
    case 1: return "UpdateUserRole";
    case 2: return "GrantPermission";
    default: return "RevokePermission";
  }
}

Json payload_to_json(const Payload& p) { return std::visit(PayloadEncoder{}, p); }

Payload payload_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw DecodeError("payload: missing type");
  const auto type = j["type"].get<std::string>();
  if (type == "RegisterUser") {
    ObjectReader r(j, {"type", "user", "public_key", "password_digest", "org", "requested_role"},
                   "RegisterUser");
    return RegisterUser{r.fixed<Address>("user"), r.fixed<PublicKey>("public_key"),
                        r.fixed<Digest>("password_digest"), r.str("org"),
                        r.str("requested_role")};
  }
  if (type == "UpdateUserRole") {
    ObjectReader r(j, {"type", "user", "org", "old_role", "new_role"}, "UpdateUserRole");
    return UpdateUserRole{r.fixed<Address>("user"), r.str("org"), r.str("old_role"),
                          r.str("new_role")};
  }
  if (type == "GrantPermission") {
    ObjectReader r(j, {"type", "org", "role", "permission"}, "GrantPermission");
    return GrantPermission{r.str("org"), r.str("role"), permission_from_json(r.raw("permission"))};
  }
  if (type == "RevokePermission") {
    ObjectReader r(j, {"type", "org", "role", "permission"}, "RevokePermission");
    return RevokePermission{r.str("org"), r.str("role"), permission_from_json(r.raw("permission"))};
  }
  throw DecodeError("payload: unknown type '" + type + "'");
}

std::string signing_bytes(const TxBody& body) {
  return canonical_dump(Json{{"sender", body.sender.hex()},
                             {"nonce", body.nonce},
                             {"payload", payload_to_json(body.payload)}});
}

Json tx_to_json(const SignedTransaction& tx) {
  return Json{{"sender", tx.sender.hex()},
              {"nonce", tx.nonce},
              {"payload", payload_to_json(tx.payload)},
              {"signature", to_hex(tx.signature)}};
}

SignedTransaction tx_from_json(const Json& j) {
  ObjectReader r(j, {"sender", "nonce", "payload", "signature"}, "transaction");
  SignedTransaction tx;
  tx.sender = r.fixed<Address>("sender");
  tx.nonce = r.u64("nonce");
  tx.payload = payload_from_json(r.raw("payload"));
  tx.signature = r.hex("signature");
  return tx;
}

Result<SignedTransaction> decode_tx(std::string_view text) {
  auto parsed = parse_json(text);
  if (!parsed) return make_error(ErrorCode::Malformed, "transaction is not valid JSON");
  try {
    return tx_from_json(*parsed);
  } catch (const DecodeError& e) {
    return make_error(ErrorCode::Malformed, e.what());
  }
}

Digest tx_id(const SignedTransaction& tx) { return crypto::sha256(canonical_dump(tx_to_json(tx))); }

}  // namespace chainguard
