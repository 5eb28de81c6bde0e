// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "persistence/genesis.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "common/crypto.hpp"

namespace chainguard::persistence {

Json genesis_to_json(const GenesisFile& g) {
  Json validators = Json::array();
  for (const auto& v : g.validators) validators.push_back(v.hex());
  Json accounts = Json::array();
  for (const auto& [addr, pk] : g.accounts)
    accounts.push_back({{"address", addr.hex()}, {"public_key", pk.hex()}});
  Json orgs = Json::array();
  for (const auto& org : g.orgs) {
    Json admins = Json::array();
    for (const auto& a : org.admins) admins.push_back(a.hex());
    Json roles = Json::array();
    for (const auto& [rid, pol] : org.role_catalog)
      roles.push_back({{"role_id", rid},
                       {"self_assignable", pol.self_assignable},
                       {"max_holders", pol.max_holders ? Json(*pol.max_holders) : Json(nullptr)}});
    orgs.push_back({{"org_id", org.org_id}, {"admins", std::move(admins)}, {"roles", std::move(roles)}});
  }
  return Json{{"chain_id", g.chain_id},
              {"validators", std::move(validators)},
              {"accounts", std::move(accounts)},
              {"orgs", std::move(orgs)}};
}

std::string genesis_bytes(const GenesisFile& g) { return canonical_dump(genesis_to_json(g)); }

Digest genesis_hash(const GenesisFile& g) { return crypto::sha256(genesis_bytes(g)); }

namespace {
const Json& require_array(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    throw DecodeError(std::string("genesis: '") + key + "' must be an array");
  return j[key];
}
}  // namespace

Result<GenesisFile> genesis_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw DecodeError("genesis: expected object");
    GenesisFile g;
    if (!j.contains("chain_id") || !j["chain_id"].is_string()) throw DecodeError("genesis: missing chain_id");
    g.chain_id = j["chain_id"].get<std::string>();
    if (!valid_identifier(g.chain_id)) throw DecodeError("genesis: malformed chain_id");

    std::set<Address> seen;
    for (const auto& v : require_array(j, "validators")) {
      auto a = fixed_from_json<Address>(v, "genesis.validators");
      if (!seen.insert(a).second) throw DecodeError("genesis: duplicate validator");
      g.validators.push_back(a);
    }
    if (g.validators.empty()) throw DecodeError("genesis: at least one validator is required");

    std::set<Address> account_set;
    if (j.contains("accounts")) {
      for (const auto& acct : require_array(j, "accounts")) {
        ObjectReader r(acct, {"address", "public_key"}, "genesis.account");
        auto addr = r.fixed<Address>("address");
        auto pk = r.fixed<PublicKey>("public_key");
        if (crypto::derive_address(pk) != addr)
          return make_error(ErrorCode::AddressMismatch, "genesis account address does not match its key");
        if (!account_set.insert(addr).second) throw DecodeError("genesis: duplicate account");
        g.accounts.emplace_back(addr, pk);
      }
    }

    std::set<OrgId> org_ids;
    for (const auto& o : require_array(j, "orgs")) {
      if (!o.is_object() || !o.contains("org_id") || !o["org_id"].is_string())
        throw DecodeError("genesis: org without org_id");
      state::OrgRecord org;
      org.org_id = o["org_id"].get<std::string>();
      if (!valid_identifier(org.org_id)) throw DecodeError("genesis: malformed org_id");
      if (!org_ids.insert(org.org_id).second) throw DecodeError("genesis: duplicate org " + org.org_id);
      for (const auto& a : require_array(o, "admins")) {
        auto addr = fixed_from_json<Address>(a, "genesis.admins");
        if (!account_set.contains(addr))
          throw DecodeError("genesis: admin " + addr.hex() + " of " + org.org_id + " is not listed in accounts");
        org.admins.insert(addr);
      }
      if (org.admins.empty()) throw DecodeError("genesis: org " + org.org_id + " has no admins");
      for (const auto& r : require_array(o, "roles")) {
        if (!r.is_object() || !r.contains("role_id") || !r["role_id"].is_string())
          throw DecodeError("genesis: role without role_id");
        state::RolePolicy pol;
        pol.role_id = r["role_id"].get<std::string>();
        if (!valid_identifier(pol.role_id) || pol.role_id == kNoRole)
          throw DecodeError("genesis: malformed or reserved role id '" + pol.role_id + "'");
        if (r.contains("self_assignable")) {
          if (!r["self_assignable"].is_boolean()) throw DecodeError("genesis: self_assignable must be boolean");
          pol.self_assignable = r["self_assignable"].get<bool>();
        }
        if (r.contains("max_holders") && !r["max_holders"].is_null()) {
          const auto& m = r["max_holders"];
          if (!m.is_number_unsigned() || m.get<std::uint64_t>() == 0 || m.get<std::uint64_t>() > UINT32_MAX)
            throw DecodeError("genesis: max_holders must be a positive integer or null");
          pol.max_holders = static_cast<std::uint32_t>(m.get<std::uint64_t>());
        }
        if (!org.role_catalog.emplace(pol.role_id, pol).second)
          throw DecodeError("genesis: duplicate role " + pol.role_id + " in " + org.org_id);
      }
      g.orgs.push_back(std::move(org));
    }
    return g;
  } catch (const DecodeError& e) {
    return make_error(ErrorCode::Malformed, e.what());
  }
}

Result<GenesisFile> load_genesis_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return make_error(ErrorCode::IoError, "cannot open genesis file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto j = parse_json(buf.str());
  if (!j) return make_error(ErrorCode::Malformed, "genesis file is not JSON");
  return genesis_from_json(*j);
}

state::WorldState genesis_state(const GenesisFile& g) {
  state::WorldState s;
  s.params.chain_id = g.chain_id;
  s.params.validators = g.validators;
  for (const auto& [addr, pk] : g.accounts) s.accounts.emplace(addr, pk);
  for (const auto& org : g.orgs) s.orgs.emplace(org.org_id, org);
  return s;
}

}  // namespace chainguard::persistence
