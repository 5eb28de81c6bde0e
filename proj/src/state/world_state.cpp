// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "state/world_state.hpp"

#include "common/crypto.hpp"

namespace chainguard::state {

const RolePolicy* OrgRecord::role(const RoleId& r) const {
  auto it = role_catalog.find(r);
  return it == role_catalog.end() ? nullptr : &it->second;
}

Json state_to_json(const WorldState& s) {
  Json accounts = Json::object();
  for (const auto& [addr, pk] : s.accounts) accounts[addr.hex()] = pk.hex();

  Json nonces = Json::object();
  for (const auto& [addr, n] : s.nonces) nonces[addr.hex()] = n;

  Json orgs = Json::object();
  for (const auto& [id, org] : s.orgs) {
    Json admins = Json::array();
    for (const auto& a : org.admins) admins.push_back(a.hex());
    Json roles = Json::object();
    for (const auto& [rid, pol] : org.role_catalog) {
      roles[rid] = {{"self_assignable", pol.self_assignable},
                    {"max_holders", pol.max_holders ? Json(*pol.max_holders) : Json(nullptr)}};
    }
    orgs[id] = {{"admins", std::move(admins)}, {"roles", std::move(roles)}};
  }

  Json validators = Json::array();
  for (const auto& v : s.params.validators) validators.push_back(v.hex());

  Json users = Json::object();
  for (const auto& [addr, u] : s.users) {
    users[addr.hex()] = {{"public_key", u.public_key.hex()},
                         {"password_digest", u.password_digest.hex()},
                         {"registered_at", Json::array({u.registered_height, u.registered_tx_index})}};
  }

  Json ura = Json::array();
  for (const auto& e : s.ura) ura.push_back(Json::array({e.user.hex(), e.org, e.role}));
  Json pra = Json::array();
  for (const auto& e : s.pra)
    pra.push_back(Json::array({e.org, e.role, e.permission.resource, e.permission.action}));

  return Json{{"params", {{"chain_id", s.params.chain_id}, {"validators", std::move(validators)}}},
              {"accounts", std::move(accounts)},
              {"users", std::move(users)},
              {"orgs", std::move(orgs)},
              {"ura", std::move(ura)},
              {"pra", std::move(pra)},
              {"nonces", std::move(nonces)}};
}

std::string state_bytes(const WorldState& s) { return canonical_dump(state_to_json(s)); }

Digest state_root(const WorldState& s) { return crypto::sha256(state_bytes(s)); }

const UserRecord* query_user(const WorldState& s, const Address& addr) {
  auto it = s.users.find(addr);
  return it == s.users.end() ? nullptr : &it->second;
}

std::map<OrgId, std::set<RoleId>> query_roles(const WorldState& s, const Address& addr) {
  std::map<OrgId, std::set<RoleId>> out;
  for (auto it = s.ura.lower_bound(UraEntry{addr, {}, {}}); it != s.ura.end() && it->user == addr;
       ++it)
    out[it->org].insert(it->role);
  return out;
}

std::size_t role_holders(const WorldState& s, const OrgId& org, const RoleId& role) {
  std::size_t n = 0;
  for (const auto& e : s.ura)
    if (e.org == org && e.role == role) ++n;
  return n;
}

bool has_role(const WorldState& s, const Address& user, const OrgId& org, const RoleId& role) {
  return s.ura.contains(UraEntry{user, org, role});
}

bool registered_in(const WorldState& s, const Address& user, const OrgId& org) {
  auto it = s.ura.lower_bound(UraEntry{user, org, {}});
  return it != s.ura.end() && it->user == user && it->org == org;
}

std::optional<PublicKey> known_key(const WorldState& s, const Address& addr) {
  if (auto u = s.users.find(addr); u != s.users.end()) return u->second.public_key;
  if (auto a = s.accounts.find(addr); a != s.accounts.end()) return a->second;
  return std::nullopt;
}

std::string integrity_violation(const WorldState& s) {
  for (const auto& [addr, u] : s.users) {
    if (u.address != addr) return "user record keyed under wrong address";
    if (crypto::derive_address(u.public_key) != addr) return "user address does not match key";
    if (!s.nonces.contains(addr)) return "registered user without nonce";
  }
  for (const auto& [id, org] : s.orgs) {
    if (org.org_id != id) return "org record keyed under wrong id";
    if (org.admins.empty()) return "org " + id + " has no admins";
    for (const auto& [rid, pol] : org.role_catalog) {
      if (pol.role_id != rid) return "role keyed under wrong id";
      if (pol.max_holders && role_holders(s, id, rid) > *pol.max_holders)
        return "role " + id + "/" + rid + " over capacity";
    }
  }
  for (const auto& e : s.ura) {
    if (!s.users.contains(e.user)) return "ura references unregistered user";
    auto org = s.orgs.find(e.org);
    if (org == s.orgs.end()) return "ura references unknown org";
    if (!org->second.role(e.role)) return "ura references uncataloged role";
  }
  for (const auto& e : s.pra) {
    auto org = s.orgs.find(e.org);
    if (org == s.orgs.end()) return "pra references unknown org";
    if (!org->second.role(e.role)) return "pra references uncataloged role";
    if (!valid_permission(e.permission)) return "pra holds malformed permission";
  }
  return {};
}

}  // namespace chainguard::state
