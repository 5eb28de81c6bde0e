// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "harness.hpp"

#include <algorithm>
#include <stdexcept>

#include "common/crypto.hpp"
#include "ledger/block.hpp"
#include "state/apply.hpp"

namespace cgtest {

wallet::Seed seed_of(std::uint8_t fill) {
  wallet::Seed s;
  s.fill(fill);
  return s;
}

Actor Actor::make(std::string name, const wallet::Seed& seed) {
  Actor a;
  a.name = std::move(name);
  a.seed = seed;
  const auto signer = wallet::Signer::from_seed(seed);
  a.address = signer.address();
  a.public_key = signer.public_key();
  return a;
}

SignedTransaction Actor::sign(std::uint64_t nonce, Payload payload) const {
  auto tx = wallet::Signer::from_seed(seed).sign(TxBody{address, nonce, std::move(payload)});
  if (!tx) throw std::runtime_error(tx.error().describe());
  return *tx;
}

RegisterUser Actor::registration(const OrgId& org, const RoleId& role) const {
  return RegisterUser{address, public_key, crypto::sha256("pw:" + name), org, role};
}

namespace {
state::OrgRecord standard_org(const OrgId& id, const Address& admin) {
  state::OrgRecord org;
  org.org_id = id;
  org.admins.insert(admin);
  org.role_catalog.emplace("member", state::RolePolicy{"member", true, std::nullopt});
  org.role_catalog.emplace("auditor", state::RolePolicy{"auditor", false, 1});
  return org;
}
}  // namespace

Fixture::Fixture(bool two_orgs) {
  for (std::uint8_t i = 0; i < 4; ++i) validators.push_back(Actor::fill("v" + std::to_string(i), 0x10 + i));
  genesis.chain_id = "chainguard-test";
  for (const auto& v : validators) genesis.validators.push_back(v.address);
  genesis.accounts.emplace_back(admin.address, admin.public_key);
  genesis.orgs.push_back(standard_org("acme", admin.address));
  if (two_orgs) {
    genesis.accounts.emplace_back(admin2.address, admin2.public_key);
    genesis.orgs.push_back(standard_org("globex", admin2.address));
  }
  state = persistence::genesis_state(genesis);
}

std::vector<const Actor*> Universe::everyone() const {
  std::vector<const Actor*> out;
  for (const auto& a : admins) out.push_back(&a);
  for (const auto& a : users) out.push_back(&a);
  return out;
}

Universe make_universe(std::mt19937_64& rng, const Shape& shape, int validators) {
  auto random_seed = [&] {
    wallet::Seed s;
    for (auto& b : s) b = static_cast<std::uint8_t>(rng());
    return s;
  };
  Universe u;
  u.genesis.chain_id = "chainguard-prop";
  for (int i = 0; i < validators; ++i) {
    u.validators.push_back(Actor::make("v" + std::to_string(i), random_seed()));
    u.genesis.validators.push_back(u.validators.back().address);
  }
  for (int o = 0; o < shape.orgs; ++o) {
    const OrgId id = "org" + std::to_string(o);
    u.orgs.push_back(id);
    u.admins.push_back(Actor::make("admin" + std::to_string(o), random_seed()));
    const auto& admin = u.admins.back();
    u.genesis.accounts.emplace_back(admin.address, admin.public_key);
    state::OrgRecord org;
    org.org_id = id;
    org.admins.insert(admin.address);
    for (int r = 0; r < shape.roles_per_org; ++r) {
      state::RolePolicy pol;
      pol.role_id = "r" + std::to_string(r);
      pol.self_assignable = r == 0 || rng() % 10 < 6;
      if (r > 0 && rng() % 10 < 3) pol.max_holders = 1 + static_cast<std::uint32_t>(rng() % 3);
      org.role_catalog.emplace(pol.role_id, pol);
      u.roles[id].push_back(pol.role_id);
    }
    u.genesis.orgs.push_back(std::move(org));
  }
  for (int i = 0; i < shape.users; ++i) u.users.push_back(Actor::make("user" + std::to_string(i), random_seed()));
  static const char* resources[] = {"ledger", "records", "billing", "audit", "reports", "vault"};
  static const char* actions[] = {"read", "write", "approve", "delete"};
  std::set<Permission> perms;
  while (static_cast<int>(perms.size()) < std::min(shape.permissions, 24))
    perms.insert(Permission{resources[rng() % 6], actions[rng() % 4]});
  u.permissions.assign(perms.begin(), perms.end());
  u.state = persistence::genesis_state(u.genesis);
  return u;
}

// ---------------------------------------------------------------- RefModel

RefModel::RefModel(const Universe& u) : RefModel(u.genesis) {}

RefModel::RefModel(const persistence::GenesisFile& g) {
  for (const auto& [addr, pk] : g.accounts) genesis_keys_[addr] = pk;
  for (const auto& org : g.orgs) {
    Org o;
    o.admins.assign(org.admins.begin(), org.admins.end());
    for (const auto& [id, pol] : org.role_catalog) o.roles[id] = RoleDef{pol.self_assignable, pol.max_holders};
    orgs_[org.org_id] = std::move(o);
  }
}

namespace {
bool ident_ok(const std::string& s) {
  if (s.empty() || s.size() > 64) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '!' && c <= '~'; });
}
}  // namespace

std::uint64_t RefModel::next_nonce(const Address& a) const {
  auto it = next_.find(a);
  return it == next_.end() ? 0 : it->second;
}

bool RefModel::registered(const Address& a) const { return user_keys_.contains(a); }

bool RefModel::holds(const Address& user, const OrgId& org, const RoleId& role) const {
  return std::find(ura_.begin(), ura_.end(), std::make_tuple(user, org, role)) != ura_.end();
}

bool RefModel::is_admin(const Address& a, const OrgId& org) const {
  auto it = orgs_.find(org);
  return it != orgs_.end() && std::find(it->second.admins.begin(), it->second.admins.end(), a) != it->second.admins.end();
}

bool RefModel::check(const Address& user, const OrgId& org, const Permission& p, std::set<RoleId>* via) const {
  bool granted = false;
  // Exhaustive: every (ura, pra) pair.
  for (const auto& [u, o, r] : ura_)
    for (const auto& [po, pr, pp] : pra_)
      if (u == user && o == org && po == org && pr == r && pp == p) {
        granted = true;
        if (via) via->insert(r);
      }
  return granted;
}

std::set<std::tuple<Address, OrgId, RoleId>> RefModel::ura() const { return {ura_.begin(), ura_.end()}; }
std::set<std::tuple<OrgId, RoleId, Permission>> RefModel::pra() const { return {pra_.begin(), pra_.end()}; }

std::optional<ErrorCode> RefModel::apply(const SignedTransaction& tx) {
  std::optional<PublicKey> key;
  if (auto it = user_keys_.find(tx.sender); it != user_keys_.end()) key = it->second;
  else if (auto g = genesis_keys_.find(tx.sender); g != genesis_keys_.end()) key = g->second;
  else if (auto* reg = std::get_if<RegisterUser>(&tx.payload); reg && reg->user == tx.sender) key = reg->public_key;
  if (!key) return ErrorCode::NotRegistered;
  if (!crypto::ed25519_verify(tx.signature, as_bytes(signing_bytes(tx.body())), *key)) return ErrorCode::BadSignature;
  if (tx.nonce != next_nonce(tx.sender)) return ErrorCode::BadNonce;
  if (auto err = dispatch(tx.sender, tx.payload)) return err;
  next_[tx.sender] = tx.nonce + 1;
  return std::nullopt;
}

std::optional<ErrorCode> RefModel::dispatch(const Address& signer, const Payload& payload) {
  auto holders = [&](const OrgId& org, const RoleId& role) {
    return std::count_if(ura_.begin(), ura_.end(), [&](const auto& t) {
      return std::get<1>(t) == org && std::get<2>(t) == role;
    });
  };
  auto full = [&](const OrgId& org, const RoleId& role) {
    const auto& def = orgs_.at(org).roles.at(role);
    return def.max_holders && holders(org, role) >= static_cast<long>(*def.max_holders);
  };

  if (const auto* p = std::get_if<RegisterUser>(&payload)) {
    if (!ident_ok(p->org) || !ident_ok(p->requested_role)) return ErrorCode::InvalidPayload;
    if (signer != p->user || crypto::derive_address(p->public_key) != p->user) return ErrorCode::AddressMismatch;
    if (auto k = user_keys_.find(p->user); k != user_keys_.end() && k->second != p->public_key)
      return ErrorCode::AddressMismatch;
    auto org = orgs_.find(p->org);
    if (org == orgs_.end()) return ErrorCode::UnknownOrg;
    for (const auto& [u, o, r] : ura_)
      if (u == p->user && o == p->org) return ErrorCode::AlreadyRegistered;
    auto role = org->second.roles.find(p->requested_role);
    if (role == org->second.roles.end()) return ErrorCode::UnknownRole;
    if (!role->second.self_assignable) return ErrorCode::NotEligible;
    if (full(p->org, p->requested_role)) return ErrorCode::RoleFull;
    user_keys_.emplace(p->user, p->public_key);
    ura_.emplace_back(p->user, p->org, p->requested_role);
    return std::nullopt;
  }
  if (const auto* p = std::get_if<UpdateUserRole>(&payload)) {
    if (!ident_ok(p->org) || !ident_ok(p->old_role) || !ident_ok(p->new_role) || p->old_role == p->new_role)
      return ErrorCode::InvalidPayload;
    if (!registered(p->user)) return ErrorCode::NotRegistered;
    auto org = orgs_.find(p->org);
    if (org == orgs_.end()) return ErrorCode::UnknownOrg;
    auto role = org->second.roles.find(p->new_role);
    if (role == org->second.roles.end()) return ErrorCode::UnknownRole;
    const bool adding = p->old_role == "none";
    if (!is_admin(signer, p->org) && (signer != p->user || adding || !role->second.self_assignable))
      return ErrorCode::NotAuthorized;
    if (!adding && !holds(p->user, p->org, p->old_role)) return ErrorCode::NoSuchAssignment;
    if (holds(p->user, p->org, p->new_role)) return ErrorCode::AlreadyAssigned;
    if (full(p->org, p->new_role)) return ErrorCode::RoleFull;
    if (!adding)
      ura_.erase(std::find(ura_.begin(), ura_.end(), std::make_tuple(p->user, p->org, p->old_role)));
    ura_.emplace_back(p->user, p->org, p->new_role);
    return std::nullopt;
  }
  const bool grant = std::holds_alternative<GrantPermission>(payload);
  const auto [org_id, role_id, perm] = grant
      ? std::make_tuple(std::get<GrantPermission>(payload).org, std::get<GrantPermission>(payload).role,
                        std::get<GrantPermission>(payload).permission)
      : std::make_tuple(std::get<RevokePermission>(payload).org, std::get<RevokePermission>(payload).role,
                        std::get<RevokePermission>(payload).permission);
  if (!ident_ok(org_id) || !ident_ok(role_id) || !ident_ok(perm.resource) || !ident_ok(perm.action))
    return ErrorCode::InvalidPayload;
  auto org = orgs_.find(org_id);
  if (org == orgs_.end()) return ErrorCode::UnknownOrg;
  if (!is_admin(signer, org_id)) return ErrorCode::NotAuthorized;
  if (!org->second.roles.contains(role_id)) return ErrorCode::UnknownRole;
  auto it = std::find(pra_.begin(), pra_.end(), std::make_tuple(org_id, role_id, perm));
  if (grant) {
    if (it != pra_.end()) return ErrorCode::DuplicateGrant;
    pra_.emplace_back(org_id, role_id, perm);
  } else {
    if (it == pra_.end()) return ErrorCode::NotGranted;
    pra_.erase(it);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- TxGen

TxGen::TxGen(const Universe& u, std::uint64_t seed, double valid_bias)
    : u_(u), rng_(seed), valid_bias_(valid_bias) {}

const Actor& TxGen::pick_user() { return u_.users[rng_() % u_.users.size()]; }

const Actor& TxGen::pick_any() {
  const auto all = u_.everyone();
  return *all[rng_() % all.size()];
}

OrgId TxGen::pick_org() {
  if (rng_() % 20 == 0) return "nosuch";
  return u_.orgs[rng_() % u_.orgs.size()];
}

RoleId TxGen::pick_role(const OrgId& org) {
  auto it = u_.roles.find(org);
  if (it == u_.roles.end() || rng_() % 20 == 0) return "ghost";
  return it->second[rng_() % it->second.size()];
}

Permission TxGen::pick_perm() { return u_.permissions[rng_() % u_.permissions.size()]; }

SignedTransaction TxGen::next(const RefModel& model) {
  std::uniform_real_distribution<double> coin(0, 1);
  const bool want_valid = coin(rng_) < valid_bias_;
  const auto ura = model.ura();
  const auto pra = model.pra();

  auto policy = [&](const OrgId& org, const RoleId& role) -> const state::RolePolicy* {
    for (const auto& o : u_.genesis.orgs)
      if (o.org_id == org) return o.role(role);
    return nullptr;
  };
  auto has_room = [&](const OrgId& org, const RoleId& role) {
    const auto* pol = policy(org, role);
    if (!pol || !pol->max_holders) return true;
    std::size_t n = 0;
    for (const auto& [u, o, r] : ura)
      if (o == org && r == role) ++n;
    return n < *pol->max_holders;
  };
  auto in_org = [&](const Address& a, const OrgId& org) {
    for (const auto& [u, o, r] : ura)
      if (u == a && o == org) return true;
    return false;
  };

  if (want_valid) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      const int kind = static_cast<int>(rng_() % 5);
      const std::size_t oi = rng_() % u_.orgs.size();
      const OrgId& org = u_.orgs[oi];
      const Actor& admin = u_.admins[oi];
      if (kind == 0) {  // self registration
        const Actor& user = pick_user();
        if (in_org(user.address, org)) continue;
        std::vector<RoleId> ok;
        for (const auto& r : u_.roles.at(org))
          if (policy(org, r)->self_assignable && has_room(org, r)) ok.push_back(r);
        if (ok.empty()) continue;
        return user.sign(model.next_nonce(user.address), user.registration(org, ok[rng_() % ok.size()]));
      }
      if (kind == 1 || kind == 2) {  // role update by the user or by the admin
        std::vector<std::tuple<Address, OrgId, RoleId>> held;
        for (const auto& t : ura)
          if (std::get<1>(t) == org) held.push_back(t);
        const bool by_admin = kind == 2;
        const Actor* user = nullptr;
        RoleId old_role(kNoRole);
        if (!held.empty() && (!by_admin || rng_() % 3 != 0)) {
          const auto& [addr, o, r] = held[rng_() % held.size()];
          for (const auto& cand : u_.users)
            if (cand.address == addr) user = &cand;
          old_role = r;
        } else if (by_admin) {
          std::vector<const Actor*> regs;
          for (const auto& cand : u_.users)
            if (model.registered(cand.address)) regs.push_back(&cand);
          if (regs.empty()) continue;
          user = regs[rng_() % regs.size()];
        }
        if (!user) continue;
        std::vector<RoleId> targets;
        for (const auto& r : u_.roles.at(org)) {
          if (r == old_role || model.holds(user->address, org, r) || !has_room(org, r)) continue;
          if (!by_admin && !policy(org, r)->self_assignable) continue;
          targets.push_back(r);
        }
        if (targets.empty()) continue;
        const Actor& signer = by_admin ? admin : *user;
        return signer.sign(model.next_nonce(signer.address),
                           UpdateUserRole{user->address, org, old_role, targets[rng_() % targets.size()]});
      }
      if (kind == 3) {  // grant
        const RoleId role = u_.roles.at(org)[rng_() % u_.roles.at(org).size()];
        const Permission perm = pick_perm();
        if (pra.contains({org, role, perm})) continue;
        return admin.sign(model.next_nonce(admin.address), GrantPermission{org, role, perm});
      }
      std::vector<std::tuple<OrgId, RoleId, Permission>> mine;
      for (const auto& t : pra)
        if (std::get<0>(t) == org) mine.push_back(t);
      if (mine.empty()) continue;
      const auto& [o, r, p] = mine[rng_() % mine.size()];
      return admin.sign(model.next_nonce(admin.address), RevokePermission{o, r, p});
    }
  }

  // Arbitrary transaction: random signer, fields and nonce.
  const Actor& signer = rng_() % 3 == 0 ? u_.admins[rng_() % u_.admins.size()] : pick_any();
  const OrgId org = pick_org();
  Payload payload;
  switch (rng_() % 4) {
    case 0: {
      const Actor& who = rng_() % 6 == 0 ? pick_user() : signer;
      payload = who.registration(org, pick_role(org));
      break;
    }
    case 1: {
      const Actor& who = rng_() % 2 ? signer : pick_user();
      payload = UpdateUserRole{who.address, org, rng_() % 3 == 0 ? RoleId(kNoRole) : pick_role(org), pick_role(org)};
      break;
    }
    case 2:
      payload = GrantPermission{org, pick_role(org), pick_perm()};
      break;
    default:
      payload = RevokePermission{org, pick_role(org), pick_perm()};
  }
  std::uint64_t nonce = model.next_nonce(signer.address);
  const auto roll = rng_() % 10;
  if (roll == 0) nonce += 1 + rng_() % 2;
  else if (roll == 1 && nonce > 0) nonce -= 1;
  auto tx = signer.sign(nonce, std::move(payload));
  if (rng_() % 12 == 0) tx.signature[rng_() % tx.signature.size()] ^= static_cast<std::uint8_t>(1 + rng_() % 255);
  return tx;
}

// ---------------------------------------------------------------- helpers

std::set<std::tuple<Address, OrgId, RoleId>> ura_of(const state::WorldState& s) {
  std::set<std::tuple<Address, OrgId, RoleId>> out;
  for (const auto& e : s.ura) out.emplace(e.user, e.org, e.role);
  return out;
}

std::set<std::tuple<OrgId, RoleId, Permission>> pra_of(const state::WorldState& s) {
  std::set<std::tuple<OrgId, RoleId, Permission>> out;
  for (const auto& e : s.pra) out.emplace(e.org, e.role, e.permission);
  return out;
}

std::pair<std::set<std::tuple<Address, OrgId, RoleId>>, std::set<std::tuple<OrgId, RoleId, Permission>>>
fold_events(const std::vector<state::Event>& events) {
  std::set<std::tuple<Address, OrgId, RoleId>> ura;
  std::set<std::tuple<OrgId, RoleId, Permission>> pra;
  for (const auto& e : events) {
    switch (e.kind) {
      case state::EventKind::UserRegistered:
        ura.emplace(e.user, e.org, e.role);
        break;
      case state::EventKind::UserRoleUpdated:
        if (e.old_role != kNoRole) ura.erase({e.user, e.org, e.old_role});
        ura.emplace(e.user, e.org, e.new_role);
        break;
      case state::EventKind::PermissionGranted:
        pra.emplace(e.org, e.role, e.permission);
        break;
      case state::EventKind::PermissionRevoked:
        pra.erase({e.org, e.role, e.permission});
        break;
    }
  }
  return {ura, pra};
}

BuiltChain build_random_chain(const Universe& u, std::uint64_t seed, std::size_t blocks, std::size_t per_block) {
  BuiltChain out;
  out.state = u.state;
  RefModel model(u);
  TxGen gen(u, seed, 0.85);
  (void)out.chain.append(ledger::genesis_block(u.state));
  for (std::size_t h = 1; h <= blocks; ++h) {
    std::vector<SignedTransaction> txs;
    for (std::size_t i = 0; i < per_block; ++i) {
      auto tx = gen.next(model);
      if (!model.apply(tx)) txs.push_back(std::move(tx));
    }
    const auto& v = u.genesis.validators;
    auto built = ledger::build_block(out.chain.tip().header, txs, out.state, v[h % v.size()], h * 3);
    if (!built) throw std::runtime_error("reference-valid block failed to build: " + built.error().describe());
    out.applied += txs.size();
    out.events.insert(out.events.end(), built->block.events.begin(), built->block.events.end());
    out.state = std::move(built->state);
    if (auto st = out.chain.append(std::move(built->block)); !st) throw std::runtime_error(st.error().describe());
  }
  return out;
}

}  // namespace cgtest
