// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ledger/chain.hpp"
#include "persistence/genesis.hpp"
#include "state/world_state.hpp"
#include "wallet/wallet.hpp"

namespace cgtest {

using namespace chainguard;

wallet::Seed seed_of(std::uint8_t fill);

struct Actor {
  std::string name;
  wallet::Seed seed{};
  Address address;
  PublicKey public_key;

  static Actor make(std::string name, const wallet::Seed& seed);
  static Actor fill(std::string name, std::uint8_t b) { return make(std::move(name), seed_of(b)); }

  SignedTransaction sign(std::uint64_t nonce, Payload payload) const;
  RegisterUser registration(const OrgId& org, const RoleId& role) const;
};

// The fixed fixture used by unit tests whose digests are pinned:
// admin = 0x01.., alice = 0x02.., bob = 0x03.., carol = 0x04..,
// validators = 0x10..0x13; org "acme" with roles member (self-assignable,
// unlimited) and auditor (admin-assigned, at most one holder).
struct Fixture {
  Actor admin = Actor::fill("admin", 0x01);
  Actor alice = Actor::fill("alice", 0x02);
  Actor bob = Actor::fill("bob", 0x03);
  Actor carol = Actor::fill("carol", 0x04);
  Actor admin2 = Actor::fill("admin2", 0x05);
  std::vector<Actor> validators;
  persistence::GenesisFile genesis;
  state::WorldState state;

  // two_orgs adds "globex", administered by admin2 only, with the same
  // catalog as acme.
  explicit Fixture(bool two_orgs = false);
};

// Randomized universe: orgs with role catalogs and admins, a pool of users
// and a pool of permissions.
struct Shape {
  int orgs = 3;
  int roles_per_org = 4;
  int users = 12;
  int permissions = 6;
};

struct RoleDef {
  bool self_assignable = true;
  std::optional<std::uint32_t> max_holders;
};

struct Universe {
  persistence::GenesisFile genesis;
  state::WorldState state;
  std::vector<Actor> admins;  // admins[i] administers orgs[i]
  std::vector<Actor> users;
  std::vector<OrgId> orgs;
  std::map<OrgId, std::vector<RoleId>> roles;
  std::vector<Permission> permissions;
  std::vector<Actor> validators;

  std::vector<const Actor*> everyone() const;
};

Universe make_universe(std::mt19937_64& rng, const Shape& shape, int validators = 4);

// Independent reference implementation of the contract rules using flat
// vectors and linear scans. Used as the oracle for the real state machine.
class RefModel {
 public:
  explicit RefModel(const Universe& u);
  explicit RefModel(const persistence::GenesisFile& g);

  /// nullopt on success. Mutates only on success.
  std::optional<ErrorCode> apply(const SignedTransaction& tx);
  std::uint64_t next_nonce(const Address& a) const;
  bool check(const Address& user, const OrgId& org, const Permission& p, std::set<RoleId>* via = nullptr) const;

  bool registered(const Address& a) const;
  bool holds(const Address& user, const OrgId& org, const RoleId& role) const;
  bool is_admin(const Address& a, const OrgId& org) const;

  std::set<std::tuple<Address, OrgId, RoleId>> ura() const;
  std::set<std::tuple<OrgId, RoleId, Permission>> pra() const;

 private:
  struct Org {
    std::vector<Address> admins;
    std::map<RoleId, RoleDef> roles;
  };
  std::optional<ErrorCode> dispatch(const Address& signer, const Payload& p);

  std::map<OrgId, Org> orgs_;
  std::map<Address, PublicKey> genesis_keys_;
  std::map<Address, PublicKey> user_keys_;
  std::map<Address, std::uint64_t> next_;
  std::vector<std::tuple<Address, OrgId, RoleId>> ura_;
  std::vector<std::tuple<OrgId, RoleId, Permission>> pra_;
};

// Generates a random mix of valid and invalid transactions. Roughly
// `valid_bias` of them are built to succeed against the model's current
// state; the rest probe error paths (wrong signer, bad nonce, bad signature,
// unknown org/role, duplicates, capacity).
class TxGen {
 public:
  TxGen(const Universe& u, std::uint64_t seed, double valid_bias = 0.7);
  SignedTransaction next(const RefModel& model);

 private:
  const Actor& pick_user();
  const Actor& pick_any();
  OrgId pick_org();
  RoleId pick_role(const OrgId& org);
  Permission pick_perm();

  const Universe& u_;
  std::mt19937_64 rng_;
  double valid_bias_;
};

/// ura of a WorldState as plain tuples (for comparison with RefModel).
std::set<std::tuple<Address, OrgId, RoleId>> ura_of(const state::WorldState& s);
std::set<std::tuple<OrgId, RoleId, Permission>> pra_of(const state::WorldState& s);

/// Folds only the event log into (ura, pra).
std::pair<std::set<std::tuple<Address, OrgId, RoleId>>, std::set<std::tuple<OrgId, RoleId, Permission>>>
fold_events(const std::vector<state::Event>& events);

/// Chain built from the generator on a single proposer: each block gets up
/// to `per_block` transactions that are valid at build time (invalid ones are
/// discarded). Returns the chain and the final incremental state.
struct BuiltChain {
  ledger::Chain chain;
  state::WorldState state;
  std::vector<state::Event> events;
  std::size_t applied = 0;
};
BuiltChain build_random_chain(const Universe& u, std::uint64_t seed, std::size_t blocks, std::size_t per_block);

}  // namespace cgtest
