// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "common/canonical_json.hpp"
#include "common/errors.hpp"
#include "state/world_state.hpp"

namespace chainguard::persistence {

// Network bootstrap document. Organizations, their admins and role catalogs
// exist only here; there is no on-chain transaction that creates them.
struct GenesisFile {
  std::string chain_id;
  std::vector<Address> validators;
  std::vector<std::pair<Address, PublicKey>> accounts;
  std::vector<state::OrgRecord> orgs;
};

Json genesis_to_json(const GenesisFile& g);
std::string genesis_bytes(const GenesisFile& g);
Digest genesis_hash(const GenesisFile& g);

/// Validates structure and invariants: at least one validator, unique ids,
/// non-empty admin sets, admins present in `accounts`, account addresses
/// derived from their keys, no role named "none".
Result<GenesisFile> genesis_from_json(const Json& j);
Result<GenesisFile> load_genesis_file(const std::string& path);

state::WorldState genesis_state(const GenesisFile& g);

}  // namespace chainguard::persistence
