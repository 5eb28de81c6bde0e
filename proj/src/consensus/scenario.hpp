// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "consensus/network.hpp"
#include "persistence/genesis.hpp"
#include "wallet/wallet.hpp"

// Declarative simulation runs.
//
//   {
//     "identities": {"admin": "<64 hex seed>", "alice": null},
//     "genesis": {... "@admin" anywhere an address is expected ...},
//     "seed": 7, "proposer_timeout": 4, "status_interval": 6,
//     "latency": {"min": 1, "max": 3}, "max_ticks": 2000,
//     "faults": {"crashes": [...], "partitions": [...], "drops": [...]},
//     "workload": [
//       {"tick": 1, "entry": 0, "op": "register", "as": "alice", "org": "acme", "role": "staff"},
//       {"tick": 2, "op": "grant", "as": "admin", "org": "acme", "role": "staff",
//        "resource": "ledger", "action": "read"},
//       {"tick": 3, "tx": {... pre-signed transaction ...}}
//     ]
//   }
//
// A null identity seed is derived from the name. In the genesis, "@name"
// stands for that identity's address, and inside "accounts" also expands to
// the {address, public_key} pair. "genesis" may instead be a file path,
// resolved against the scenario's directory.
namespace chainguard::consensus {

struct WorkloadEntry {
  std::uint64_t tick = 0;
  std::size_t entry = 0;
  SignedTransaction tx;
};

struct Scenario {
  persistence::GenesisFile genesis;
  NetworkConfig config;
  std::uint64_t max_ticks = 1000;
  std::vector<WorkloadEntry> workload;
  std::map<std::string, Address> identities;
};

/// Malformed on any structural problem, with a message naming the field.
Result<Scenario> parse_scenario(const Json& j, const std::string& base_dir = ".");
Result<Scenario> load_scenario_file(const std::string& path);

/// Seed used for an identity listed without one.
wallet::Seed derived_identity_seed(std::string_view name);

struct Submission {
  std::uint64_t tick = 0;
  Digest tx_id;
  bool accepted = false;
  std::optional<Error> error;
};

struct SimRun {
  RunOutcome outcome;
  std::vector<Submission> submissions;
  std::vector<ledger::Chain> chains;  // per validator, final
};

/// Injects each workload entry once the clock reaches its tick and runs
/// until the workload is exhausted and the network is quiescent, or
/// max_ticks steps have elapsed (Timeout).
SimRun run_scenario(const Scenario& s, bool record_trace = false);

Json sim_run_to_json(const SimRun& run);

}  // namespace chainguard::consensus
