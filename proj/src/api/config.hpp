// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "common/canonical_json.hpp"
#include "common/errors.hpp"

namespace chainguard::api {

struct NodeConfig {
  std::string listen = "127.0.0.1";
  std::uint16_t port = 8645;  // 0 picks a free port
  std::string data_dir;       // empty: in-memory only
  std::string genesis_path;
  // Optional {"address": ...} file choosing which validator this node answers as.
  std::string validator_key_path;
  std::size_t serve_index = 0;
  bool serve_all = false;  // one listener per validator on port + i
  std::uint64_t tick_ms = 20;  // 0: no ticker thread, time advances only via advance()
  std::uint64_t seed = 0;
  std::uint64_t proposer_timeout = 4;
  std::uint64_t status_interval = 6;
};

/// Every member is optional; unknown members are rejected.
Result<NodeConfig> node_config_from_json(const Json& j);
Result<NodeConfig> load_node_config(const std::string& path);

using EnvLookup = std::function<std::optional<std::string>(const char*)>;
EnvLookup process_env();

/// CHAINGUARD_LISTEN, CHAINGUARD_PORT, CHAINGUARD_DATA_DIR,
/// CHAINGUARD_GENESIS, CHAINGUARD_VALIDATOR_KEY.
Status apply_env_overrides(NodeConfig& cfg, const EnvLookup& env);

}  // namespace chainguard::api
