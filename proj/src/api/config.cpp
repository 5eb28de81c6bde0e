// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "api/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace chainguard::api {

namespace {
Error bad(const std::string& why) { return make_error(ErrorCode::Malformed, "config: " + why); }

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}
}  // namespace

Result<NodeConfig> node_config_from_json(const Json& j) {
  if (!j.is_object()) return bad("expected an object");
  NodeConfig c;
  for (const auto& [key, v] : j.items()) {
    auto str = [&](std::string& out) -> bool {
      if (!v.is_string()) return false;
      out = v.get<std::string>();
      return true;
    };
    auto num = [&](std::uint64_t& out) -> bool {
      if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) return false;
      out = v.get<std::uint64_t>();
      return true;
    };
    bool ok = true;
    std::uint64_t n = 0;
    if (key == "listen") ok = str(c.listen);
    else if (key == "data_dir") ok = str(c.data_dir);
    else if (key == "genesis") ok = str(c.genesis_path);
    else if (key == "validator_key") ok = str(c.validator_key_path);
    else if (key == "port") {
      ok = num(n) && n <= 65535;
      c.port = static_cast<std::uint16_t>(n);
    } else if (key == "serve_index") {
      ok = num(n);
      c.serve_index = n;
    } else if (key == "serve_all") {
      ok = v.is_boolean();
      if (ok) c.serve_all = v.get<bool>();
    } else if (key == "tick_ms") ok = num(c.tick_ms);
    else if (key == "seed") ok = num(c.seed);
    else if (key == "proposer_timeout") ok = num(c.proposer_timeout) && c.proposer_timeout > 0;
    else if (key == "status_interval") ok = num(c.status_interval) && c.status_interval > 0;
    else return bad("unknown member '" + key + "'");
    if (!ok) return bad("bad value for '" + key + "'");
  }
  return c;
}

Result<NodeConfig> load_node_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return make_error(ErrorCode::IoError, "cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto j = parse_json(buf.str());
  if (!j) return bad(path + " is not JSON");
  return node_config_from_json(*j);
}

EnvLookup process_env() {
  return [](const char* name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name)) return std::string(v);
    return std::nullopt;
  };
}

Status apply_env_overrides(NodeConfig& cfg, const EnvLookup& env) {
  if (auto v = env("CHAINGUARD_LISTEN")) cfg.listen = *v;
  if (auto v = env("CHAINGUARD_PORT")) {
    auto n = parse_u64(*v);
    if (!n || *n > 65535) return bad("CHAINGUARD_PORT is not a port number");
    cfg.port = static_cast<std::uint16_t>(*n);
  }
  if (auto v = env("CHAINGUARD_DATA_DIR")) cfg.data_dir = *v;
  if (auto v = env("CHAINGUARD_GENESIS")) cfg.genesis_path = *v;
  if (auto v = env("CHAINGUARD_VALIDATOR_KEY")) cfg.validator_key_path = *v;
  return ok_status();
}

}  // namespace chainguard::api
