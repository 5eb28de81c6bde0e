// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0
//
// chainguard-node: hosts the validator set and serves the HTTP API.
// Settings come from the config file, then CHAINGUARD_* environment
// variables, then flags.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "chainguard.h"

namespace {
volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }
}  // namespace

int main(int argc, char** argv) {
  using Json = nlohmann::json;
  CLI::App app{"ChainGuard validator host"};
  std::string config_path, genesis, data_dir, listen;
  int port = -1;
  bool serve_all = false;
  app.add_option("--config", config_path, "Node config file (JSON)");
  app.add_option("--genesis", genesis);
  app.add_option("--data-dir", data_dir);
  app.add_option("--listen", listen);
  app.add_option("--port", port)->check(CLI::Range(0, 65535));
  app.add_flag("--serve-all", serve_all, "Serve every validator, on port + index");
  CLI11_PARSE(app, argc, argv);

  Json cfg = Json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    cfg = Json::parse(in, nullptr, false);
    if (!cfg.is_object()) {
      std::cerr << "error: " << config_path << " is not a JSON object\n";
      return 2;
    }
  }
  const std::pair<const char*, const char*> env_keys[] = {{"CHAINGUARD_LISTEN", "listen"},
                                                          {"CHAINGUARD_DATA_DIR", "data_dir"},
                                                          {"CHAINGUARD_GENESIS", "genesis"},
                                                          {"CHAINGUARD_VALIDATOR_KEY", "validator_key"}};
  for (const auto& [var, key] : env_keys)
    if (const char* v = std::getenv(var)) cfg[key] = v;
  if (const char* v = std::getenv("CHAINGUARD_PORT")) cfg["port"] = std::strtoul(v, nullptr, 10);
  if (!genesis.empty()) cfg["genesis"] = genesis;
  if (!data_dir.empty()) cfg["data_dir"] = data_dir;
  if (!listen.empty()) cfg["listen"] = listen;
  if (port >= 0) cfg["port"] = port;
  if (serve_all) cfg["serve_all"] = true;

  cg_node* node = nullptr;
  if (cg_node_create(cfg.dump().c_str(), 0, &node) != CG_OK) {
    std::cerr << "error: " << cg_last_error() << "\n";
    return 1;
  }
  if (cg_node_start(node) != CG_OK) {
    std::cerr << "error: " << cg_last_error() << "\n";
    cg_node_free(node);
    return 1;
  }
  const std::string host = cfg.value("listen", "127.0.0.1");
  for (std::size_t i = 0; i < 1024; ++i)
    if (auto p = cg_node_port(node, i)) std::cout << "validator " << i << " listening on " << host << ":" << p << std::endl;

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  cg_node_stop(node);
  cg_node_free(node);
  return 0;
}
