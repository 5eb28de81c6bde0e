// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "api/config.hpp"
#include "consensus/network.hpp"
#include "persistence/genesis.hpp"
#include "persistence/store.hpp"

namespace httplib {
class Server;
}

namespace chainguard::api {

struct ApiRequest {
  std::string method;  // "GET" or "POST"
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

/// HTTP status used for an error code.
int http_status(ErrorCode code);
Json error_body(const Error& e);

// Hosts the validator set in-process (as a simulated network ticking in real
// time) and serves the HTTP API for one or all of its validators. Every
// request and every tick runs under one mutex, so handlers always see a
// committed snapshot.
class NodeService {
 public:
  /// Loads persisted chains from cfg.data_dir (if set) and verifies them.
  static Result<std::unique_ptr<NodeService>> create(NodeConfig cfg, persistence::GenesisFile genesis);
  ~NodeService();

  NodeService(const NodeService&) = delete;
  NodeService& operator=(const NodeService&) = delete;

  /// Binds the listener(s) and starts the ticker thread.
  Status start();
  void stop();

  /// Port serving validator `i` (after start()).
  std::uint16_t port(std::size_t i) const;
  std::size_t served_index() const { return cfg_.serve_index; }
  const NodeConfig& config() const { return cfg_; }

  /// Dispatches one request as validator `node` would answer it.
  ApiResponse handle(std::size_t node, const ApiRequest& req);

  /// Runs the network forward `ticks` steps (manual clock, tests).
  void advance(std::uint64_t ticks);
  void crash(std::size_t i);
  void recover(std::size_t i);

 private:
  NodeService(NodeConfig cfg, persistence::GenesisFile genesis);
  Status restore();

  ApiResponse route(std::size_t node, const ApiRequest& req);
  ApiResponse post_transaction(std::size_t node, const ApiRequest& req);
  ApiResponse get_transaction(std::size_t node, const std::string& id);
  ApiResponse check_permission(std::size_t node, const ApiRequest& req);
  ApiResponse get_user(std::size_t node, const std::string& addr, bool roles_only);
  ApiResponse get_block(std::size_t node, const std::string& height);
  ApiResponse get_events(std::size_t node, const ApiRequest& req);
  ApiResponse get_nonce(std::size_t node, const std::string& addr);
  ApiResponse get_status(std::size_t node);

  NodeConfig cfg_;
  persistence::GenesisFile genesis_;
  std::mutex mu_;
  std::unique_ptr<consensus::Network> net_;
  std::vector<persistence::ChainStore> stores_;
  std::optional<Error> store_error_;

  std::vector<std::unique_ptr<httplib::Server>> servers_;
  std::vector<std::uint16_t> ports_;
  std::vector<std::thread> threads_;
  std::thread ticker_;
  bool stopping_ = false;
  std::condition_variable stop_cv_;
};

}  // namespace chainguard::api
