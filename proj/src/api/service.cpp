// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "api/service.hpp"

#include <httplib.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "contracts/sco.hpp"
#include "state/apply.hpp"

namespace chainguard::api {

namespace {

ApiResponse json_response(int status, const Json& body) { return {status, canonical_dump(body)}; }

ApiResponse fail(ErrorCode code, std::string message) {
  return json_response(http_status(code), error_body(make_error(code, std::move(message))));
}

ApiResponse fail(const Error& e) { return json_response(http_status(e.code), error_body(e)); }

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos < path.size()) {
    const auto slash = path.find('/', pos);
    const auto end = slash == std::string_view::npos ? path.size() : slash;
    if (end > pos) parts.emplace_back(path.substr(pos, end - pos));
    pos = end + 1;
  }
  return parts;
}

Json roles_json(const std::map<OrgId, std::set<RoleId>>& roles) {
  Json out = Json::array();
  for (const auto& [org, set] : roles)
    for (const auto& role : set) out.push_back({{"org", org}, {"role", role}});
  return out;
}

ApiRequest from_httplib(const httplib::Request& r) {
  ApiRequest req;
  req.method = r.method;
  req.path = r.path;
  for (const auto& [k, v] : r.params) req.query.emplace(k, v);
  req.body = r.body;
  return req;
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Malformed:
    case ErrorCode::MissingParam:
    case ErrorCode::InvalidPayload:
      return 400;
    case ErrorCode::NotFound:
    case ErrorCode::NotRegistered:
      return 404;
    case ErrorCode::Unavailable:
      return 503;
    case ErrorCode::Timeout:
      return 504;
    case ErrorCode::IoError:
    case ErrorCode::Internal:
    case ErrorCode::CorruptStore:
      return 500;
    default:
      return 422;
  }
}

Json error_body(const Error& e) {
  Json j{{"code", error_name(e.code)}, {"message", e.message}};
  if (e.height) j["height"] = *e.height;
  return j;
}

NodeService::NodeService(NodeConfig cfg, persistence::GenesisFile genesis)
    : cfg_(std::move(cfg)), genesis_(std::move(genesis)) {}

NodeService::~NodeService() { stop(); }

Result<std::unique_ptr<NodeService>> NodeService::create(NodeConfig cfg, persistence::GenesisFile genesis) {
  const std::size_t n = genesis.validators.size();
  if (!cfg.validator_key_path.empty()) {
    std::ifstream in(cfg.validator_key_path, std::ios::binary);
    if (!in) return make_error(ErrorCode::IoError, "cannot open validator key " + cfg.validator_key_path);
    std::stringstream buf;
    buf << in.rdbuf();
    auto j = parse_json(buf.str());
    std::optional<Address> addr;
    if (j && j->is_object() && j->contains("address") && (*j)["address"].is_string())
      addr = Address::parse((*j)["address"].get<std::string>());
    if (!addr) return make_error(ErrorCode::Malformed, "validator key file needs an address");
    auto it = std::find(genesis.validators.begin(), genesis.validators.end(), *addr);
    if (it == genesis.validators.end())
      return make_error(ErrorCode::NotAuthorized, addr->hex() + " is not a genesis validator");
    cfg.serve_index = static_cast<std::size_t>(it - genesis.validators.begin());
  }
  if (cfg.serve_index >= n) return make_error(ErrorCode::Malformed, "serve_index out of range");

  std::unique_ptr<NodeService> svc(new NodeService(std::move(cfg), std::move(genesis)));
  consensus::NetworkConfig net;
  net.validators = svc->genesis_.validators;
  net.rng_seed = svc->cfg_.seed;
  net.proposer_timeout = svc->cfg_.proposer_timeout;
  net.status_interval = svc->cfg_.status_interval;
  svc->net_ = std::make_unique<consensus::Network>(net, persistence::genesis_state(svc->genesis_));
  if (auto st = svc->restore(); !st) return st.error();
  return svc;
}

Status NodeService::restore() {
  if (cfg_.data_dir.empty()) return ok_status();
  const auto genesis = persistence::genesis_state(genesis_);
  const std::size_t n = genesis_.validators.size();
  std::vector<ledger::Chain> chains;
  for (std::size_t i = 0; i < n; ++i) {
    persistence::DataDir dir{cfg_.data_dir + "/node-" + std::to_string(i)};
    if (auto st = persistence::prepare_data_dir(dir, genesis_, genesis_.validators[i]); !st) return st;
    auto store = persistence::ChainStore::open(dir.chain_path());
    if (!store) return store.error();
    auto loaded = store->load(genesis);
    if (!loaded) return loaded.error();
    if (loaded->chain.empty()) {
      (void)loaded->chain.append(ledger::genesis_block(genesis));
      if (auto st = store->append(loaded->chain.tip()); !st) return st;
    }
    chains.push_back(std::move(loaded->chain));
    stores_.push_back(std::move(*store));
  }

  // All validators restart together, so bring any that fell behind up to
  // the longest persisted chain before consensus resumes.
  std::size_t longest = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (chains[i].size() > chains[longest].size()) longest = i;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t h = 0; h < chains[i].size(); ++h)
      if (ledger::block_bytes(chains[i].at(h)) != ledger::block_bytes(chains[longest].at(h))) {
        Error e = make_error(ErrorCode::CorruptStore, "node-" + std::to_string(i) + " disagrees with node-" +
                                                          std::to_string(longest));
        e.height = h;
        return e;
      }
    for (std::size_t h = chains[i].size(); h < chains[longest].size(); ++h) {
      if (auto st = stores_[i].append(chains[longest].at(h)); !st) return st;
    }
    if (auto st = net_->restore_node(i, chains[longest]); !st) return st;
  }

  net_->set_commit_hook([this](std::size_t node, const ledger::Block& b) {
    if (auto st = stores_[node].append(b); !st && !store_error_) store_error_ = st.error();
  });
  return ok_status();
}

Status NodeService::start() {
  const std::size_t n = genesis_.validators.size();
  std::vector<std::size_t> served;
  if (cfg_.serve_all)
    for (std::size_t i = 0; i < n; ++i) served.push_back(i);
  else
    served.push_back(cfg_.serve_index);
  ports_.assign(n, 0);

  for (std::size_t k = 0; k < served.size(); ++k) {
    const std::size_t node = served[k];
    auto srv = std::make_unique<httplib::Server>();
    auto handler = [this, node](const httplib::Request& r, httplib::Response& res) {
      auto out = handle(node, from_httplib(r));
      res.status = out.status;
      res.set_content(out.body, "application/json");
    };
    srv->Get(R"(/.*)", handler);
    srv->Post(R"(/.*)", handler);
    int port = 0;
    if (cfg_.port == 0) {
      port = srv->bind_to_any_port(cfg_.listen);
    } else {
      port = cfg_.port + static_cast<int>(k);
      if (!srv->bind_to_port(cfg_.listen, port)) port = -1;
    }
    if (port <= 0) {
      stop();
      return make_error(ErrorCode::IoError, "cannot listen on " + cfg_.listen + ":" + std::to_string(cfg_.port + k));
    }
    ports_[node] = static_cast<std::uint16_t>(port);
    auto* raw = srv.get();
    servers_.push_back(std::move(srv));
    threads_.emplace_back([raw] { raw->listen_after_bind(); });
    // stop() is a no-op on a server that is not yet accepting.
    raw->wait_until_ready();
  }

  if (cfg_.tick_ms > 0) {
    ticker_ = std::thread([this] {
      std::unique_lock lock(mu_);
      while (!stopping_) {
        if (stop_cv_.wait_for(lock, std::chrono::milliseconds(cfg_.tick_ms), [this] { return stopping_; })) break;
        net_->step();
      }
    });
  }
  return ok_status();
}

void NodeService::stop() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  stop_cv_.notify_all();
  if (ticker_.joinable()) ticker_.join();
  for (auto& s : servers_) s->stop();
  for (auto& t : threads_)
    if (t.joinable()) t.join();
  threads_.clear();
  servers_.clear();
}

std::uint16_t NodeService::port(std::size_t i) const { return i < ports_.size() ? ports_[i] : 0; }

void NodeService::advance(std::uint64_t ticks) {
  std::lock_guard lock(mu_);
  for (std::uint64_t i = 0; i < ticks; ++i) net_->step();
}

void NodeService::crash(std::size_t i) {
  std::lock_guard lock(mu_);
  net_->crash(i);
}

void NodeService::recover(std::size_t i) {
  std::lock_guard lock(mu_);
  net_->recover(i);
}

ApiResponse NodeService::handle(std::size_t node, const ApiRequest& req) {
  std::lock_guard lock(mu_);
  if (node >= net_->size()) return fail(ErrorCode::NotFound, "no such validator");
  if (!net_->is_up(node)) return fail(ErrorCode::Unavailable, "validator is down");
  try {
    return route(node, req);
  } catch (const std::exception& e) {
    return fail(ErrorCode::Internal, e.what());
  }
}

ApiResponse NodeService::route(std::size_t node, const ApiRequest& req) {
  const auto p = split_path(req.path);
  if (p.size() < 2 || p[0] != "v1") return fail(ErrorCode::NotFound, "no route for " + req.path);
  const bool get = req.method == "GET";
  if (p[1] == "transactions") {
    if (p.size() == 2 && req.method == "POST") return post_transaction(node, req);
    if (p.size() == 3 && get) return get_transaction(node, p[2]);
  } else if (get && p[1] == "permissions" && p.size() == 3 && p[2] == "check") {
    return check_permission(node, req);
  } else if (get && p[1] == "users" && (p.size() == 3 || (p.size() == 4 && p[3] == "roles"))) {
    return get_user(node, p[2], p.size() == 4);
  } else if (get && p[1] == "blocks" && p.size() == 3) {
    return get_block(node, p[2]);
  } else if (get && p[1] == "events" && p.size() == 2) {
    return get_events(node, req);
  } else if (get && p[1] == "accounts" && p.size() == 4 && p[3] == "nonce") {
    return get_nonce(node, p[2]);
  } else if (get && p[1] == "status" && p.size() == 2) {
    return get_status(node);
  }
  return fail(ErrorCode::NotFound, "no route for " + req.method + " " + req.path);
}

ApiResponse NodeService::post_transaction(std::size_t node, const ApiRequest& req) {
  auto tx = decode_tx(req.body);
  if (!tx) return fail(ErrorCode::Malformed, tx.error().message);
  auto r = net_->submit_tx(node, *tx);
  if (!r.accepted) return fail(r.error ? *r.error : make_error(ErrorCode::Internal, "rejected"));
  return json_response(202, Json{{"accepted", true}, {"tx_id", r.tx_id.hex()}});
}

ApiResponse NodeService::get_transaction(std::size_t node, const std::string& id_text) {
  auto id = Digest::parse(id_text);
  if (!id) return fail(ErrorCode::Malformed, "transaction id must be 32 bytes of hex");
  const std::uint64_t tip = net_->chain(node).tip().header.height;
  if (auto c = net_->committed(*id); c && c->height <= tip)
    return json_response(200, Json{{"tx_id", id->hex()}, {"status", "committed"}, {"height", c->height}});
  if (auto e = net_->rejected(*id))
    return json_response(200, Json{{"tx_id", id->hex()}, {"status", "rejected"}, {"error", error_body(*e)}});
  if (net_->in_mempool(node, *id)) return json_response(200, Json{{"tx_id", id->hex()}, {"status", "pending"}});
  return fail(ErrorCode::NotFound, "unknown transaction " + id->hex());
}

ApiResponse NodeService::check_permission(std::size_t node, const ApiRequest& req) {
  for (const char* key : {"user", "org", "resource", "action"})
    if (!req.query.contains(key)) return fail(ErrorCode::MissingParam, std::string("missing query parameter '") + key + "'");
  auto user = Address::parse(req.query.at("user"));
  if (!user) return fail(ErrorCode::Malformed, "user must be a 20-byte hex address");
  const auto& s = net_->state(node);
  const auto r = sco::check_permission(s, *user, req.query.at("org"),
                                       Permission{req.query.at("resource"), req.query.at("action")});
  return json_response(200, Json{{"granted", r.granted},
                                 {"via_roles", Json(std::vector<std::string>(r.via_roles.begin(), r.via_roles.end()))},
                                 {"height", net_->chain(node).tip().header.height}});
}

ApiResponse NodeService::get_user(std::size_t node, const std::string& addr_text, bool roles_only) {
  auto addr = Address::parse(addr_text);
  if (!addr) return fail(ErrorCode::Malformed, "address must be 20 bytes of hex");
  const auto& s = net_->state(node);
  const auto* rec = state::query_user(s, *addr);
  if (!rec) return fail(ErrorCode::NotRegistered, addr->hex() + " is not a registered user");
  const std::uint64_t height = net_->chain(node).tip().header.height;
  const auto roles = state::query_roles(s, *addr);
  if (roles_only) return json_response(200, Json{{"user", addr->hex()}, {"roles", roles_json(roles)}, {"height", height}});
  return json_response(200, Json{{"address", addr->hex()},
                                 {"public_key", rec->public_key.hex()},
                                 {"registered_height", rec->registered_height},
                                 {"roles", roles_json(roles)},
                                 {"height", height}});
}

ApiResponse NodeService::get_block(std::size_t node, const std::string& height_text) {
  auto h = parse_u64(height_text);
  if (!h) return fail(ErrorCode::Malformed, "height must be a non-negative integer");
  const auto& chain = net_->chain(node);
  if (*h >= chain.size()) {
    Error e = make_error(ErrorCode::NotFound, "no block at height " + std::to_string(*h));
    e.height = chain.tip().header.height;
    return fail(e);
  }
  return json_response(200, ledger::block_to_json(chain.at(*h)));
}

ApiResponse NodeService::get_events(std::size_t node, const ApiRequest& req) {
  std::optional<state::EventKind> kind;
  std::optional<std::string> org;
  std::optional<Address> user;
  std::uint64_t from = 0;
  if (auto it = req.query.find("kind"); it != req.query.end()) {
    kind = state::event_kind_from_name(it->second);
    if (!kind) return fail(ErrorCode::Malformed, "unknown event kind '" + it->second + "'");
  }
  if (auto it = req.query.find("org"); it != req.query.end()) org = it->second;
  if (auto it = req.query.find("user"); it != req.query.end()) {
    user = Address::parse(it->second);
    if (!user) return fail(ErrorCode::Malformed, "user must be a 20-byte hex address");
  }
  if (auto it = req.query.find("from_height"); it != req.query.end()) {
    auto h = parse_u64(it->second);
    if (!h) return fail(ErrorCode::Malformed, "from_height must be a non-negative integer");
    from = *h;
  }
  const auto& chain = net_->chain(node);
  Json events = Json::array();
  for (std::uint64_t h = from; h < chain.size(); ++h)
    for (const auto& e : chain.at(h).events) {
      if (kind && e.kind != *kind) continue;
      if (org && e.org != *org) continue;
      if (user && e.user != *user) continue;
      events.push_back(state::event_to_json(e));
    }
  return json_response(200, Json{{"events", std::move(events)}, {"height", chain.tip().header.height}});
}

ApiResponse NodeService::get_nonce(std::size_t node, const std::string& addr_text) {
  auto addr = Address::parse(addr_text);
  if (!addr) return fail(ErrorCode::Malformed, "address must be 20 bytes of hex");
  const auto& s = net_->state(node);
  Json last = nullptr;
  if (auto it = s.nonces.find(*addr); it != s.nonces.end()) last = it->second;
  return json_response(200, Json{{"address", addr->hex()},
                                 {"nonce", last},
                                 {"next_nonce", state::expected_nonce(s, *addr)},
                                 {"height", net_->chain(node).tip().header.height}});
}

ApiResponse NodeService::get_status(std::size_t node) {
  const auto& tip = net_->chain(node).tip().header;
  Json validators = Json::array();
  for (const auto& v : genesis_.validators) validators.push_back(v.hex());
  return json_response(200, Json{{"chain_id", genesis_.chain_id},
                                 {"validator", genesis_.validators[node].hex()},
                                 {"validators", std::move(validators)},
                                 {"height", tip.height},
                                 {"tip_hash", ledger::hash_header(tip).hex()},
                                 {"state_root", tip.state_root.hex()},
                                 {"mempool", net_->mempool_size(node)},
                                 {"tick", net_->tick()}});
}

}  // namespace chainguard::api
