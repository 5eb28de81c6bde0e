// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "consensus/network.hpp"

#include <algorithm>
#include <cstdio>

#include "common/crypto.hpp"
#include "state/apply.hpp"
#include "state/replay.hpp"

namespace chainguard::consensus {

namespace {
constexpr std::size_t kMaxSyncBlocks = 64;
constexpr std::size_t kMaxFutureMessages = 512;

bool transient_failure(const state::WorldState& s, const SignedTransaction& tx, const Error& e) {
  if (e.code == ErrorCode::BadNonce) return tx.nonce > state::expected_nonce(s, tx.sender);
  // Sender unknown for now; its registration may still be in flight.
  if (e.code == ErrorCode::NotRegistered) return !state::known_key(s, tx.sender).has_value();
  return false;
}

bool stale(const state::WorldState& s, const SignedTransaction& tx) {
  return s.nonces.contains(tx.sender) && tx.nonce < state::expected_nonce(s, tx.sender);
}
}  // namespace

std::string_view message_kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::TxGossip: return "TxGossip";
    case MessageKind::Prepare: return "Prepare";
    case MessageKind::Promise: return "Promise";
    case MessageKind::Proposal: return "Proposal";
    case MessageKind::Vote: return "Vote";
    case MessageKind::Commit: return "Commit";
    case MessageKind::Status: return "Status";
    case MessageKind::SyncRequest: return "SyncRequest";
    case MessageKind::SyncResponse: return "SyncResponse";
  }
  return "Status";
}

std::uint64_t FaultSchedule::settled_after() const {
  std::uint64_t t = 0;
  for (const auto& c : crashes) t = std::max(t, c.recover_at.value_or(c.at));
  for (const auto& p : partitions) t = std::max(t, p.to);
  for (const auto& d : drops) t = std::max(t, d.to);
  return t;
}

Network::Network(NetworkConfig config, state::WorldState genesis)
    : config_(std::move(config)), genesis_(std::move(genesis)), rng_state_(config_.rng_seed) {
  if (config_.validators.empty()) throw std::invalid_argument("network needs at least one validator");
  if (config_.proposer_timeout == 0) config_.proposer_timeout = 1;
  if (config_.status_interval == 0) config_.status_interval = 1;
  if (config_.min_latency == 0) config_.min_latency = 1;
  config_.max_latency = std::max(config_.max_latency, config_.min_latency);
  const auto g = ledger::genesis_block(genesis_);
  for (const auto& id : config_.validators) {
    Node node;
    node.id = id;
    node.state = genesis_;
    (void)node.chain.append(g);
    nodes_.push_back(std::move(node));
  }
  apply_faults();  // anything scheduled at tick 0
}

std::uint64_t Network::next_random() {
  // splitmix64
  std::uint64_t z = (rng_state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void Network::trace_event(std::string_view what, const Message& m) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu %.*s %.*s %zu>%zu h=%llu r=%llu %.16s",
                static_cast<unsigned long long>(tick_), static_cast<int>(what.size()), what.data(),
                static_cast<int>(message_kind_name(m.kind).size()), message_kind_name(m.kind).data(),
                m.from, m.to, static_cast<unsigned long long>(m.height),
                static_cast<unsigned long long>(m.round), m.hash.hex().c_str());
  std::string line = trace_digest_.hex();
  line += buf;
  trace_digest_ = crypto::sha256(line);
  if (keep_trace_) trace_lines_.emplace_back(buf);
}

void Network::send(std::size_t from, std::size_t to, Message m) {
  m.from = from;
  m.to = to;
  const std::uint64_t span = config_.max_latency - config_.min_latency + 1;
  m.deliver_at = tick_ + config_.min_latency + (span > 1 ? next_random() % span : 0);
  m.seq = ++seq_;
  if (m.kind != MessageKind::Status) ++in_flight_consensus_;
  queue_.emplace(QueueKey{m.deliver_at, m.from, m.seq}, std::move(m));
}

void Network::broadcast(std::size_t from, const Message& m) {
  for (std::size_t to = 0; to < nodes_.size(); ++to)
    if (to != from) send(from, to, m);
}

bool Network::blocked(const Message& m) {
  if (!nodes_[m.to].up) return true;
  for (const auto& p : config_.faults.partitions) {
    if (tick_ < p.from || tick_ >= p.to) continue;
    auto group_of = [&](std::size_t n) -> std::size_t {
      for (std::size_t g = 0; g < p.groups.size(); ++g)
        if (std::find(p.groups[g].begin(), p.groups[g].end(), n) != p.groups[g].end()) return g;
      return p.groups.size();
    };
    if (group_of(m.from) != group_of(m.to)) return true;
  }
  for (const auto& d : config_.faults.drops) {
    if (tick_ < d.from || tick_ >= d.to) continue;
    if (d.src && *d.src != m.from) continue;
    if (d.dst && *d.dst != m.to) continue;
    if (next_random() % 1'000'000 < d.per_million) return true;
  }
  return false;
}

SubmitResult Network::submit_tx(std::size_t entry, const SignedTransaction& tx) {
  SubmitResult out;
  out.tx_id = tx_id(tx);
  if (entry >= nodes_.size() || !nodes_[entry].up) {
    out.error = make_error(ErrorCode::Unavailable, "entry validator is not running");
    return out;
  }
  if (auto st = state::check_signature(nodes_[entry].state, tx); !st) {
    out.error = st.error();
    return out;
  }
  on_tx(entry, tx);
  Message m;
  m.kind = MessageKind::TxGossip;
  m.tx = std::make_shared<const SignedTransaction>(tx);
  m.hash = out.tx_id;
  broadcast(entry, m);
  out.accepted = true;
  return out;
}

void Network::apply_faults() {
  for (const auto& c : config_.faults.crashes) {
    if (c.node >= nodes_.size()) continue;
    if (c.at == tick_) crash(c.node);
    if (c.recover_at && *c.recover_at == tick_) recover(c.node);
  }
}

void Network::crash(std::size_t i) {
  auto& n = nodes_.at(i);
  n.up = false;
  n.mempool.clear();
  n.mempool_ids.clear();
  n.prep.reset();
  n.votes.clear();
  n.candidates.clear();
  n.future.clear();
  n.last_sync_request.reset();
}

void Network::recover(std::size_t i) { nodes_.at(i).up = true; }

Status Network::restore_node(std::size_t i, const ledger::Chain& chain) {
  if (chain.empty()) return ok_status();
  auto verdict = ledger::verify_chain(chain, genesis_);
  if (!verdict.ok) {
    Error e = make_error(ErrorCode::VerificationFailed, verdict.reason);
    e.height = verdict.height;
    return e;
  }
  auto st = state::replay(genesis_, chain);
  if (!st) return st.error();
  auto& n = nodes_.at(i);
  n.chain = chain;
  n.state = std::move(*st);
  n.promised = 0;
  n.accepted.reset();
  n.acted_round.reset();
  n.height_start = tick_;
  for (const auto& b : chain.blocks()) {
    if (b.header.height == 0) continue;
    first_commit_.try_emplace(b.header.height, ledger::hash_header(b.header));
    for (const auto& tx : b.transactions)
      committed_.try_emplace(tx_id(tx), TxCommit{b.header.height, b.header.timestamp});
  }
  prune_mempool(n);
  return ok_status();
}

void Network::step() {
  ++tick_;
  apply_faults();
  while (!queue_.empty() && std::get<0>(queue_.begin()->first) <= tick_) {
    auto node = queue_.extract(queue_.begin());
    Message& m = node.mapped();
    if (m.kind != MessageKind::Status) --in_flight_consensus_;
    if (blocked(m)) {
      ++dropped_;
      trace_event("drop", m);
      continue;
    }
    ++delivered_;
    trace_event("recv", m);
    deliver(m);
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].up) on_timer(i);
}

void Network::deliver(Message& m) {
  const std::size_t n = m.to;
  switch (m.kind) {
    case MessageKind::TxGossip: on_tx(n, *m.tx); break;
    case MessageKind::Prepare: on_prepare(n, m); break;
    case MessageKind::Promise: on_promise(n, m); break;
    case MessageKind::Proposal: on_proposal(n, m); break;
    case MessageKind::Vote: on_vote(n, m); break;
    case MessageKind::Commit: on_commit(n, m); break;
    case MessageKind::Status: on_status(n, m); break;
    case MessageKind::SyncRequest: on_sync_request(n, m); break;
    case MessageKind::SyncResponse: on_sync_response(n, m); break;
  }
}

void Network::on_tx(std::size_t n, const SignedTransaction& tx) {
  auto& node = nodes_[n];
  const Digest id = tx_id(tx);
  if (node.mempool_ids.contains(id) || stale(node.state, tx) || committed_.contains(id)) return;
  node.mempool_ids.insert(id);
  node.mempool.push_back(tx);
}

void Network::on_timer(std::size_t n) {
  auto& node = nodes_[n];
  const std::uint64_t h = node.next_height();
  const std::uint64_t r = (tick_ - node.height_start) / config_.proposer_timeout;
  const std::size_t proposer = static_cast<std::size_t>((h + r) % nodes_.size());

  if (proposer == n && node.acted_round != r && r >= node.promised &&
      (node.accepted || !node.mempool.empty())) {
    node.acted_round = r;
    if (r == 0 && !node.accepted) {
      if (auto c = build_candidate(n, r)) propose(n, r, *c);
    } else {
      node.promised = r;
      node.prep = Prepare{r, {n}, node.accepted, false};
      Message m;
      m.kind = MessageKind::Prepare;
      m.height = h;
      m.round = r;
      broadcast(n, m);
      if (config_.quorum() == 1) {
        Message self;
        self.kind = MessageKind::Promise;
        self.from = n;
        self.height = h;
        self.round = r;
        on_promise(n, self);
      }
    }
  }

  if ((tick_ + n) % config_.status_interval == 0) {
    Message m;
    m.kind = MessageKind::Status;
    m.height = node.chain.tip().header.height;
    m.hash = ledger::hash_header(node.chain.tip().header);
    broadcast(n, m);
  }
}

bool Network::current_height(std::size_t n, const Message& m, bool answer_stale) {
  auto& node = nodes_[n];
  const std::uint64_t h = node.next_height();
  if (m.height == h) return true;
  if (m.height < h) {
    if (answer_stale) send_blocks(n, m.from, m.height);
    return false;
  }
  if (node.future.size() < kMaxFutureMessages) node.future.push_back(m);
  request_sync(n, m.from);
  return false;
}

void Network::request_sync(std::size_t n, std::size_t peer) {
  auto& node = nodes_[n];
  if (node.last_sync_request && tick_ - *node.last_sync_request < config_.proposer_timeout) return;
  node.last_sync_request = tick_;
  Message m;
  m.kind = MessageKind::SyncRequest;
  m.height = node.next_height();
  send(n, peer, m);
}

void Network::send_blocks(std::size_t n, std::size_t peer, std::uint64_t from_height) {
  const auto& chain = nodes_[n].chain;
  Message m;
  m.kind = MessageKind::SyncResponse;
  m.height = from_height;
  for (std::uint64_t h = from_height; h < chain.size() && m.blocks.size() < kMaxSyncBlocks; ++h)
    m.blocks.push_back(std::make_shared<const ledger::Block>(chain.at(h)));
  if (m.blocks.empty()) return;
  send(n, peer, std::move(m));
}

std::optional<Network::Candidate> Network::build_candidate(std::size_t n, std::uint64_t) {
  auto& node = nodes_[n];
  const std::uint64_t h = node.next_height();
  state::WorldState work = node.state;
  std::vector<SignedTransaction> picked;
  std::vector<Digest> dropped;
  for (const auto& tx : node.mempool) {
    if (picked.size() >= config_.max_block_txs) break;
    auto ev = state::apply_in_place(work, tx, {h, picked.size()});
    if (ev) {
      picked.push_back(tx);
    } else if (!transient_failure(work, tx, ev.error())) {
      const Digest id = tx_id(tx);
      rejected_.try_emplace(id, ev.error());
      dropped.push_back(id);
    }
  }
  if (!dropped.empty()) {
    std::erase_if(node.mempool, [&](const SignedTransaction& tx) {
      return std::find(dropped.begin(), dropped.end(), tx_id(tx)) != dropped.end();
    });
    for (const auto& id : dropped) node.mempool_ids.erase(id);
  }
  if (picked.empty()) return std::nullopt;
  auto built = ledger::build_block(node.chain.tip().header, picked, node.state, node.id, tick_);
  if (!built) return std::nullopt;
  Candidate c{std::make_shared<const ledger::Block>(std::move(built->block)),
              std::make_shared<const state::WorldState>(std::move(built->state))};
  node.candidates.emplace(ledger::hash_header(c.block->header), c);
  return c;
}

const Network::Candidate* Network::validate(std::size_t n, const std::shared_ptr<const ledger::Block>& block) {
  auto& node = nodes_[n];
  const Digest hash = ledger::hash_header(block->header);
  if (auto it = node.candidates.find(hash); it != node.candidates.end()) return &it->second;
  auto post = ledger::check_block(node.chain.tip().header, *block, node.state);
  if (!post) return nullptr;
  auto [it, _] = node.candidates.emplace(
      hash, Candidate{block, std::make_shared<const state::WorldState>(std::move(*post))});
  return &it->second;
}

void Network::propose(std::size_t n, std::uint64_t round, const Candidate& c) {
  Message m;
  m.kind = MessageKind::Proposal;
  m.height = c.block->header.height;
  m.round = round;
  m.hash = ledger::hash_header(c.block->header);
  m.block = c.block;
  broadcast(n, m);
  accept(n, round, c);
}

void Network::accept(std::size_t n, std::uint64_t round, const Candidate& c) {
  auto& node = nodes_[n];
  node.promised = round;
  node.accepted = Accepted{round, c.block};
  const Digest hash = ledger::hash_header(c.block->header);
  Message v;
  v.kind = MessageKind::Vote;
  v.height = c.block->header.height;
  v.round = round;
  v.hash = hash;
  broadcast(n, v);
  count_vote(n, round, hash, n);
}

void Network::count_vote(std::size_t n, std::uint64_t round, const Digest& hash, std::size_t voter) {
  auto& node = nodes_[n];
  auto& voters = node.votes[{round, hash}];
  voters.insert(voter);
  if (voters.size() < config_.quorum()) return;
  auto it = node.candidates.find(hash);
  if (it == node.candidates.end()) return;  // block not seen yet; a Commit will carry it
  std::vector<std::size_t> list(voters.begin(), voters.end());
  const Candidate c = it->second;
  commit(n, c, &list);
}

void Network::on_prepare(std::size_t n, const Message& m) {
  if (!current_height(n, m, true)) return;
  auto& node = nodes_[n];
  if (m.round < node.promised) return;
  node.promised = m.round;
  Message reply;
  reply.kind = MessageKind::Promise;
  reply.height = m.height;
  reply.round = m.round;
  if (node.accepted) {
    reply.accepted_round = node.accepted->round;
    reply.block = node.accepted->block;
    reply.hash = ledger::hash_header(node.accepted->block->header);
  }
  send(n, m.from, std::move(reply));
}

void Network::on_promise(std::size_t n, const Message& m) {
  auto& node = nodes_[n];
  if (m.height != node.next_height() || !node.prep || node.prep->round != m.round || node.prep->done) return;
  auto& prep = *node.prep;
  prep.promises.insert(m.from);
  if (m.block && m.accepted_round && (!prep.best || *m.accepted_round > prep.best->round))
    prep.best = Accepted{*m.accepted_round, m.block};
  if (prep.promises.size() < config_.quorum()) return;
  prep.done = true;
  if (node.promised > prep.round) return;
  if (prep.best) {
    if (const auto* c = validate(n, prep.best->block)) {
      const Candidate copy = *c;
      propose(n, prep.round, copy);
    }
    return;
  }
  if (auto c = build_candidate(n, prep.round)) propose(n, prep.round, *c);
}

void Network::on_proposal(std::size_t n, const Message& m) {
  if (!current_height(n, m, true)) return;
  auto& node = nodes_[n];
  if (m.round < node.promised) return;
  if (node.accepted && node.accepted->round == m.round &&
      ledger::hash_header(node.accepted->block->header) != m.hash)
    return;
  const auto* c = validate(n, m.block);
  if (!c) return;
  const Candidate copy = *c;
  count_vote(n, m.round, m.hash, m.from);
  if (node.next_height() != m.height) return;  // committed on the proposer's vote alone
  accept(n, m.round, copy);
}

void Network::on_vote(std::size_t n, const Message& m) {
  if (!current_height(n, m, false)) return;
  count_vote(n, m.round, m.hash, m.from);
}

void Network::on_commit(std::size_t n, const Message& m) {
  if (!current_height(n, m, false)) return;
  if (m.voters.size() < config_.quorum() || !m.block) return;
  const auto* c = validate(n, m.block);
  if (!c) return;
  const Candidate copy = *c;
  commit(n, copy, nullptr);
}

void Network::on_status(std::size_t n, const Message& m) {
  if (m.height + 1 > nodes_[n].next_height()) request_sync(n, m.from);
}

void Network::on_sync_request(std::size_t n, const Message& m) { send_blocks(n, m.from, m.height); }

void Network::on_sync_response(std::size_t n, const Message& m) {
  auto& node = nodes_[n];
  for (const auto& b : m.blocks) {
    if (b->header.height < node.next_height()) continue;
    if (b->header.height > node.next_height()) break;
    const auto* c = validate(n, b);
    if (!c) break;
    const Candidate copy = *c;
    commit(n, copy, nullptr);
  }
  node.last_sync_request.reset();
  if (m.blocks.size() == kMaxSyncBlocks) request_sync(n, m.from);
}

void Network::prune_mempool(Node& node) {
  std::erase_if(node.mempool, [&](const SignedTransaction& tx) {
    const Digest id = tx_id(tx);
    if (committed_.contains(id) || stale(node.state, tx)) {
      node.mempool_ids.erase(id);
      return true;
    }
    return false;
  });
}

void Network::commit(std::size_t n, const Candidate& c, const std::vector<std::size_t>* voters) {
  auto& node = nodes_[n];
  const auto& block = *c.block;
  if (auto st = node.chain.append(block); !st) return;
  node.state = *c.post;
  const std::uint64_t h = block.header.height;
  const Digest hash = ledger::hash_header(block.header);
  if (auto [it, inserted] = first_commit_.try_emplace(h, hash); !inserted && it->second != hash)
    ++safety_violations_;
  for (const auto& tx : block.transactions) {
    const Digest id = tx_id(tx);
    committed_.try_emplace(id, TxCommit{h, tick_});
    rejected_.erase(id);
  }
  prune_mempool(node);

  node.height_start = tick_;
  node.promised = 0;
  node.accepted.reset();
  node.acted_round.reset();
  node.prep.reset();
  node.votes.clear();
  node.candidates.clear();

  Message trace_msg;
  trace_msg.kind = MessageKind::Commit;
  trace_msg.from = n;
  trace_msg.to = n;
  trace_msg.height = h;
  trace_msg.hash = hash;
  trace_event("commit", trace_msg);

  if (hook_) hook_(n, block);

  if (voters) {
    Message m;
    m.kind = MessageKind::Commit;
    m.height = h;
    m.hash = hash;
    m.block = c.block;
    m.voters = *voters;
    broadcast(n, m);
  }

  // Replay anything that arrived early for the new height.
  auto pending = std::move(node.future);
  node.future.clear();
  for (auto& msg : pending) {
    if (msg.height < node.next_height()) continue;
    if (msg.height > node.next_height()) {
      node.future.push_back(std::move(msg));
      continue;
    }
    deliver(msg);
  }
}

bool Network::quiescent() const {
  if (tick_ < config_.faults.settled_after()) return false;
  if (in_flight_consensus_ != 0) return false;
  const Digest* tip = nullptr;
  Digest first;
  for (const auto& node : nodes_) {
    if (!node.up) continue;
    if (!node.mempool.empty()) return false;
    const Digest h = ledger::hash_header(node.chain.tip().header);
    if (!tip) {
      first = h;
      tip = &first;
    } else if (h != *tip) {
      return false;
    }
  }
  return true;
}

RunOutcome Network::run_until_quiescent(std::uint64_t max_ticks) {
  RunOutcome out;
  if (max_ticks == 0) {
    out.report = report();
    out.error = make_error(ErrorCode::Timeout, "max_ticks must be positive");
    return out;
  }
  for (std::uint64_t i = 0; i < max_ticks && !quiescent(); ++i) step();
  out.report = report();
  if (!quiescent()) out.error = make_error(ErrorCode::Timeout, "not quiescent after " + std::to_string(max_ticks) + " ticks");
  return out;
}

std::optional<TxCommit> Network::committed(const Digest& id) const {
  auto it = committed_.find(id);
  if (it == committed_.end()) return std::nullopt;
  return it->second;
}

std::optional<Error> Network::rejected(const Digest& id) const {
  auto it = rejected_.find(id);
  if (it == rejected_.end()) return std::nullopt;
  return it->second;
}

Report Network::report() const {
  Report r;
  r.ticks = tick_;
  std::size_t best = 0;
  bool first = true;
  std::optional<Digest> common_tip;
  r.converged = true;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& node = nodes_[i];
    NodeReport nr;
    nr.id = node.id;
    nr.up = node.up;
    nr.height = node.chain.tip().header.height;
    nr.tip_hash = ledger::hash_header(node.chain.tip().header);
    nr.state_root = node.chain.tip().header.state_root;
    nr.mempool = node.mempool.size();
    if (node.up) {
      if (!common_tip) common_tip = nr.tip_hash;
      else if (*common_tip != nr.tip_hash) r.converged = false;
      if (first || nr.height > nodes_[best].chain.tip().header.height) {
        best = i;
        first = false;
      }
    }
    r.nodes.push_back(nr);
  }
  for (const auto& b : nodes_[best].chain.blocks())
    r.committed_events.insert(r.committed_events.end(), b.events.begin(), b.events.end());
  r.committed = committed_;
  r.rejected = rejected_;
  r.safety_violations = safety_violations_;
  r.messages_delivered = delivered_;
  r.messages_dropped = dropped_;
  r.trace_digest = trace_digest_;
  return r;
}

Json report_to_json(const Report& r) {
  Json nodes = Json::array();
  for (const auto& n : r.nodes)
    nodes.push_back({{"id", n.id.hex()},
                     {"up", n.up},
                     {"height", n.height},
                     {"tip_hash", n.tip_hash.hex()},
                     {"state_root", n.state_root.hex()},
                     {"mempool", n.mempool}});
  Json events = Json::array();
  for (const auto& e : r.committed_events) events.push_back(state::event_to_json(e));
  Json committed = Json::object();
  for (const auto& [id, c] : r.committed) committed[id.hex()] = {{"height", c.height}, {"tick", c.tick}};
  Json rejected = Json::object();
  for (const auto& [id, e] : r.rejected) rejected[id.hex()] = {{"code", error_name(e.code)}, {"message", e.message}};
  return Json{{"ticks", r.ticks},
              {"nodes", std::move(nodes)},
              {"events", std::move(events)},
              {"committed", std::move(committed)},
              {"rejected", std::move(rejected)},
              {"safety_violations", r.safety_violations},
              {"messages_delivered", r.messages_delivered},
              {"messages_dropped", r.messages_dropped},
              {"trace_digest", r.trace_digest.hex()},
              {"converged", r.converged}};
}

}  // namespace chainguard::consensus
