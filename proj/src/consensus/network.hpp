// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "common/errors.hpp"
#include "ledger/chain.hpp"
#include "state/world_state.hpp"
#include "wallet/transaction.hpp"

// Deterministic in-process simulation of the validator set.
//
// Each height is decided by a single-decree Paxos instance. The proposer for
// (height h, round r) is validators[(h + r) mod N]; a round lasts
// `proposer_timeout` ticks, so a crashed or partitioned proposer is skipped
// once its round expires. Round 0 goes straight to a proposal; later rounds
// first collect promises from a quorum and re-propose the highest accepted
// block, if any. A block commits at a node once it has seen quorum votes
// for it in one round. Committed blocks are final. Lagging nodes catch up
// through block sync, triggered by periodic status heartbeats or by
// messages for heights they have not reached.
//
// Everything is a pure function of (config, genesis, submitted workload):
// messages are delivered in (tick, sender index, sequence) order and all
// randomness comes from a seeded splitmix64 stream.
namespace chainguard::consensus {

struct CrashRule {
  std::size_t node = 0;
  std::uint64_t at = 0;
  std::optional<std::uint64_t> recover_at;
};

/// Active for ticks in [from, to). Nodes not listed in any group form one
/// extra implicit group.
struct PartitionRule {
  std::uint64_t from = 0;
  std::uint64_t to = 0;
  std::vector<std::vector<std::size_t>> groups;
};

/// Drops matching messages with probability per_million / 1e6 during [from, to).
struct DropRule {
  std::uint64_t from = 0;
  std::uint64_t to = 0;
  std::optional<std::size_t> src;
  std::optional<std::size_t> dst;
  std::uint32_t per_million = 1'000'000;
};

struct FaultSchedule {
  std::vector<CrashRule> crashes;
  std::vector<PartitionRule> partitions;
  std::vector<DropRule> drops;

  /// First tick after which the schedule no longer changes anything.
  std::uint64_t settled_after() const;
};

struct NetworkConfig {
  std::vector<Address> validators;
  std::uint64_t rng_seed = 0;
  std::uint64_t proposer_timeout = 4;
  std::uint64_t status_interval = 6;
  std::uint64_t min_latency = 1;
  std::uint64_t max_latency = 1;
  std::size_t max_block_txs = 256;
  FaultSchedule faults;

  std::size_t quorum() const { return (2 * validators.size()) / 3 + 1; }
};

enum class MessageKind { TxGossip, Prepare, Promise, Proposal, Vote, Commit, Status, SyncRequest, SyncResponse };

std::string_view message_kind_name(MessageKind kind);

struct Message {
  MessageKind kind = MessageKind::Status;
  std::size_t from = 0;
  std::size_t to = 0;
  std::uint64_t deliver_at = 0;
  std::uint64_t seq = 0;
  std::uint64_t height = 0;
  std::uint64_t round = 0;
  Digest hash;
  std::shared_ptr<const ledger::Block> block;
  std::optional<std::uint64_t> accepted_round;
  std::shared_ptr<const SignedTransaction> tx;
  std::vector<std::shared_ptr<const ledger::Block>> blocks;
  std::vector<std::size_t> voters;
};

struct SubmitResult {
  bool accepted = false;
  Digest tx_id;
  std::optional<Error> error;
};

struct TxCommit {
  std::uint64_t height = 0;
  std::uint64_t tick = 0;
};

struct NodeReport {
  Address id;
  bool up = true;
  std::uint64_t height = 0;
  Digest tip_hash;
  Digest state_root;
  std::size_t mempool = 0;
};

struct Report {
  std::uint64_t ticks = 0;
  std::vector<NodeReport> nodes;
  std::vector<state::Event> committed_events;
  std::map<Digest, TxCommit> committed;
  std::map<Digest, Error> rejected;
  std::size_t safety_violations = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t messages_dropped = 0;
  Digest trace_digest;
  bool converged = false;
};

Json report_to_json(const Report& r);

/// run_until_quiescent result: the report is always filled in; `error` is
/// Timeout when the budget ran out first.
struct RunOutcome {
  Report report;
  std::optional<Error> error;
};

class Network {
 public:
  Network(NetworkConfig config, state::WorldState genesis);

  const NetworkConfig& config() const { return config_; }
  const state::WorldState& genesis() const { return genesis_; }
  std::uint64_t tick() const { return tick_; }
  std::size_t size() const { return nodes_.size(); }

  /// Admits `tx` at validator `entry` and gossips it to its peers. Only the
  /// envelope is checked here; contract validation happens at block build.
  SubmitResult submit_tx(std::size_t entry, const SignedTransaction& tx);

  /// Advances one tick: scheduled faults, message delivery, node timers.
  void step();

  /// Steps until quiescent() or `max_ticks` steps have run.
  RunOutcome run_until_quiescent(std::uint64_t max_ticks);

  /// No fault changes pending, no consensus traffic in flight, every up node
  /// has an empty mempool, and all up nodes share one tip.
  bool quiescent() const;

  Report report() const;

  bool is_up(std::size_t i) const { return nodes_.at(i).up; }
  const ledger::Chain& chain(std::size_t i) const { return nodes_.at(i).chain; }
  const state::WorldState& state(std::size_t i) const { return nodes_.at(i).state; }
  bool in_mempool(std::size_t i, const Digest& id) const { return nodes_.at(i).mempool_ids.contains(id); }
  std::size_t mempool_size(std::size_t i) const { return nodes_.at(i).mempool.size(); }

  std::optional<TxCommit> committed(const Digest& id) const;
  std::optional<Error> rejected(const Digest& id) const;

  void crash(std::size_t i);
  void recover(std::size_t i);

  /// Replaces node i's chain with a previously persisted one (verified
  /// against genesis). Used on restart.
  Status restore_node(std::size_t i, const ledger::Chain& chain);

  using CommitHook = std::function<void(std::size_t node, const ledger::Block& block)>;
  void set_commit_hook(CommitHook hook) { hook_ = std::move(hook); }

  /// Keep a human-readable copy of every trace line (tests, debugging).
  void record_trace(bool on) { keep_trace_ = on; }
  const std::vector<std::string>& trace() const { return trace_lines_; }

 private:
  struct Accepted {
    std::uint64_t round = 0;
    std::shared_ptr<const ledger::Block> block;
  };
  struct Candidate {
    std::shared_ptr<const ledger::Block> block;
    std::shared_ptr<const state::WorldState> post;
  };
  struct Prepare {
    std::uint64_t round = 0;
    std::set<std::size_t> promises;
    std::optional<Accepted> best;
    bool done = false;
  };
  struct Node {
    Address id;
    bool up = true;
    ledger::Chain chain;
    state::WorldState state;
    std::vector<SignedTransaction> mempool;
    std::set<Digest> mempool_ids;
    // Acceptor and proposer state for height tip + 1. Survives crashes.
    std::uint64_t height_start = 0;
    std::uint64_t promised = 0;
    std::optional<Accepted> accepted;
    std::optional<std::uint64_t> acted_round;
    // Volatile.
    std::optional<Prepare> prep;
    std::map<std::pair<std::uint64_t, Digest>, std::set<std::size_t>> votes;
    std::map<Digest, Candidate> candidates;
    std::vector<Message> future;
    std::optional<std::uint64_t> last_sync_request;

    std::uint64_t next_height() const { return chain.tip().header.height + 1; }
  };

  using QueueKey = std::tuple<std::uint64_t, std::size_t, std::uint64_t>;

  std::uint64_t next_random();
  void send(std::size_t from, std::size_t to, Message m);
  void broadcast(std::size_t from, const Message& m);
  bool blocked(const Message& m);
  void trace_event(std::string_view what, const Message& m);

  void deliver(Message& m);
  void on_timer(std::size_t n);
  void on_tx(std::size_t n, const SignedTransaction& tx);
  void on_prepare(std::size_t n, const Message& m);
  void on_promise(std::size_t n, const Message& m);
  void on_proposal(std::size_t n, const Message& m);
  void on_vote(std::size_t n, const Message& m);
  void on_commit(std::size_t n, const Message& m);
  void on_status(std::size_t n, const Message& m);
  void on_sync_request(std::size_t n, const Message& m);
  void on_sync_response(std::size_t n, const Message& m);

  /// Routes a height-scoped message: true when it targets tip + 1. Older
  /// heights get a sync reply (if `answer_stale`), newer ones are stashed.
  bool current_height(std::size_t n, const Message& m, bool answer_stale);
  void request_sync(std::size_t n, std::size_t peer);
  void send_blocks(std::size_t n, std::size_t peer, std::uint64_t from_height);

  std::optional<Candidate> build_candidate(std::size_t n, std::uint64_t round);
  const Candidate* validate(std::size_t n, const std::shared_ptr<const ledger::Block>& block);
  void propose(std::size_t n, std::uint64_t round, const Candidate& c);
  void accept(std::size_t n, std::uint64_t round, const Candidate& c);
  void count_vote(std::size_t n, std::uint64_t round, const Digest& hash, std::size_t voter);
  void commit(std::size_t n, const Candidate& c, const std::vector<std::size_t>* voters);
  void prune_mempool(Node& node);
  void apply_faults();

  NetworkConfig config_;
  state::WorldState genesis_;
  std::vector<Node> nodes_;
  std::map<QueueKey, Message> queue_;
  std::size_t in_flight_consensus_ = 0;
  std::uint64_t tick_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t rng_state_;

  std::map<std::uint64_t, Digest> first_commit_;
  std::size_t safety_violations_ = 0;
  std::map<Digest, TxCommit> committed_;
  std::map<Digest, Error> rejected_;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
  Digest trace_digest_;
  bool keep_trace_ = false;
  std::vector<std::string> trace_lines_;
  CommitHook hook_;
};

}  // namespace chainguard::consensus
