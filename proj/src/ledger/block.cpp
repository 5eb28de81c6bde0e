// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "ledger/block.hpp"

#include <algorithm>

#include "common/crypto.hpp"
#include "state/apply.hpp"

namespace chainguard::ledger {

Json header_to_json(const BlockHeader& h) {
  return Json{{"height", h.height},
              {"prev_hash", h.prev_hash.hex()},
              {"tx_root", h.tx_root.hex()},
              {"state_root", h.state_root.hex()},
              {"proposer", h.proposer.hex()},
              {"timestamp", h.timestamp}};
}

Digest hash_header(const BlockHeader& h) { return crypto::sha256(canonical_dump(header_to_json(h))); }

Digest compute_tx_root(std::span<const SignedTransaction> txs) {
  Json arr = Json::array();
  for (const auto& tx : txs) arr.push_back(tx_to_json(tx));
  return crypto::sha256(canonical_dump(arr));
}

Json block_to_json(const Block& b) {
  Json txs = Json::array();
  for (const auto& tx : b.transactions) txs.push_back(tx_to_json(tx));
  Json events = Json::array();
  for (const auto& e : b.events) events.push_back(state::event_to_json(e));
  return Json{{"header", header_to_json(b.header)},
              {"hash", hash_header(b.header).hex()},
              {"transactions", std::move(txs)},
              {"events", std::move(events)}};
}

std::string block_bytes(const Block& b) { return canonical_dump(block_to_json(b)); }

Result<Block> decode_block(std::string_view text) {
  if (!is_canonical(text)) return make_error(ErrorCode::Malformed, "block is not canonical JSON");
  try {
    const Json j = *parse_json(text);
    ObjectReader r(j, {"header", "hash", "transactions", "events"}, "block");
    ObjectReader h(r.raw("header"),
                   {"height", "prev_hash", "tx_root", "state_root", "proposer", "timestamp"}, "header");
    Block b;
    b.header.height = h.u64("height");
    b.header.prev_hash = h.fixed<Digest>("prev_hash");
    b.header.tx_root = h.fixed<Digest>("tx_root");
    b.header.state_root = h.fixed<Digest>("state_root");
    b.header.proposer = h.fixed<Address>("proposer");
    b.header.timestamp = h.u64("timestamp");
    if (r.fixed<Digest>("hash") != hash_header(b.header))
      return make_error(ErrorCode::VerificationFailed, "block hash does not match header");
    const auto& txs = r.raw("transactions");
    const auto& events = r.raw("events");
    if (!txs.is_array() || !events.is_array()) throw DecodeError("block: expected arrays");
    for (const auto& t : txs) b.transactions.push_back(tx_from_json(t));
    for (const auto& e : events) b.events.push_back(state::event_from_json(e));
    return b;
  } catch (const DecodeError& e) {
    return make_error(ErrorCode::Malformed, e.what());
  }
}

Block genesis_block(const state::WorldState& genesis) {
  Block b;
  b.header.height = 0;
  b.header.tx_root = compute_tx_root({});
  b.header.state_root = state::state_root(genesis);
  return b;
}

Result<BuiltBlock> build_block(const BlockHeader& prev, std::span<const SignedTransaction> txs,
                               const state::WorldState& state, const Address& proposer,
                               std::uint64_t tick) {
  BuiltBlock out{{}, state};
  Block& b = out.block;
  b.header.height = prev.height + 1;
  b.header.prev_hash = hash_header(prev);
  b.header.proposer = proposer;
  b.header.timestamp = tick;
  for (std::size_t i = 0; i < txs.size(); ++i) {
    auto events = state::apply_in_place(out.state, txs[i], {b.header.height, i});
    if (!events) {
      Error err = make_error(ErrorCode::InvalidTransaction, events.error().describe());
      err.index = i;
      err.cause = events.code();
      return err;
    }
    b.events.insert(b.events.end(), events->begin(), events->end());
  }
  b.transactions.assign(txs.begin(), txs.end());
  b.header.tx_root = compute_tx_root(txs);
  b.header.state_root = state::state_root(out.state);
  return out;
}

Result<state::WorldState> check_block(const BlockHeader& prev, const Block& b,
                                      const state::WorldState& state) {
  auto fail = [&](ErrorCode code, std::string msg) {
    Error e = make_error(code, std::move(msg));
    e.height = b.header.height;
    return e;
  };
  if (b.header.height != prev.height + 1) return fail(ErrorCode::HeightGap, "height does not follow parent");
  if (b.header.prev_hash != hash_header(prev)) return fail(ErrorCode::LinkMismatch, "prev_hash does not match parent");
  if (b.header.timestamp < prev.timestamp) return fail(ErrorCode::VerificationFailed, "timestamp moves backwards");
  const auto& vals = state.params.validators;
  if (std::find(vals.begin(), vals.end(), b.header.proposer) == vals.end())
    return fail(ErrorCode::VerificationFailed, "proposer is not a validator");
  if (b.header.tx_root != compute_tx_root(b.transactions)) return fail(ErrorCode::RootMismatch, "tx_root mismatch");

  state::WorldState post = state;
  std::vector<state::Event> events;
  for (std::size_t i = 0; i < b.transactions.size(); ++i) {
    auto ev = state::apply_in_place(post, b.transactions[i], {b.header.height, i});
    if (!ev) {
      Error e = fail(ErrorCode::InvalidTransaction, ev.error().describe());
      e.index = i;
      e.cause = ev.code();
      return e;
    }
    events.insert(events.end(), ev->begin(), ev->end());
  }
  if (events != b.events) return fail(ErrorCode::VerificationFailed, "events differ from re-execution");
  if (b.header.state_root != state::state_root(post)) return fail(ErrorCode::RootMismatch, "state_root mismatch");
  return post;
}

}  // namespace chainguard::ledger
