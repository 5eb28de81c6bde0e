// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "ledger/chain.hpp"

namespace chainguard::ledger {

Status Chain::append(Block block) {
  const auto& h = block.header;
  if (blocks_.empty()) {
    if (h.height != 0) return make_error(ErrorCode::HeightGap, "first block must be genesis");
    if (!h.prev_hash.is_zero()) return make_error(ErrorCode::LinkMismatch, "genesis prev_hash must be zero");
  } else {
    const auto& tip_header = blocks_.back().header;
    if (h.height != tip_header.height + 1)
      return make_error(ErrorCode::HeightGap, "expected height " + std::to_string(tip_header.height + 1) +
                                                  ", got " + std::to_string(h.height));
    if (h.prev_hash != hash_header(tip_header)) return make_error(ErrorCode::LinkMismatch, "prev_hash does not match tip");
  }
  if (h.tx_root != compute_tx_root(block.transactions)) return make_error(ErrorCode::RootMismatch, "tx_root mismatch");
  blocks_.push_back(std::move(block));
  return ok_status();
}

namespace {
class Verifier {
 public:
  explicit Verifier(const state::WorldState& genesis) : genesis_(genesis), state_(genesis) {}

  Verdict feed(const Block& b) {
    const std::uint64_t h = next_;
    if (b.header.height != h) return Verdict::failure_at(h, "unexpected height " + std::to_string(b.header.height));
    if (h == 0) {
      if (block_bytes(b) != block_bytes(genesis_block(genesis_)))
        return Verdict::failure_at(0, "genesis block does not match genesis state");
    } else {
      auto post = check_block(prev_, b, state_);
      if (!post) return Verdict::failure_at(h, post.error().describe());
      state_ = std::move(*post);
    }
    prev_ = b.header;
    ++next_;
    return Verdict::pass();
  }

 private:
  const state::WorldState& genesis_;
  state::WorldState state_;
  BlockHeader prev_;
  std::uint64_t next_ = 0;
};
}  // namespace

Verdict verify_chain(const Chain& chain, const state::WorldState& genesis) {
  Verifier v(genesis);
  for (const auto& b : chain.blocks())
    if (auto r = v.feed(b); !r.ok) return r;
  return Verdict::pass();
}

Verdict verify_serialized(std::span<const std::string> lines, const state::WorldState& genesis) {
  Verifier v(genesis);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto b = decode_block(lines[i]);
    if (!b) return Verdict::failure_at(i, b.error().describe());
    if (auto r = v.feed(*b); !r.ok) return r;
  }
  return Verdict::pass();
}

std::vector<std::string> serialize_chain(const Chain& chain) {
  std::vector<std::string> out;
  out.reserve(chain.size());
  for (const auto& b : chain.blocks()) out.push_back(block_bytes(b));
  return out;
}

}  // namespace chainguard::ledger
