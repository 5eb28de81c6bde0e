// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "common/errors.hpp"
#include "ledger/chain.hpp"
#include "persistence/genesis.hpp"

namespace chainguard::persistence {

/// One store line: {"block":<canonical block>,"crc":"<crc32 of block bytes, 8 hex>"}.
std::string encode_store_line(const ledger::Block& b);
/// Decodes a line without its terminating newline.
Result<ledger::Block> decode_store_line(std::string_view line);

struct LoadedChain {
  ledger::Chain chain;
  std::vector<std::string> warnings;
};

// Append-only JSONL block file. Each append is written as a single line and
// fsync'ed before returning. Single writer.
class ChainStore {
 public:
  static Result<ChainStore> open(const std::string& path);

  ChainStore(ChainStore&& other) noexcept;
  ChainStore& operator=(ChainStore&& other) noexcept;
  ChainStore(const ChainStore&) = delete;
  ChainStore& operator=(const ChainStore&) = delete;
  ~ChainStore();

  Status append(const ledger::Block& b);

  /// Reads back the chain and verifies it against `genesis`. A torn final
  /// line (no trailing newline) is truncated from the file and reported in
  /// `warnings`. Any complete line that fails its checksum, decoding or
  /// verification yields CorruptStore with the line's height.
  Result<LoadedChain> load(const state::WorldState& genesis);

  const std::string& path() const { return path_; }

 private:
  ChainStore(std::string path, int fd) : path_(std::move(path)), fd_(fd) {}

  std::string path_;
  int fd_ = -1;
};

/// Read-only loader used for offline inspection; never modifies the file.
Result<LoadedChain> read_chain_file(const std::string& path, const state::WorldState& genesis);

// Node data directory layout: <dir>/chain.jsonl, <dir>/genesis.json,
// <dir>/node_key.json.
struct DataDir {
  std::string root;
  std::string chain_path() const { return root + "/chain.jsonl"; }
  std::string genesis_path() const { return root + "/genesis.json"; }
  std::string node_key_path() const { return root + "/node_key.json"; }
};

/// Creates the directory if needed, writes genesis.json (or checks that an
/// existing one has identical canonical bytes) and node_key.json.
Status prepare_data_dir(const DataDir& dir, const GenesisFile& genesis, const Address& node);

}  // namespace chainguard::persistence
