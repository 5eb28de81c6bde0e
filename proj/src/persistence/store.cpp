// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "persistence/store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "common/crypto.hpp"

namespace chainguard::persistence {

namespace {
std::string crc_hex(std::string_view bytes) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", crypto::crc32(bytes));
  return buf;
}

Error corrupt(std::uint64_t height, std::string why) {
  Error e = make_error(ErrorCode::CorruptStore, std::move(why));
  e.height = height;
  return e;
}

Error io_error(const std::string& what) {
  return make_error(ErrorCode::IoError, what + ": " + std::strerror(errno));
}

struct Parsed {
  LoadedChain loaded;
  std::size_t good_length = 0;  // bytes up to and including the last complete line
};

Result<Parsed> parse_store(const std::string& content, const state::WorldState& genesis) {
  Parsed out;
  std::size_t pos = 0;
  std::uint64_t height = 0;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    if (nl == std::string::npos) {
      out.loaded.warnings.push_back("torn final line at height " + std::to_string(height) + " (" +
                                    std::to_string(content.size() - pos) + " bytes) discarded");
      break;
    }
    auto block = decode_store_line(std::string_view(content).substr(pos, nl - pos));
    if (!block) return corrupt(height, block.error().describe());
    if (auto st = out.loaded.chain.append(std::move(*block)); !st) return corrupt(height, st.error().describe());
    pos = nl + 1;
    out.good_length = pos;
    ++height;
  }
  auto verdict = ledger::verify_chain(out.loaded.chain, genesis);
  if (!verdict.ok) return corrupt(verdict.height, verdict.reason);
  return out;
}

Result<std::string> read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return make_error(ErrorCode::IoError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}
}  // namespace

std::string encode_store_line(const ledger::Block& b) {
  const std::string bytes = ledger::block_bytes(b);
  return "{\"block\":" + bytes + ",\"crc\":\"" + crc_hex(bytes) + "\"}";
}

Result<ledger::Block> decode_store_line(std::string_view line) {
  if (!is_canonical(line)) return make_error(ErrorCode::Malformed, "store line is not canonical JSON");
  const Json j = *parse_json(line);
  if (!j.is_object() || j.size() != 2 || !j.contains("block") || !j.contains("crc") || !j["crc"].is_string())
    return make_error(ErrorCode::Malformed, "store line must hold exactly block and crc");
  const std::string bytes = canonical_dump(j["block"]);
  if (j["crc"].get<std::string>() != crc_hex(bytes)) return make_error(ErrorCode::CorruptStore, "checksum mismatch");
  return ledger::decode_block(bytes);
}

Result<ChainStore> ChainStore::open(const std::string& path) {
  const int fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) return io_error("open " + path);
  return ChainStore(path, fd);
}

ChainStore::ChainStore(ChainStore&& other) noexcept : path_(std::move(other.path_)), fd_(other.fd_) {
  other.fd_ = -1;
}

ChainStore& ChainStore::operator=(ChainStore&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    path_ = std::move(other.path_);
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

ChainStore::~ChainStore() {
  if (fd_ >= 0) ::close(fd_);
}

Status ChainStore::append(const ledger::Block& b) {
  const std::string line = encode_store_line(b) + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const auto n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      return io_error("write " + path_);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) return io_error("fsync " + path_);
  return ok_status();
}

Result<LoadedChain> ChainStore::load(const state::WorldState& genesis) {
  auto content = read_all(path_);
  if (!content) return content.error();
  auto parsed = parse_store(*content, genesis);
  if (!parsed) return parsed.error();
  if (parsed->good_length != content->size()) {
    if (::ftruncate(fd_, static_cast<off_t>(parsed->good_length)) != 0) return io_error("truncate " + path_);
    if (::fsync(fd_) != 0) return io_error("fsync " + path_);
  }
  return std::move(parsed->loaded);
}

Result<LoadedChain> read_chain_file(const std::string& path, const state::WorldState& genesis) {
  auto content = read_all(path);
  if (!content) return content.error();
  auto parsed = parse_store(*content, genesis);
  if (!parsed) return parsed.error();
  return std::move(parsed->loaded);
}

Status prepare_data_dir(const DataDir& dir, const GenesisFile& genesis, const Address& node) {
  std::error_code ec;
  std::filesystem::create_directories(dir.root, ec);
  if (ec) return make_error(ErrorCode::IoError, "cannot create " + dir.root + ": " + ec.message());

  const std::string bytes = genesis_bytes(genesis);
  if (std::filesystem::exists(dir.genesis_path())) {
    auto existing = load_genesis_file(dir.genesis_path());
    if (!existing) return existing.error();
    if (genesis_bytes(*existing) != bytes)
      return make_error(ErrorCode::VerificationFailed, dir.genesis_path() + " differs from the configured genesis");
  } else {
    std::ofstream out(dir.genesis_path(), std::ios::binary);
    out << bytes << '\n';
    if (!out) return make_error(ErrorCode::IoError, "cannot write " + dir.genesis_path());
  }
  std::ofstream key(dir.node_key_path(), std::ios::binary | std::ios::trunc);
  key << canonical_dump(Json{{"address", node.hex()}}) << '\n';
  if (!key) return make_error(ErrorCode::IoError, "cannot write " + dir.node_key_path());
  return ok_status();
}

}  // namespace chainguard::persistence
