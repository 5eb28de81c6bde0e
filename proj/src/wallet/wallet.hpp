// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "common/bytes.hpp"
#include "common/crypto.hpp"
#include "common/errors.hpp"
#include "wallet/transaction.hpp"

namespace chainguard::wallet {

inline constexpr std::uint32_t kDefaultKdfIterations = 10'000;
inline constexpr std::size_t kMinPassphraseLength = 8;

using Seed = std::array<std::uint8_t, 32>;

// Account credentials. The signing key never appears in clear: it is sealed
// under a key derived from the passphrase, and only the digest of
// passphrase || salt is meant to be published on chain.
struct Wallet {
  Address address;
  PublicKey public_key;
  Bytes enc_private_key;  // seal nonce (24) || box(seed)
  Salt kdf_salt;
  std::uint32_t kdf_iterations = kDefaultKdfIterations;
  Digest password_digest;

  bool operator==(const Wallet&) const = default;
};

struct CreateOptions {
  /// Fixed salt for reproducible wallets; random when absent.
  std::optional<Salt> salt;
  std::uint32_t kdf_iterations = kDefaultKdfIterations;
};

Result<Wallet> create_wallet(const Seed& seed, std::string_view passphrase,
                             const CreateOptions& options = {});

Digest password_digest(std::string_view passphrase, const Salt& salt);

/// Holds a decrypted signing seed for repeated signing.
class Signer {
 public:
  static Result<Signer> unlock(const Wallet& wallet, std::string_view passphrase);
  /// Signer straight from a raw seed, for simulations and tests.
  static Signer from_seed(const Seed& seed);

  const Address& address() const { return address_; }
  const PublicKey& public_key() const { return public_key_; }

  Result<SignedTransaction> sign(const TxBody& body) const;

 private:
  Signer(crypto::SigningSeed seed, PublicKey pk, Address addr)
      : seed_(std::move(seed)), public_key_(pk), address_(addr) {}

  crypto::SigningSeed seed_;
  PublicKey public_key_;
  Address address_;
};

Result<SignedTransaction> sign_transaction(const Wallet& wallet, std::string_view passphrase,
                                           const TxBody& body);

bool verify_signature(const SignedTransaction& tx, const PublicKey& public_key);

Json wallet_to_json(const Wallet& w);
Result<Wallet> wallet_from_json(const Json& j);

Result<Wallet> load_wallet_file(const std::string& path);
/// Writes the canonical wallet file with owner-only permissions.
Status save_wallet_file(const Wallet& w, const std::string& path);

}  // namespace chainguard::wallet
