// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "wallet/wallet.hpp"

#include <sys/stat.h>

#include <fstream>
#include <sstream>

namespace chainguard::wallet {

namespace {
constexpr std::string_view kNonceDomain = "chainguard/wallet-seal-nonce/v1";

// Each wallet key is used for exactly one seal, so the nonce can be derived
// from the salt.
Bytes seal_nonce(const Salt& salt) {
  Bytes material(kNonceDomain.begin(), kNonceDomain.end());
  material.insert(material.end(), salt.bytes.begin(), salt.bytes.end());
  const Digest d = crypto::sha256(material);
  return Bytes(d.bytes.begin(), d.bytes.begin() + crypto::kSealNonceBytes);
}

struct KeyBuffer {
  Bytes bytes;
  ~KeyBuffer() {
    crypto::wipe(bytes);
  }
};
}  // namespace

Digest password_digest(std::string_view passphrase, const Salt& salt) {
  Bytes material(passphrase.begin(), passphrase.end());
  material.insert(material.end(), salt.bytes.begin(), salt.bytes.end());
  return crypto::sha256(material);
}

Result<Wallet> create_wallet(const Seed& seed, std::string_view passphrase,
                             const CreateOptions& options) {
  if (passphrase.size() < kMinPassphraseLength)
    return make_error(ErrorCode::WeakPassphrase,
                      "passphrase must be at least " + std::to_string(kMinPassphraseLength) +
                          " characters");
  Wallet w;
  if (options.salt) {
    w.kdf_salt = *options.salt;
  } else {
    crypto::random_bytes(w.kdf_salt.bytes);
  }
  w.kdf_iterations = options.kdf_iterations;

  const crypto::SigningSeed signing(seed);
  w.public_key = crypto::ed25519_public_key(signing);
  w.address = crypto::derive_address(w.public_key);
  w.password_digest = password_digest(passphrase, w.kdf_salt);

  KeyBuffer key{crypto::pbkdf2_sha256(passphrase, w.kdf_salt.view(), w.kdf_iterations, 32)};
  const Bytes nonce = seal_nonce(w.kdf_salt);
  Bytes box = crypto::seal(key.bytes, nonce, signing.view());
  w.enc_private_key = nonce;
  w.enc_private_key.insert(w.enc_private_key.end(), box.begin(), box.end());
  return w;
}

Result<Signer> Signer::unlock(const Wallet& wallet, std::string_view passphrase) {
  if (wallet.enc_private_key.size() != crypto::kSealNonceBytes + 32 + crypto::kSealTagBytes)
    return make_error(ErrorCode::Malformed, "encrypted key has wrong length");
  KeyBuffer key{
      crypto::pbkdf2_sha256(passphrase, wallet.kdf_salt.view(), wallet.kdf_iterations, 32)};
  const ByteView enc(wallet.enc_private_key);
  auto plain = crypto::open(key.bytes, enc.subspan(0, crypto::kSealNonceBytes),
                            enc.subspan(crypto::kSealNonceBytes));
  if (!plain) return make_error(ErrorCode::BadPassphrase, "passphrase does not unlock this wallet");
  KeyBuffer plain_guard{std::move(*plain)};
  auto seed = crypto::SigningSeed::from_view(plain_guard.bytes);
  const PublicKey pk = crypto::ed25519_public_key(*seed);
  if (pk != wallet.public_key)
    return make_error(ErrorCode::BadPassphrase, "decrypted key does not match public key");
  return Signer(std::move(*seed), pk, wallet.address);
}

Signer Signer::from_seed(const Seed& seed) {
  crypto::SigningSeed s(seed);
  const PublicKey pk = crypto::ed25519_public_key(s);
  return Signer(std::move(s), pk, crypto::derive_address(pk));
}

Result<SignedTransaction> Signer::sign(const TxBody& body) const {
  if (body.sender != address_)
    return make_error(ErrorCode::SenderMismatch, "transaction sender is not this wallet");
  SignedTransaction tx{body.sender, body.nonce, body.payload, {}};
  tx.signature = crypto::ed25519_sign(seed_, as_bytes(signing_bytes(body)));
  return tx;
}

Result<SignedTransaction> sign_transaction(const Wallet& wallet, std::string_view passphrase,
                                           const TxBody& body) {
  if (body.sender != wallet.address)
    return make_error(ErrorCode::SenderMismatch, "transaction sender is not this wallet");
  auto signer = Signer::unlock(wallet, passphrase);
  if (!signer) return signer.error();
  return signer->sign(body);
}

bool verify_signature(const SignedTransaction& tx, const PublicKey& public_key) {
  return crypto::ed25519_verify(tx.signature, as_bytes(signing_bytes(tx.body())), public_key);
}

Json wallet_to_json(const Wallet& w) {
  return Json{{"version", 1},
              {"address", w.address.hex()},
              {"public_key", w.public_key.hex()},
              {"enc_private_key", to_hex(w.enc_private_key)},
              {"kdf", "pbkdf2-hmac-sha256"},
              {"kdf_iterations", w.kdf_iterations},
              {"kdf_salt", w.kdf_salt.hex()},
              {"password_digest", w.password_digest.hex()}};
}

Result<Wallet> wallet_from_json(const Json& j) {
  try {
    ObjectReader r(j,
                   {"version", "address", "public_key", "enc_private_key", "kdf",
                    "kdf_iterations", "kdf_salt", "password_digest"},
                   "wallet");
    if (r.u64("version") != 1) return make_error(ErrorCode::Malformed, "unsupported wallet version");
    if (r.str("kdf") != "pbkdf2-hmac-sha256")
      return make_error(ErrorCode::Malformed, "unsupported kdf");
    Wallet w;
    w.address = r.fixed<Address>("address");
    w.public_key = r.fixed<PublicKey>("public_key");
    w.enc_private_key = r.hex("enc_private_key");
    const auto iters = r.u64("kdf_iterations");
    if (iters == 0 || iters > 100'000'000) return make_error(ErrorCode::Malformed, "bad kdf_iterations");
    w.kdf_iterations = static_cast<std::uint32_t>(iters);
    w.kdf_salt = r.fixed<Salt>("kdf_salt");
    w.password_digest = r.fixed<Digest>("password_digest");
    if (crypto::derive_address(w.public_key) != w.address)
      return make_error(ErrorCode::AddressMismatch, "address does not match public key");
    return w;
  } catch (const DecodeError& e) {
    return make_error(ErrorCode::Malformed, e.what());
  }
}

Result<Wallet> load_wallet_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return make_error(ErrorCode::IoError, "cannot open wallet file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto j = parse_json(buf.str());
  if (!j) return make_error(ErrorCode::Malformed, "wallet file is not JSON");
  return wallet_from_json(*j);
}

Status save_wallet_file(const Wallet& w, const std::string& path) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return make_error(ErrorCode::IoError, "cannot write wallet file " + path);
    out << canonical_dump(wallet_to_json(w)) << '\n';
    if (!out) return make_error(ErrorCode::IoError, "short write to " + path);
  }
  ::chmod(path.c_str(), S_IRUSR | S_IWUSR);
  return ok_status();
}

}  // namespace chainguard::wallet
