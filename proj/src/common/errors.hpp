// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace chainguard {

// Closed error vocabulary. The names double as the wire codes in API error
// bodies and as the numeric status codes of the C interface (value + 1).
enum class ErrorCode : int {
  // scu / sco contract errors
  AlreadyRegistered,
  UnknownOrg,
  UnknownRole,
  NotEligible,
  RoleFull,
  AddressMismatch,
  NotRegistered,
  NoSuchAssignment,
  AlreadyAssigned,
  NotAuthorized,
  DuplicateGrant,
  NotGranted,
  InvalidPayload,
  // transaction envelope
  BadNonce,
  BadSignature,
  // wallet
  WeakPassphrase,
  BadPassphrase,
  SenderMismatch,
  // ledger / replay / storage
  InvalidTransaction,
  LinkMismatch,
  HeightGap,
  RootMismatch,
  ReplayDivergence,
  VerificationFailed,
  CorruptStore,
  // plumbing
  Malformed,
  MissingParam,
  NotFound,
  Unavailable,
  Timeout,
  IoError,
  Internal,
};

std::string_view error_name(ErrorCode code);
std::optional<ErrorCode> error_from_name(std::string_view name);
const std::vector<ErrorCode>& all_error_codes();

struct Error {
  ErrorCode code = ErrorCode::Internal;
  std::string message;
  std::optional<std::uint64_t> height;
  std::optional<std::uint64_t> index;
  /// Underlying error when this one wraps another (e.g. InvalidTransaction).
  std::optional<ErrorCode> cause;

  std::string describe() const;
};

inline Error make_error(ErrorCode code, std::string message = {}) {
  return Error{code, std::move(message), std::nullopt, std::nullopt, std::nullopt};
}

/// Minimal value-or-error return type.
template <class T = std::monostate>
class [[nodiscard]] Result {
 public:
  Result(T value) : v_(std::move(value)) {}
  Result(Error error) : v_(std::move(error)) {}

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }

  T& value() & { return std::get<0>(v_); }
  const T& value() const& { return std::get<0>(v_); }
  T&& value() && { return std::get<0>(std::move(v_)); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }
  T& operator*() & { return value(); }
  const T& operator*() const& { return value(); }

  const Error& error() const { return std::get<1>(v_); }
  ErrorCode code() const { return error().code; }

 private:
  std::variant<T, Error> v_;
};

using Status = Result<std::monostate>;
inline Status ok_status() { return Status(std::monostate{}); }

}  // namespace chainguard
