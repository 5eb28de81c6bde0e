// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "common/errors.hpp"

#include <array>

namespace chainguard {

namespace {
struct Entry {
  ErrorCode code;
  std::string_view name;
};

constexpr std::array kEntries{
    Entry{ErrorCode::AlreadyRegistered, "AlreadyRegistered"},
    Entry{ErrorCode::UnknownOrg, "UnknownOrg"},
    Entry{ErrorCode::UnknownRole, "UnknownRole"},
    Entry{ErrorCode::NotEligible, "NotEligible"},
    Entry{ErrorCode::RoleFull, "RoleFull"},
    Entry{ErrorCode::AddressMismatch, "AddressMismatch"},
    Entry{ErrorCode::NotRegistered, "NotRegistered"},
    Entry{ErrorCode::NoSuchAssignment, "NoSuchAssignment"},
    Entry{ErrorCode::AlreadyAssigned, "AlreadyAssigned"},
    Entry{ErrorCode::NotAuthorized, "NotAuthorized"},
    Entry{ErrorCode::DuplicateGrant, "DuplicateGrant"},
    Entry{ErrorCode::NotGranted, "NotGranted"},
    Entry{ErrorCode::InvalidPayload, "InvalidPayload"},
    Entry{ErrorCode::BadNonce, "BadNonce"},
    Entry{ErrorCode::BadSignature, "BadSignature"},
    Entry{ErrorCode::WeakPassphrase, "WeakPassphrase"},
    Entry{ErrorCode::BadPassphrase, "BadPassphrase"},
    Entry{ErrorCode::SenderMismatch, "SenderMismatch"},
    Entry{ErrorCode::InvalidTransaction, "InvalidTransaction"},
    Entry{ErrorCode::LinkMismatch, "LinkMismatch"},
    Entry{ErrorCode::HeightGap, "HeightGap"},
    Entry{ErrorCode::RootMismatch, "RootMismatch"},
    Entry{ErrorCode::ReplayDivergence, "ReplayDivergence"},
    Entry{ErrorCode::VerificationFailed, "VerificationFailed"},
    Entry{ErrorCode::CorruptStore, "CorruptStore"},
    Entry{ErrorCode::Malformed, "Malformed"},
    Entry{ErrorCode::MissingParam, "MissingParam"},
    Entry{ErrorCode::NotFound, "NotFound"},
    Entry{ErrorCode::Unavailable, "Unavailable"},
    Entry{ErrorCode::Timeout, "Timeout"},
    Entry{ErrorCode::IoError, "IoError"},
    Entry{ErrorCode::Internal, "Internal"},
};
}  // namespace

std::string_view error_name(ErrorCode code) {
  for (const auto& e : kEntries)
    if (e.code == code) return e.name;
  return "Internal";
}

std::optional<ErrorCode> error_from_name(std::string_view name) {
  for (const auto& e : kEntries)
    if (e.name == name) return e.code;
  return std::nullopt;
}

const std::vector<ErrorCode>& all_error_codes() {
  static const std::vector<ErrorCode> codes = [] {
    std::vector<ErrorCode> v;
    for (const auto& e : kEntries) v.push_back(e.code);
    return v;
  }();
  return codes;
}

std::string Error::describe() const {
  std::string out(error_name(code));
  if (height) out += " at height " + std::to_string(*height);
  if (index) out += " (index " + std::to_string(*index) + ")";
  if (cause) out += " [" + std::string(error_name(*cause)) + "]";
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace chainguard
