// Copyright 2026 The 2FHA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twofha/crypto.hpp"
#include "twofha/otp.hpp"

namespace twofha {

/// The N OTP secrets issued to one user. Exactly one slot is genuine, but
/// nothing in this type says which: the sweet index lives in the
/// honeychecker and is only ever passed in as a call argument.
class SweetBundle {
 public:
  /// Throws ValidationError if the slots violate the bundle invariants
  /// (N >= 2, ordinals 1..N in order, pairwise-distinct secrets).
  SweetBundle(std::string username, std::vector<SweetSecret> slots);

  const std::string& username() const noexcept { return username_; }
  const std::vector<SweetSecret>& slots() const noexcept { return slots_; }
  int size() const noexcept { return static_cast<int>(slots_.size()); }

  /// 1-based.
  const SweetSecret& slot(int ordinal) const;

  bool operator==(const SweetBundle&) const = default;

 private:
  std::string username_;
  std::vector<SweetSecret> slots_;
};

/// Secret lengths 10, 15, 20, ... bytes: pairwise distinct, and every length
/// is a multiple of 5 so the Base32 form needs no padding.
std::vector<std::size_t> default_length_schedule(int n);

/// Draws N fresh secrets. Throws ConfigError if n < 2, the schedule does not
/// have n entries, or any entry is below SweetSecret::kMinLength.
SweetBundle generate_bundle(const std::string& username, int n,
                            const std::vector<std::size_t>& length_schedule, RandomSource& rng);

struct SubmissionOutcome {
  enum class Kind { kGenuine, kDecoy, kNoMatch };

  Kind kind = Kind::kNoMatch;
  int decoy_slot = 0;  // set only for kDecoy

  static SubmissionOutcome genuine() { return {Kind::kGenuine, 0}; }
  static SubmissionOutcome decoy(int slot) { return {Kind::kDecoy, slot}; }
  static SubmissionOutcome no_match() { return {Kind::kNoMatch, 0}; }

  bool operator==(const SubmissionOutcome&) const = default;
};

std::string to_string(const SubmissionOutcome& outcome);

/// Ordinals (ascending) of every slot whose windowed codes include
/// `candidate`. Throws ValidationError for a malformed candidate.
std::vector<int> matching_slots(const SweetBundle& bundle, std::string_view candidate,
                                std::int64_t unix_time, const TotpParams& params);

/// Genuine if the sweet_index slot verifies; otherwise Decoy(j) for the lowest
/// other slot j that verifies; otherwise NoMatch. Throws IntegrityError if
/// sweet_index is outside 1..N.
SubmissionOutcome classify_submission(const SweetBundle& bundle, int sweet_index,
                                      std::string_view candidate, std::int64_t unix_time,
                                      const TotpParams& params);

/// Current code of every slot, in slot order.
std::vector<OtpCode> codes_for_delivery(const SweetBundle& bundle, std::int64_t unix_time,
                                        const TotpParams& params);

}  // namespace twofha
