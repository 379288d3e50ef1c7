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


#include "twofha/honeytoken.hpp"

#include <algorithm>

#include "twofha/errors.hpp"

namespace twofha {

SweetBundle::SweetBundle(std::string username, std::vector<SweetSecret> slots)
    : username_(std::move(username)), slots_(std::move(slots)) {
  if (slots_.size() < 2) throw ValidationError("a sweet bundle needs at least two slots");
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].id() != static_cast<int>(i) + 1) {
      throw ValidationError("sweet bundle slot ordinals must be 1..N in order");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (slots_[i].raw() == slots_[j].raw()) {
        throw ValidationError("sweet bundle secrets must be pairwise distinct");
      }
    }
  }
}

const SweetSecret& SweetBundle::slot(int ordinal) const {
  if (ordinal < 1 || ordinal > size()) {
    throw ValidationError("slot ordinal " + std::to_string(ordinal) + " outside 1.." +
                          std::to_string(size()));
  }
  return slots_[static_cast<std::size_t>(ordinal - 1)];
}

std::vector<std::size_t> default_length_schedule(int n) {
  std::vector<std::size_t> schedule;
  for (int i = 0; i < n; ++i) schedule.push_back(10 + 5 * static_cast<std::size_t>(i));
  return schedule;
}

SweetBundle generate_bundle(const std::string& username, int n,
                            const std::vector<std::size_t>& length_schedule, RandomSource& rng) {
  if (n < 2) throw ConfigError("sweet bundle size must be at least 2");
  if (length_schedule.size() != static_cast<std::size_t>(n)) {
    throw ConfigError("length schedule must have one entry per slot");
  }
  for (auto len : length_schedule) {
    if (len < SweetSecret::kMinLength) {
      throw ConfigError("secret length " + std::to_string(len) + " is below the " +
                        std::to_string(SweetSecret::kMinLength) + "-byte minimum");
    }
  }

  std::vector<SweetSecret> slots;
  slots.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Bytes raw = rng.bytes(length_schedule[static_cast<std::size_t>(i)]);
    // Equal-length slots can collide only with a broken generator; redraw.
    while (std::any_of(slots.begin(), slots.end(),
                       [&](const SweetSecret& s) { return s.raw() == raw; })) {
      raw = rng.bytes(raw.size());
    }
    slots.emplace_back(std::move(raw), i + 1);
  }
  return SweetBundle(username, std::move(slots));
}

std::string to_string(const SubmissionOutcome& outcome) {
  switch (outcome.kind) {
    case SubmissionOutcome::Kind::kGenuine: return "Genuine";
    case SubmissionOutcome::Kind::kDecoy: return "Decoy(" + std::to_string(outcome.decoy_slot) + ")";
    case SubmissionOutcome::Kind::kNoMatch: return "NoMatch";
  }
  return "NoMatch";
}

std::vector<int> matching_slots(const SweetBundle& bundle, std::string_view candidate,
                                std::int64_t unix_time, const TotpParams& params) {
  std::vector<int> matches;
  for (const auto& secret : bundle.slots()) {
    if (verify_code(secret, candidate, unix_time, params)) matches.push_back(secret.id());
  }
  return matches;
}

SubmissionOutcome classify_submission(const SweetBundle& bundle, int sweet_index,
                                      std::string_view candidate, std::int64_t unix_time,
                                      const TotpParams& params) {
  if (sweet_index < 1 || sweet_index > bundle.size()) {
    throw IntegrityError("sweet index " + std::to_string(sweet_index) +
                         " does not fit a bundle of " + std::to_string(bundle.size()) + " slots");
  }
  const auto matches = matching_slots(bundle, candidate, unix_time, params);
  if (std::find(matches.begin(), matches.end(), sweet_index) != matches.end()) {
    return SubmissionOutcome::genuine();
  }
  if (!matches.empty()) return SubmissionOutcome::decoy(matches.front());
  return SubmissionOutcome::no_match();
}

std::vector<OtpCode> codes_for_delivery(const SweetBundle& bundle, std::int64_t unix_time,
                                        const TotpParams& params) {
  std::vector<OtpCode> codes;
  codes.reserve(bundle.slots().size());
  for (const auto& secret : bundle.slots()) codes.push_back(totp(secret, unix_time, params));
  return codes;
}

}  // namespace twofha
