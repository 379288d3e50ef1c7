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

#include <array>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "twofha/account_store.hpp"
#include "twofha/audit.hpp"
#include "twofha/clock.hpp"
#include "twofha/honeychecker.hpp"
#include "twofha/password.hpp"
#include "twofha/provisioning.hpp"
#include "twofha/sms.hpp"

namespace twofha {

struct AccountsConfig {
  int slot_count = 3;
  std::vector<std::size_t> length_schedule = default_length_schedule(3);
  TotpParams totp;
  std::string issuer = "2FHA";
  int max_password_failures = 3;
  int max_otp_failures = 3;
  std::int64_t session_ttl = 90;  // three TOTP steps
  PasswordHashParams password_hash;
  PasswordPolicy password_policy;
  std::string admin_token;

  /// Throws ConfigError.
  void validate() const;
};

struct RegistrationForm {
  std::string username;
  std::string password;
  std::string firstname;
  std::string lastname;
  std::string phone;
  int position = 0;  // the sweet index, 1..N
};

struct LoginChallenge {
  LoginSession session;
  bool sms_delivered = false;
};

struct OtpLoginResult {
  enum class Status { kAuthenticated, kRejected, kLocked };

  Status status = Status::kRejected;
  std::string auth_token;      // kAuthenticated only
  bool breach = false;         // kLocked because a decoy slot was used
  int attempts_remaining = 0;  // kRejected only
};

/// E.164: '+', then 7 to 15 digits, no leading zero.
bool is_valid_phone(std::string_view phone);

/// Registration and the two-step login. Operations on one username are
/// serialized; different usernames proceed in parallel.
///
/// The sweet index is handed to the honeychecker at registration and is
/// never held here. At the OTP step the submitted code is matched against
/// every slot locally, and only the matching slot ordinal is sent to the
/// honeychecker for a genuine/decoy verdict.
class AccountService {
 public:
  AccountService(AccountStore& store, HoneycheckerClient& honeychecker, SmsGateway& sms,
                 const Clock& clock, RandomSource& rng, AuditLog& audit, AccountsConfig config);

  /// Throws ConflictError, ValidationError, PolicyError, IntegrityError.
  ProvisioningBundle register_user(const RegistrationForm& form);

  /// Throws InvalidCredentialsError (unknown user and wrong password are
  /// indistinguishable) or LockedError. The attempt that reaches the failure
  /// limit locks the account and throws LockedError.
  LoginChallenge login_password(const std::string& username, const std::string& password);

  /// Consumes the session whatever the outcome. Throws SessionError for an
  /// unknown, consumed or expired session, LockedError if the account is
  /// already locked, ValidationError for a malformed code, IntegrityError if
  /// the honeychecker cannot answer.
  OtpLoginResult login_otp(const std::string& session_id, const std::string& candidate,
                           std::int64_t unix_time);
  OtpLoginResult login_otp(const std::string& session_id, const std::string& candidate) {
    return login_otp(session_id, candidate, clock_.now());
  }

  /// Throws AuthorizationError or LookupError.
  void unlock(const std::string& admin_credential, const std::string& username);

  std::vector<BreachEvent> breach_events(const std::string& username) const {
    return store_.breaches(username);
  }

  const AccountsConfig& config() const noexcept { return config_; }

 private:
  std::mutex& user_mutex(const std::string& username);
  void lock_account(UserRecord& user, const std::string& reason, std::int64_t now);

  AccountStore& store_;
  HoneycheckerClient& honeychecker_;
  SmsGateway& sms_;
  const Clock& clock_;
  RandomSource& rng_;
  AuditLog& audit_;
  AccountsConfig config_;
  std::string dummy_hash_;
  std::mutex rng_mutex_;
  std::array<std::mutex, 64> user_mutexes_;
};

}  // namespace twofha
