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


#include "twofha/accounts.hpp"

#include <algorithm>
#include <functional>

#include "twofha/errors.hpp"

namespace twofha {

namespace {

constexpr std::size_t kSessionIdBytes = 16;  // 128 bits
constexpr std::size_t kAuthTokenBytes = 32;

void require_field(const std::string& value, const char* name) {
  if (value.empty()) throw ValidationError(std::string(name) + " must not be empty");
  if (value.size() > 256) throw ValidationError(std::string(name) + " is too long");
}

}  // namespace

bool is_valid_phone(std::string_view phone) {
  if (phone.size() < 8 || phone.size() > 16 || phone[0] != '+' || phone[1] == '0') return false;
  return std::all_of(phone.begin() + 1, phone.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void AccountsConfig::validate() const {
  if (slot_count < 2) throw ConfigError("slot count must be at least 2");
  if (length_schedule.size() != static_cast<std::size_t>(slot_count)) {
    throw ConfigError("length schedule must have one entry per slot");
  }
  for (auto len : length_schedule) {
    if (len < SweetSecret::kMinLength) throw ConfigError("secret lengths must be at least 10 bytes");
  }
  try {
    totp.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  if (issuer.empty()) throw ConfigError("issuer must not be empty");
  if (max_password_failures < 1 || max_otp_failures < 1) {
    throw ConfigError("failure limits must be positive");
  }
  if (session_ttl <= 0) throw ConfigError("session TTL must be positive");
}

AccountService::AccountService(AccountStore& store, HoneycheckerClient& honeychecker,
                               SmsGateway& sms, const Clock& clock, RandomSource& rng,
                               AuditLog& audit, AccountsConfig config)
    : store_(store),
      honeychecker_(honeychecker),
      sms_(sms),
      clock_(clock),
      rng_(rng),
      audit_(audit),
      config_(std::move(config)) {
  config_.validate();
  // Unknown usernames are checked against this so they cost the same as a
  // wrong password.
  dummy_hash_ = hash_password("unused dummy password", config_.password_hash, rng_);
}

std::mutex& AccountService::user_mutex(const std::string& username) {
  return user_mutexes_[std::hash<std::string>{}(username) % user_mutexes_.size()];
}

void AccountService::lock_account(UserRecord& user, const std::string& reason, std::int64_t now) {
  user.status = AccountStatus::kLocked;
  user.lock_reason = reason;
  user.locked_at = now;
  store_.update_user_state(user);
  audit_.record("account_locked", user.username, reason);
}

ProvisioningBundle AccountService::register_user(const RegistrationForm& form) {
  require_field(form.username, "username");
  require_field(form.firstname, "firstname");
  require_field(form.lastname, "lastname");
  if (!is_valid_phone(form.phone)) throw ValidationError("phone must be in E.164 form, e.g. +306912345678");
  if (form.position < 1 || form.position > config_.slot_count) {
    throw ValidationError("position must be in 1.." + std::to_string(config_.slot_count));
  }
  config_.password_policy.check(form.password);

  std::lock_guard user_lock(user_mutex(form.username));
  if (store_.find_user(form.username)) throw ConflictError("username is already taken");

  const std::int64_t now = clock_.now();
  std::string password_hash;
  std::optional<SweetBundle> bundle;
  {
    std::lock_guard rng_lock(rng_mutex_);
    bundle = generate_bundle(form.username, config_.slot_count, config_.length_schedule, rng_);
    password_hash = hash_password(form.password, config_.password_hash, rng_);
  }

  honeychecker_.set_index(form.username, form.position);
  UserRecord user{form.username, password_hash, form.firstname, form.lastname, form.phone,
                  AccountStatus::kActive, "", 0, 0, 0, *bundle, now};
  try {
    store_.insert_user(user);
  } catch (...) {
    try {
      honeychecker_.delete_index(form.username);
    } catch (const Error&) {
      // The stale index is overwritten by the next registration of this name.
    }
    throw;
  }
  audit_.record("registered", form.username);
  return provision(*bundle, config_.issuer, config_.totp);
}

LoginChallenge AccountService::login_password(const std::string& username,
                                              const std::string& password) {
  std::lock_guard user_lock(user_mutex(username));
  auto user = store_.find_user(username);
  if (!user) {
    verify_password(password, dummy_hash_);
    audit_.record("password_rejected", username, "unknown user");
    throw InvalidCredentialsError("invalid username or password");
  }
  if (user->status == AccountStatus::kLocked) {
    audit_.record("login_refused", username, "locked");
    throw LockedError("account is locked");
  }

  const std::int64_t now = clock_.now();
  if (!verify_password(password, user->password_hash)) {
    ++user->failed_password_count;
    audit_.record("password_rejected", username);
    if (user->failed_password_count >= config_.max_password_failures) {
      lock_account(*user, "password", now);
      throw LockedError("account locked after repeated wrong passwords");
    }
    store_.update_user_state(*user);
    throw InvalidCredentialsError("invalid username or password");
  }

  user->failed_password_count = 0;
  store_.update_user_state(*user);

  LoginChallenge challenge;
  {
    std::lock_guard rng_lock(rng_mutex_);
    challenge.session.session_id = random_token(rng_, kSessionIdBytes);
  }
  challenge.session.username = username;
  challenge.session.issued_at = now;
  challenge.session.expires_at = now + config_.session_ttl;
  store_.purge_expired_sessions(now);
  store_.insert_session(challenge.session);
  audit_.record("password_accepted", username);

  try {
    const auto codes = codes_for_delivery(user->bundle, now, config_.totp);
    sms_.send(SmsMessage{user->phone, format_sms_body(codes)});
    challenge.sms_delivered = true;
  } catch (const std::exception&) {
    // Codes stay available in the authenticator app.
    audit_.record("sms_failed", username);
  }
  return challenge;
}

OtpLoginResult AccountService::login_otp(const std::string& session_id,
                                         const std::string& candidate, std::int64_t unix_time) {
  auto session = store_.take_session(session_id);
  if (!session) throw SessionError("unknown or already used login session");
  if (unix_time >= session->expires_at) {
    audit_.record("session_expired", session->username);
    throw SessionError("login session expired");
  }

  const std::string& username = session->username;
  std::lock_guard user_lock(user_mutex(username));
  auto user = store_.find_user(username);
  if (!user) throw SessionError("login session no longer refers to an account");
  if (user->status == AccountStatus::kLocked) throw LockedError("account is locked");

  const auto matches = matching_slots(user->bundle, candidate, unix_time, config_.totp);

  OtpLoginResult result;
  if (matches.empty()) {
    ++user->failed_otp_count;
    audit_.record("otp_rejected", username);
    if (user->failed_otp_count >= config_.max_otp_failures) {
      lock_account(*user, "otp", unix_time);
      result.status = OtpLoginResult::Status::kLocked;
      return result;
    }
    store_.update_user_state(*user);
    result.status = OtpLoginResult::Status::kRejected;
    result.attempts_remaining = config_.max_otp_failures - user->failed_otp_count;
    return result;
  }

  bool genuine = false;
  try {
    for (int slot : matches) {
      if (honeychecker_.check(username, slot)) {
        genuine = true;
        break;
      }
    }
  } catch (const LookupError&) {
    audit_.record("integrity_error", username, "honeychecker has no index");
    throw IntegrityError("honeychecker has no sweet index for this account");
  }

  if (genuine) {
    user->failed_otp_count = 0;
    user->failed_password_count = 0;
    store_.update_user_state(*user);
    {
      std::lock_guard rng_lock(rng_mutex_);
      result.auth_token = random_token(rng_, kAuthTokenBytes);
    }
    result.status = OtpLoginResult::Status::kAuthenticated;
    audit_.record("authenticated", username);
    return result;
  }

  store_.insert_breach(BreachEvent{username, candidate, matches.front(), unix_time});
  audit_.record("breach_detected", username);
  lock_account(*user, "breach", unix_time);
  result.status = OtpLoginResult::Status::kLocked;
  result.breach = true;
  return result;
}

void AccountService::unlock(const std::string& admin_credential, const std::string& username) {
  if (config_.admin_token.empty() ||
      !constant_time_equal(as_bytes(admin_credential), as_bytes(config_.admin_token))) {
    throw AuthorizationError("invalid admin credential");
  }
  std::lock_guard user_lock(user_mutex(username));
  auto user = store_.find_user(username);
  if (!user) throw LookupError("unknown user");
  user->status = AccountStatus::kActive;
  user->lock_reason.clear();
  user->locked_at = 0;
  user->failed_password_count = 0;
  user->failed_otp_count = 0;
  store_.update_user_state(*user);
  audit_.record("unlocked", username);
}

}  // namespace twofha
