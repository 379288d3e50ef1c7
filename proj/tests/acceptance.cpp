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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed constants below.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <iostream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "oracle/reference.hpp"
#include "support.hpp"
#include "twofha/base32.hpp"
#include "twofha/errors.hpp"
#include "twofha/honeychecker_http.hpp"
#include "twofha/provisioning.hpp"
#include "twofha/server.hpp"

namespace twofha {
namespace {

using nlohmann::json;
using Steady = std::chrono::steady_clock;
using Status = OtpLoginResult::Status;

constexpr double kHotpBudgetSeconds = 1.0;
constexpr int kConsistencySamples = 10000;
constexpr double kFlowBudgetSeconds = 5.0;
constexpr int kAttackerTrials = 10000;
constexpr double kAttackerLockRate = 2.0 / 3.0;
constexpr double kAttackerTolerance = 0.02;
constexpr int kRoundTripInputs = 1000;
constexpr double kEndToEndBudgetSeconds = 10.0;

const std::string kPassword = "correct horse battery";

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(Steady::time_point start) {
  return std::chrono::duration<double>(Steady::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream out;
  out.precision(precision);
  out << std::fixed << v;
  return out.str();
}

Verdict hotp_conformance() {
  const std::vector<std::string> expected = {"755224", "287082", "359152", "969429", "338314",
                                             "254676", "287922", "162583", "399871", "520489"};
  const auto start = Steady::now();
  const SweetSecret secret(testing::kRfcSecret);
  int matched = 0;
  for (std::uint64_t c = 0; c < expected.size(); ++c) {
    if (hotp(secret, c, {}).str() == expected[c] &&
        oracle::hotp_sha1(testing::kRfcSecret, c, 6) == expected[c]) {
      ++matched;
    }
  }
  const double elapsed = seconds_since(start);
  return {matched == 10 && elapsed < kHotpBudgetSeconds,
          std::to_string(matched) + "/10 vectors, " + fmt(elapsed) + " s (budget " +
              fmt(kHotpBudgetSeconds, 1) + " s)"};
}

Verdict totp_conformance() {
  const std::vector<std::pair<std::int64_t, std::string>> vectors = {
      {59, "94287082"},         {1111111109, "07081804"}, {1111111111, "14050471"},
      {1234567890, "89005924"}, {2000000000, "69279037"}, {20000000000, "65353130"}};
  TotpParams eight;
  eight.digits = 8;
  const SweetSecret secret(testing::kRfcSecret);
  int matched = 0;
  for (const auto& [t, code] : vectors) matched += totp(secret, t, eight).str() == code;

  SeededRandom rng(6238);
  int consistent = 0;
  for (int i = 0; i < kConsistencySamples; ++i) {
    TotpParams p;
    p.step = 1 + static_cast<std::int64_t>(rng.uniform(300));
    p.digits = 6 + static_cast<int>(rng.uniform(3));
    const Bytes key = rng.bytes(10 + rng.uniform(54));
    const std::int64_t t = static_cast<std::int64_t>(rng.uniform(1ULL << 34));
    const auto counter = static_cast<std::uint64_t>(t / p.step);
    const std::string code = totp(SweetSecret(key), t, p).str();
    consistent += code == hotp(SweetSecret(key), counter, p).str() &&
                  code == oracle::hotp_sha1(key, counter, p.digits);
  }
  return {matched == 6 && consistent == kConsistencySamples,
          std::to_string(matched) + "/6 SHA-1 vectors, " + std::to_string(consistent) + "/" +
              std::to_string(kConsistencySamples) + " consistency samples"};
}

Verdict paper_flow() {
  const auto start = Steady::now();
  testing::Harness h;
  h.accounts.register_user(testing::form_for("alice", 2));

  auto s1 = h.accounts.login_password("alice", kPassword);
  const auto codes = h.last_sms_codes();
  const auto genuine = h.accounts.login_otp(s1.session.session_id, codes.at(1));

  auto s2 = h.accounts.login_password("alice", kPassword);
  const auto decoy = h.accounts.login_otp(s2.session.session_id, h.last_sms_codes().at(0));
  const auto breaches = h.accounts.breach_events("alice");
  const double elapsed = seconds_since(start);

  const bool ok = genuine.status == Status::kAuthenticated && decoy.status == Status::kLocked &&
                  decoy.breach && breaches.size() == 1 && breaches[0].matched_slot == 1 &&
                  elapsed < kFlowBudgetSeconds;
  return {ok, std::string("code #2 ") +
                  (genuine.status == Status::kAuthenticated ? "authenticated" : "rejected") +
                  ", code #1 " + (decoy.status == Status::kLocked ? "locked" : "not locked") +
                  ", breach events " + std::to_string(breaches.size()) + ", " + fmt(elapsed) +
                  " s"};
}

Verdict lockout() {
  testing::Harness h;
  h.accounts.register_user(testing::form_for("alice", 2));
  h.accounts.register_user(testing::form_for("bob", 1));
  auto attempt = [&](const std::string& user, const std::string& pw) -> std::string {
    try {
      h.accounts.login_password(user, pw);
      return "ok";
    } catch (const InvalidCredentialsError&) {
      return "invalid";
    } catch (const LockedError&) {
      return "locked";
    }
  };
  const std::vector<std::string> three = {attempt("alice", "wrong-aaaaaa"),
                                          attempt("alice", "wrong-bbbbbb"),
                                          attempt("alice", "wrong-cccccc")};
  const bool alice_locked = three == std::vector<std::string>{"invalid", "invalid", "locked"} &&
                            attempt("alice", kPassword) == "locked";
  const std::vector<std::string> wwr = {attempt("bob", "wrong-aaaaaa"),
                                        attempt("bob", "wrong-bbbbbb"), attempt("bob", kPassword),
                                        attempt("bob", "wrong-cccccc")};
  const bool bob_open = wwr == std::vector<std::string>{"invalid", "invalid", "ok", "invalid"} &&
                        attempt("bob", kPassword) == "ok";
  return {alice_locked && bob_open,
          std::string("wrong x3 ") + (alice_locked ? "locks" : "does not lock") +
              ", wrong-wrong-right " + (bob_open ? "stays open" : "locks")};
}

Verdict attacker() {
  testing::Harness h;
  SeededRandom attacker_rng(555);
  constexpr int kUsers = 30;
  std::vector<std::string> users;
  for (int u = 0; u < kUsers; ++u) {
    users.push_back("victim" + std::to_string(u));
    h.accounts.register_user(
        testing::form_for(users.back(), 1 + static_cast<int>(attacker_rng.uniform(3))));
  }
  int locked = 0;
  int authenticated = 0;
  for (int trial = 0; trial < kAttackerTrials; ++trial) {
    const std::string& user = users[static_cast<std::size_t>(trial % kUsers)];
    h.clock.advance(30);
    const auto session = h.accounts.login_password(user, kPassword).session;
    const auto codes = h.last_sms_codes();
    const auto guess = attacker_rng.uniform(3);
    const auto result = h.accounts.login_otp(session.session_id, codes.at(guess));
    if (result.status == Status::kLocked) {
      ++locked;
      h.accounts.unlock("admin-secret-token", user);
    } else if (result.status == Status::kAuthenticated) {
      ++authenticated;
    }
  }
  const double rate = static_cast<double>(locked) / kAttackerTrials;
  const bool rate_ok = std::abs(rate - kAttackerLockRate) <= kAttackerTolerance &&
                       locked + authenticated == kAttackerTrials;

  // Random guessers: enumerate the whole 6-digit space at a fixed time
  // against one bundle and count Genuine outcomes.
  SeededRandom bundle_rng(testing::kFixtureSeed);
  const auto bundle = generate_bundle("alice", 3, default_length_schedule(3), bundle_rng);
  const TotpParams params;
  std::size_t genuine = 0;
  char buf[12];
  for (int code = 0; code < 1000000; ++code) {
    std::snprintf(buf, sizeof buf, "%06d", code);
    genuine += classify_submission(bundle, 2, buf, testing::kFixtureTime, params) ==
               SubmissionOutcome::genuine();
  }
  const double guess_rate = static_cast<double>(genuine) / 1e6;
  const double guess_bound = 3.0 * (2 * params.skew + 1) / 1e6;
  return {rate_ok && guess_rate <= guess_bound,
          "lock rate " + fmt(rate) + " over " + std::to_string(kAttackerTrials) +
              " trials (target " + fmt(kAttackerLockRate) + " +/- " + fmt(kAttackerTolerance, 2) +
              "), random-guess genuine rate " + std::to_string(genuine) + "/10^6 (bound " +
              std::to_string(static_cast<int>(guess_bound * 1e6)) + "/10^6)"};
}

Verdict separation() {
  testing::TempDir dir;
  std::vector<std::string> dumps;
  std::string index_store_text;
  std::vector<std::string> secrets_and_hashes;
  for (int position = 1; position <= 3; ++position) {
    const auto hc_path = dir / ("hc-" + std::to_string(position) + ".log");
    {
      testing::Harness h(testing::fast_config(), 7, ":memory:", hc_path);
      h.accounts.register_user(testing::form_for("alice", position));
      h.accounts.register_user(testing::form_for("bob", 1 + position % 3));
      dumps.push_back(h.store.dump().dump());
      for (const auto& user : {"alice", "bob"}) {
        const auto record = h.store.find_user(user);
        secrets_and_hashes.push_back(record->password_hash);
        for (const auto& s : record->bundle.slots()) secrets_and_hashes.push_back(s.base32());
      }
    }
    std::ifstream in(hc_path);
    std::stringstream ss;
    ss << in.rdbuf();
    index_store_text += ss.str();
  }
  // Accounts side: identical bytes whatever the positions, and no column
  // that could carry an index.
  bool accounts_ok = dumps[0] == dumps[1] && dumps[1] == dumps[2];
  for (const auto& row : json::parse(dumps[0])["users"]) {
    for (auto it = row.begin(); it != row.end(); ++it) {
      accounts_ok = accounts_ok && it.key().find("index") == std::string::npos &&
                    it.key().find("position") == std::string::npos;
    }
  }
  // Honeychecker side: only usernames, indices and timestamps.
  bool checker_ok = !index_store_text.empty();
  for (const auto& secret : secrets_and_hashes) {
    checker_ok = checker_ok && index_store_text.find(secret) == std::string::npos;
  }
  std::istringstream lines(index_store_text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto entry = json::parse(line);
    for (auto it = entry.begin(); it != entry.end(); ++it) {
      static const std::set<std::string> kAllowed = {"op", "username", "sweet_index",
                                                     "updated_at"};
      checker_ok = checker_ok && kAllowed.count(it.key()) == 1;
    }
  }
  return {accounts_ok && checker_ok,
          std::string("accounts store ") +
              (accounts_ok ? "position-independent, no index column" : "LEAKS the index") +
              "; honeychecker store " +
              (checker_ok ? "holds no secrets or hashes" : "LEAKS secret material")};
}

Verdict otpauth_round_trip() {
  SeededRandom rng(4648);
  const std::string alphabet = "abcdefXYZ0189 :/?#&=%+@()-._~\xC3\xA9";
  auto text = [&] {
    std::string s;
    const std::size_t len = 1 + rng.uniform(16);
    for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.uniform(alphabet.size())]);
    return s;
  };
  int ok = 0;
  for (int i = 0; i < kRoundTripInputs; ++i) {
    OtpauthKey key;
    key.issuer = text();
    key.account = text();
    key.slot = 1 + static_cast<int>(rng.uniform(3));
    key.secret = rng.bytes(10 + rng.uniform(30));
    key.params.digits = 6 + static_cast<int>(rng.uniform(3));
    key.params.step = 15 + static_cast<std::int64_t>(rng.uniform(60));
    key.params.algorithm = static_cast<HashAlgorithm>(rng.uniform(3));
    const std::string uri = build_otpauth_uri(key);
    const auto back = parse_otpauth_uri(uri);
    ok += back == key && base32_decode(uri.substr(uri.find("secret=") + 7,
                                                  uri.find('&', uri.find("secret=")) -
                                                      uri.find("secret=") - 7)) == key.secret;
  }
  return {ok == kRoundTripInputs, std::to_string(ok) + "/" + std::to_string(kRoundTripInputs) +
                                      " randomized inputs (app scan: manual check, see README)"};
}

Verdict end_to_end_http() {
  const auto start = Steady::now();
  testing::TempDir dir;
  const auto config_path = dir / "hc.json";
  {
    std::ofstream out(config_path);
    out << json{{"honeychecker",
                 {{"shared_secret", "acceptance-secret"}, {"store", "hc.log"},
                  {"alarm_log", "alarms.log"}}}}
               .dump();
  }
  testing::Subprocess hc({TWOFHA_CLI_PATH, "honeychecker", "--config", config_path.string(),
                          "--port", "0"});
  const auto line = hc.read_line();
  if (!line || line->rfind("listening on ", 0) != 0) return {false, "honeychecker did not start"};
  const std::string hc_url = "http://127.0.0.1:" + line->substr(line->rfind(':') + 1);

  std::string trace;
  bool ok = false;
  // Scoped so pooled keep-alive connections close before shutdown.
  {
    SystemClock clock;
    SecureRandom rng;
    AuditLog audit(clock);
    AccountStore store(":memory:");
    RemoteHoneycheckerClient remote(hc_url, "acceptance-secret");
    MockSmsGateway sms;
    AccountService accounts(store, remote, sms, clock, rng, audit, testing::fast_config());
    ApiServer server(accounts, ApiServerOptions{0, {}});
    const int port = server.bind("127.0.0.1", 0);
    std::thread runner([&] { server.run(); });

    httplib::Client client("127.0.0.1", port);
    auto reg = client.Post("/register",
                           json{{"username", "alice"}, {"password", kPassword},
                                {"firstname", "Alice"}, {"lastname", "Anderson"},
                                {"phone", "+306912345678"}, {"position", 2}}
                               .dump(),
                           "application/json");
    trace += "register " + (reg ? std::to_string(reg->status) : std::string("no reply"));
    if (reg && reg->status == 201) {
      auto login = client.Post("/login", json{{"username", "alice"}, {"password", kPassword}}.dump(),
                               "application/json");
      trace += ", login " + (login ? std::to_string(login->status) : std::string("no reply"));
      if (login && login->status == 200 && sms.size() == 1) {
        const std::string body = sms.outbox().back().body;
        const std::string code = body.substr(body.find("2: ") + 3, 6);
        auto otp = client.Post("/login/otp",
                               json{{"session_id", json::parse(login->body)["session_id"]},
                                    {"code", code}}
                                   .dump(),
                               "application/json");
        trace += ", otp " + (otp ? std::to_string(otp->status) : std::string("no reply"));
        ok = otp && otp->status == 200 &&
             json::parse(otp->body)["status"] == "authenticated";
      }
    }
    server.stop();
    runner.join();
  }
  hc.signal(SIGTERM);
  const int hc_exit = hc.wait();
  const double elapsed = seconds_since(start);
  return {ok && hc_exit == 0 && elapsed < kEndToEndBudgetSeconds,
          trace + ", honeychecker exit " + std::to_string(hc_exit) + ", " + fmt(elapsed) +
              " s (budget " + fmt(kEndToEndBudgetSeconds, 1) + " s)"};
}

}  // namespace
}  // namespace twofha

int main() {
  using twofha::Verdict;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"hotp-rfc4226-vectors", twofha::hotp_conformance},
      {"totp-rfc6238-vectors", twofha::totp_conformance},
      {"position-2-flow", twofha::paper_flow},
      {"password-lockout", twofha::lockout},
      {"position-guessing-attacker", twofha::attacker},
      {"store-separation", twofha::separation},
      {"otpauth-round-trip", twofha::otpauth_round_trip},
      {"end-to-end-http", twofha::end_to_end_http},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v{false, ""};
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
