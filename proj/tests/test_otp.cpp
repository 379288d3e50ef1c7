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


#include <gtest/gtest.h>

#include <set>

#include "oracle/reference.hpp"
#include "support.hpp"
#include "twofha/errors.hpp"
#include "twofha/otp.hpp"

namespace twofha {
namespace {

using testing::kRfcSecret;

TotpParams digits(int d) {
  TotpParams p;
  p.digits = d;
  return p;
}

// RFC 4226 Appendix D.
TEST(Hotp, MatchesRfc4226AppendixD) {
  const std::vector<std::string> expected = {"755224", "287082", "359152", "969429", "338314",
                                             "254676", "287922", "162583", "399871", "520489"};
  const SweetSecret secret(kRfcSecret);
  for (std::uint64_t c = 0; c < expected.size(); ++c) {
    EXPECT_EQ(hotp(secret, c, {}).str(), expected[c]) << "counter " << c;
  }
}

TEST(Hotp, AgreesWithIndependentOracle) {
  SeededRandom rng(1);
  for (int i = 0; i < 300; ++i) {
    const Bytes key = rng.bytes(10 + rng.uniform(60));
    const std::uint64_t counter = rng.uniform(UINT64_MAX);
    const int d = 6 + static_cast<int>(rng.uniform(3));
    EXPECT_EQ(hotp(SweetSecret(key), counter, digits(d)).str(), oracle::hotp_sha1(key, counter, d));
  }
}

TEST(Hotp, IsDeterministic) {
  const SweetSecret secret(kRfcSecret);
  EXPECT_EQ(hotp(secret, 42, {}), hotp(secret, 42, {}));
}

TEST(Hotp, OutputAlwaysInRange) {
  SeededRandom rng(2);
  for (int d = 6; d <= 8; ++d) {
    for (int i = 0; i < 200; ++i) {
      const auto code = hotp(SweetSecret(rng.bytes(20)), rng.uniform(1u << 30), digits(d));
      ASSERT_EQ(code.size(), static_cast<std::size_t>(d));
      EXPECT_LT(code.value(), d == 6 ? 1000000u : d == 7 ? 10000000u : 100000000u);
    }
  }
}

// RFC 6238 Appendix B, SHA-1 column (plus the SHA-256/512 rows through the
// algorithm hook).
TEST(Totp, MatchesRfc6238AppendixB) {
  struct Row {
    std::int64_t time;
    const char* sha1;
    const char* sha256;
    const char* sha512;
  };
  const Row rows[] = {{59, "94287082", "46119246", "90693936"},
                      {1111111109, "07081804", "68084774", "25091201"},
                      {1111111111, "14050471", "67062674", "99943326"},
                      {1234567890, "89005924", "91819424", "93441116"},
                      {2000000000, "69279037", "90698825", "38618901"},
                      {20000000000, "65353130", "77737706", "47863826"}};
  const SweetSecret key20(kRfcSecret);
  const SweetSecret key32(Bytes(as_bytes("12345678901234567890123456789012").begin(),
                                as_bytes("12345678901234567890123456789012").end()));
  const std::string k64 = "1234567890123456789012345678901234567890123456789012345678901234";
  const SweetSecret key64(Bytes(k64.begin(), k64.end()));
  for (const auto& row : rows) {
    TotpParams p = digits(8);
    EXPECT_EQ(totp(key20, row.time, p).str(), row.sha1) << row.time;
    p.algorithm = HashAlgorithm::kSha256;
    EXPECT_EQ(totp(key32, row.time, p).str(), row.sha256) << row.time;
    p.algorithm = HashAlgorithm::kSha512;
    EXPECT_EQ(totp(key64, row.time, p).str(), row.sha512) << row.time;
  }
}

TEST(Totp, SameWindowSameCode) {
  const SweetSecret secret(kRfcSecret);
  TotpParams p;
  p.t0 = 1000;
  EXPECT_EQ(totp(secret, 1000, p), totp(secret, 1029, p));
  EXPECT_EQ(totp(secret, 1000, p), hotp(secret, 0, p));
  EXPECT_EQ(totp(secret, 1030, p), hotp(secret, 1, p));
}

TEST(Totp, RejectsTimeBeforeEpoch) {
  TotpParams p;
  p.t0 = 100;
  EXPECT_THROW(totp(SweetSecret(kRfcSecret), 99, p), ValidationError);
}

TEST(Totp, ConsistentWithHotp) {
  SeededRandom rng(3);
  for (int i = 0; i < 2000; ++i) {
    TotpParams p;
    p.step = 1 + static_cast<std::int64_t>(rng.uniform(120));
    p.t0 = static_cast<std::int64_t>(rng.uniform(1000));
    const SweetSecret s(rng.bytes(10 + rng.uniform(20)));
    const std::int64_t t = p.t0 + static_cast<std::int64_t>(rng.uniform(4000000000ULL));
    ASSERT_EQ(totp(s, t, p), hotp(s, static_cast<std::uint64_t>((t - p.t0) / p.step), p));
  }
}

TEST(TotpParams, ValidatesRanges) {
  TotpParams p;
  p.step = 0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.digits = 5;
  EXPECT_THROW(p.validate(), ValidationError);
  p.digits = 9;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.skew = -1;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(SweetSecret, EnforcesMinimumLength) {
  EXPECT_THROW(SweetSecret(Bytes(9, 1)), ValidationError);
  EXPECT_NO_THROW(SweetSecret(Bytes(10, 1)));
}

TEST(OtpCode, ParsesOnlyDigitsOfExactLength) {
  EXPECT_EQ(OtpCode::parse("012345").value(), 12345u);
  EXPECT_THROW(OtpCode::parse("12345"), ValidationError);
  EXPECT_THROW(OtpCode::parse("12a456"), ValidationError);
  EXPECT_THROW(OtpCode::parse("1234567"), ValidationError);
  EXPECT_NO_THROW(OtpCode::parse("12345678", 8));
}

TEST(VerifyCode, AcceptsOwnCode) {
  const SweetSecret s(kRfcSecret);
  TotpParams p;
  p.skew = 0;
  EXPECT_TRUE(verify_code(s, totp(s, 1000, p).str(), 1000, p));
}

TEST(VerifyCode, WindowEdge) {
  const SweetSecret s(kRfcSecret);
  TotpParams p;
  const std::string next = totp(s, 1000 + p.step, p).str();
  p.skew = 1;
  EXPECT_TRUE(verify_code(s, next, 1000, p));
  p.skew = 0;
  // Guard against the (unlikely) case where adjacent windows share a code.
  if (next != totp(s, 1000, p).str()) EXPECT_FALSE(verify_code(s, next, 1000, p));
}

TEST(VerifyCode, MalformedCandidateIsValidationError) {
  const SweetSecret s(kRfcSecret);
  EXPECT_THROW(verify_code(s, "abc", 1000, {}), ValidationError);
  EXPECT_THROW(verify_code(s, "1234567", 1000, {}), ValidationError);
  EXPECT_THROW(verify_code(s, "", 1000, {}), ValidationError);
}

TEST(VerifyCode, WindowClampedAtEpoch) {
  const SweetSecret s(kRfcSecret);
  // Counter 0 has no predecessor; must not underflow.
  EXPECT_TRUE(verify_code(s, hotp(s, 0, {}).str(), 5, {}));
  EXPECT_EQ(window_codes(s, 5, {}).size(), 2u);
}

TEST(VerifyCode, GenuineCodesAlwaysVerify) {
  SeededRandom rng(4);
  for (int i = 0; i < 500; ++i) {
    TotpParams p;
    p.skew = static_cast<int>(rng.uniform(3));
    p.digits = 6 + static_cast<int>(rng.uniform(3));
    const SweetSecret s(rng.bytes(20));
    const std::int64_t t = static_cast<std::int64_t>(rng.uniform(3000000000ULL));
    ASSERT_TRUE(verify_code(s, totp(s, t, p).str(), t, p));
  }
}

// Exhaustive enumeration of the 6-digit space: the accepted set is exactly
// the window codes (deduplicated), so at most 2*skew+1 codes pass.
TEST(VerifyCode, ExhaustiveAcceptanceMatchesWindow) {
  const SweetSecret s(kRfcSecret);
  for (int skew : {0, 1}) {
    TotpParams p;
    p.skew = skew;
    const std::int64_t t = testing::kFixtureTime;
    std::set<std::string> expected;
    for (int k = -skew; k <= skew; ++k) {
      expected.insert(oracle::hotp_sha1(kRfcSecret, static_cast<std::uint64_t>(t / 30 + k), 6));
    }
    std::set<std::string> accepted;
    char buf[12];
    for (int code = 0; code < 1000000; ++code) {
      std::snprintf(buf, sizeof buf, "%06d", code);
      if (verify_code(s, buf, t, p)) accepted.insert(buf);
    }
    EXPECT_EQ(accepted, expected);
    EXPECT_LE(accepted.size(), static_cast<std::size_t>(2 * skew + 1));
  }
}

TEST(SecondsRemaining, CountsDownWithinStep) {
  TotpParams p;
  EXPECT_EQ(seconds_remaining(0, p), 30);
  EXPECT_EQ(seconds_remaining(29, p), 1);
  EXPECT_EQ(seconds_remaining(30, p), 30);
}

TEST(Crypto, ConstantTimeEqualBasics) {
  EXPECT_TRUE(constant_time_equal(as_bytes("abc"), as_bytes("abc")));
  EXPECT_FALSE(constant_time_equal(as_bytes("abc"), as_bytes("abd")));
  EXPECT_FALSE(constant_time_equal(as_bytes("abc"), as_bytes("abcd")));
  EXPECT_TRUE(constant_time_equal(as_bytes(""), as_bytes("")));
}

TEST(Crypto, HmacSha1AgreesWithOracle) {
  SeededRandom rng(5);
  for (int i = 0; i < 100; ++i) {
    const Bytes key = rng.bytes(rng.uniform(100));
    const Bytes msg = rng.bytes(rng.uniform(200));
    const auto expected = oracle::hmac_sha1(key, msg);
    EXPECT_EQ(hmac(HashAlgorithm::kSha1, key, msg), Bytes(expected.begin(), expected.end()));
  }
}

TEST(Crypto, Base64RoundTrip) {
  SeededRandom rng(6);
  for (std::size_t n = 0; n < 40; ++n) {
    const Bytes data = rng.bytes(n);
    EXPECT_EQ(base64_decode(base64_encode(data)), data);
  }
  EXPECT_EQ(base64_encode(as_bytes("foobar")), "Zm9vYmFy");
  EXPECT_THROW(base64_decode("abc"), CodecError);
}

TEST(Crypto, UniformStaysInBound) {
  SeededRandom rng(8);
  std::vector<int> counts(3, 0);
  for (int i = 0; i < 3000; ++i) ++counts[rng.uniform(3)];
  for (int c : counts) EXPECT_GT(c, 850);
}

}  // namespace
}  // namespace twofha
