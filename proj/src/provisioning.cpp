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


#include "twofha/provisioning.hpp"

#include <cctype>
#include <charconv>
#include <tuple>

#include "twofha/base32.hpp"
#include "twofha/errors.hpp"

namespace twofha {

namespace {

constexpr std::string_view kScheme = "otpauth://";
constexpr std::string_view kSlotPrefix = " (slot ";

bool passes_through(unsigned char c) {
  return std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~' || c == '(' || c == ')';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

template <typename T>
T parse_number(std::string_view text, std::size_t offset, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(std::string("invalid ") + what + " parameter", offset);
  }
  return value;
}

std::string account_label(const std::string& account, std::optional<int> slot) {
  if (!slot) return account;
  return account + std::string(kSlotPrefix) + std::to_string(*slot) + ")";
}

// Splits "name (slot N)" into name and N; leaves other labels alone.
std::pair<std::string, std::optional<int>> split_slot(const std::string& label) {
  if (label.empty() || label.back() != ')') return {label, std::nullopt};
  const auto at = label.rfind(kSlotPrefix);
  if (at == std::string::npos) return {label, std::nullopt};
  const std::string_view digits(label.data() + at + kSlotPrefix.size(),
                                label.size() - at - kSlotPrefix.size() - 1);
  if (digits.empty() || digits.size() > 4 || digits.front() == '0') return {label, std::nullopt};
  for (char c : digits) {
    if (c < '0' || c > '9') return {label, std::nullopt};
  }
  return {label.substr(0, at), std::stoi(std::string(digits))};
}

}  // namespace

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    if (passes_through(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xf]);
    }
  }
  return out;
}

std::string percent_decode(std::string_view text, std::size_t offset_base) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out.push_back(text[i]);
      continue;
    }
    if (i + 2 >= text.size()) {
      throw ParseError("truncated percent escape", offset_base + i);
    }
    const int hi = hex_value(text[i + 1]);
    const int lo = hex_value(text[i + 2]);
    if (hi < 0 || lo < 0) throw ParseError("invalid percent escape", offset_base + i);
    out.push_back(static_cast<char>(hi << 4 | lo));
    i += 2;
  }
  return out;
}

std::string build_otpauth_uri(const std::string& issuer, const std::string& account,
                              const SweetSecret& secret, const TotpParams& params, int slot) {
  OtpauthKey key;
  key.issuer = issuer;
  key.account = account;
  key.slot = slot;
  key.secret = secret.raw();
  key.params = params;
  return build_otpauth_uri(key);
}

std::string build_otpauth_uri(const OtpauthKey& key) {
  if (key.issuer.empty()) throw ValidationError("issuer must not be empty");
  if (key.account.empty()) throw ValidationError("account must not be empty");
  if (key.secret.empty()) throw ValidationError("secret must not be empty");
  key.params.validate();

  std::string uri(kScheme);
  uri += key.type == OtpType::kTotp ? "totp/" : "hotp/";
  uri += percent_encode(key.issuer);
  uri += ':';
  uri += percent_encode(account_label(key.account, key.slot));
  uri += "?secret=" + base32_encode(key.secret);
  uri += "&issuer=" + percent_encode(key.issuer);
  uri += "&algorithm=" + std::string(to_string(key.params.algorithm));
  uri += "&digits=" + std::to_string(key.params.digits);
  if (key.type == OtpType::kTotp) {
    uri += "&period=" + std::to_string(key.params.step);
  } else {
    uri += "&counter=" + std::to_string(key.counter);
  }
  return uri;
}

OtpauthKey parse_otpauth_uri(std::string_view uri) {
  if (uri.substr(0, kScheme.size()) != kScheme) {
    throw ParseError("not an otpauth:// URI", 0);
  }
  std::size_t pos = kScheme.size();
  const auto type_end = uri.find('/', pos);
  if (type_end == std::string_view::npos) throw ParseError("missing OTP type", pos);

  OtpauthKey key;
  const std::string_view type = uri.substr(pos, type_end - pos);
  if (type == "totp") {
    key.type = OtpType::kTotp;
  } else if (type == "hotp") {
    key.type = OtpType::kHotp;
  } else {
    throw ParseError("unknown OTP type '" + std::string(type) + "'", pos);
  }

  pos = type_end + 1;
  const auto query_start = uri.find('?', pos);
  const std::string_view raw_label =
      uri.substr(pos, query_start == std::string_view::npos ? std::string_view::npos
                                                            : query_start - pos);
  if (raw_label.empty()) throw ParseError("missing label", pos);

  // A literal ':' separates issuer from account; encoded colons stay in the
  // account name.
  std::optional<std::string> label_issuer;
  std::string label_account;
  if (const auto colon = raw_label.find(':'); colon != std::string_view::npos) {
    label_issuer = percent_decode(raw_label.substr(0, colon), pos);
    label_account = percent_decode(raw_label.substr(colon + 1), pos + colon + 1);
  } else {
    label_account = percent_decode(raw_label, pos);
  }
  std::tie(key.account, key.slot) = split_slot(label_account);

  bool have_secret = false;
  bool have_counter = false;
  std::optional<std::string> param_issuer;
  if (query_start != std::string_view::npos) {
    std::size_t p = query_start + 1;
    while (p <= uri.size()) {
      auto amp = uri.find('&', p);
      if (amp == std::string_view::npos) amp = uri.size();
      const std::string_view pair = uri.substr(p, amp - p);
      if (!pair.empty()) {
        const auto eq = pair.find('=');
        if (eq == std::string_view::npos) throw ParseError("query parameter without '='", p);
        const std::string name = percent_decode(pair.substr(0, eq), p);
        const std::size_t value_at = p + eq + 1;
        const std::string value = percent_decode(pair.substr(eq + 1), value_at);
        if (name == "secret") {
          try {
            key.secret = base32_decode(value);
          } catch (const CodecError& e) {
            throw ParseError(std::string("bad secret: ") + e.what(), value_at);
          }
          if (key.secret.empty()) throw ParseError("empty secret", value_at);
          have_secret = true;
        } else if (name == "issuer") {
          param_issuer = value;
        } else if (name == "algorithm") {
          try {
            key.params.algorithm = parse_hash_algorithm(value);
          } catch (const ValidationError&) {
            throw ParseError("unsupported algorithm '" + value + "'", value_at);
          }
        } else if (name == "digits") {
          key.params.digits = parse_number<int>(value, value_at, "digits");
          if (key.params.digits < 6 || key.params.digits > 8) {
            throw ParseError("digits must be 6..8", value_at);
          }
        } else if (name == "period") {
          key.params.step = parse_number<std::int64_t>(value, value_at, "period");
          if (key.params.step <= 0) throw ParseError("period must be positive", value_at);
        } else if (name == "counter") {
          key.counter = parse_number<std::uint64_t>(value, value_at, "counter");
          have_counter = true;
        }
        // Unknown parameters (e.g. "image") are ignored, as apps do.
      }
      p = amp + 1;
    }
  }

  if (!have_secret) throw ParseError("missing secret parameter", uri.size());
  if (key.type == OtpType::kHotp && !have_counter) {
    throw ParseError("hotp URI needs a counter parameter", uri.size());
  }
  if (param_issuer) {
    key.issuer = *param_issuer;
  } else if (label_issuer) {
    key.issuer = *label_issuer;
  }
  return key;
}

ProvisioningBundle provision(const SweetBundle& bundle, const std::string& issuer,
                             const TotpParams& params) {
  ProvisioningBundle out;
  for (const auto& secret : bundle.slots()) {
    ProvisioningEntry entry;
    entry.slot = secret.id();
    entry.label = issuer + ":" + account_label(bundle.username(), secret.id());
    entry.uri = build_otpauth_uri(issuer, bundle.username(), secret, params, secret.id());
    entry.qr = render_qr(entry.uri, QrEcc::kMedium);
    out.entries.push_back(std::move(entry));
  }
  return out;
}

}  // namespace twofha
