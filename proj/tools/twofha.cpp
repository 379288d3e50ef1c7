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


// twofha: operator and developer tool.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <signal.h>

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "twofha/config.hpp"
#include "twofha/errors.hpp"
#include "twofha/honeychecker.hpp"
#include "twofha/honeychecker_http.hpp"
#include "twofha/provisioning.hpp"
#include "twofha/qr_image.hpp"
#include "twofha/server.hpp"

namespace {

using namespace twofha;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kConfig:
    case ErrorKind::kValidation:
    case ErrorKind::kPolicy:
    case ErrorKind::kParse:
    case ErrorKind::kCodec:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

// Blocks SIGINT/SIGTERM in every thread and runs `on_signal` from a
// dedicated waiter thread when one arrives.
class ShutdownOnSignal {
 public:
  explicit ShutdownOnSignal(std::function<void()> on_signal) {
    sigemptyset(&set_);
    sigaddset(&set_, SIGINT);
    sigaddset(&set_, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set_, nullptr);
    waiter_ = std::thread([this, on_signal = std::move(on_signal)] {
      int sig = 0;
      sigwait(&set_, &sig);
      if (!done_) on_signal();
    });
  }
  ~ShutdownOnSignal() {
    done_ = true;
    pthread_kill(waiter_.native_handle(), SIGTERM);
    waiter_.join();
  }

 private:
  sigset_t set_{};
  std::atomic<bool> done_{false};
  std::thread waiter_;
};

int run_serve(const std::string& config_path) {
  const AppConfig config = load_config(config_path);
  prepare_state_dirs(config);
  ServerApp app(config);
  const int port = app.bind();
  ShutdownOnSignal guard([&] { app.stop(); });
  std::cout << "listening on " << config.server.host << ':' << port << std::endl;
  app.run();
  return kExitOk;
}

int run_honeychecker(const std::string& config_path, std::optional<int> port_override) {
  const AppConfig config = load_config(config_path);
  prepare_state_dirs(config);
  if (config.honeychecker.shared_secret.empty()) {
    throw ConfigError("honeychecker.shared_secret must be set");
  }
  SystemClock clock;
  FanoutAlarmSink alarms;
  alarms.add(std::make_shared<LogAlarmSink>(config.honeychecker.alarm_log));
  if (!config.honeychecker.alarm_webhook.empty()) {
    alarms.add(std::make_shared<WebhookAlarmSink>(config.honeychecker.alarm_webhook));
  }
  Honeychecker checker(std::make_unique<IndexStore>(config.honeychecker.store),
                       config.accounts.slot_count, alarms, clock);
  HoneycheckerHttpService service(checker, config.honeychecker.shared_secret);
  const int port =
      service.bind(config.honeychecker.host, port_override.value_or(config.honeychecker.port));
  ShutdownOnSignal guard([&] { service.stop(); });
  std::cout << "listening on " << config.honeychecker.host << ':' << port << std::endl;
  service.run();
  return kExitOk;
}

std::filesystem::path prepare_out_dir(const std::string& out) {
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + out + ": " + ec.message());
  return dir;
}

int run_register(const std::string& config_path, const RegistrationForm& form,
                 const std::string& out, bool force) {
  const AppConfig config = load_config(config_path);
  prepare_state_dirs(config);
  ServerApp app(config);
  const auto bundle = app.accounts().register_user(form);
  std::optional<std::filesystem::path> dir;
  if (!out.empty()) dir = prepare_out_dir(out);
  for (const auto& entry : bundle.entries) {
    std::cout << entry.uri << '\n';
    if (dir) {
      write_qr_files(entry.qr, *dir / (form.username + "-slot-" + std::to_string(entry.slot)), force);
    }
  }
  return kExitOk;
}

int run_qr(const std::vector<std::string>& uris, const std::string& out, bool force) {
  for (std::size_t i = 0; i < uris.size(); ++i) {
    if (uris[i].empty()) throw ValidationError("argument " + std::to_string(i + 1) + " is an empty URI");
  }
  const auto dir = prepare_out_dir(out);
  for (std::size_t i = 0; i < uris.size(); ++i) {
    const auto stem = dir / ("qr-" + std::to_string(i + 1));
    write_qr_files(render_qr(uris[i]), stem, force);
    std::cout << stem.string() << ".png\n" << stem.string() << ".svg\n";
  }
  return kExitOk;
}

struct AuthenticatorRow {
  std::string label;
  OtpauthKey key;
  std::optional<SweetSecret> secret;
};

void print_codes(const std::vector<AuthenticatorRow>& rows, std::int64_t now) {
  std::cout << std::left << std::setw(6) << "slot" << std::setw(10) << "code" << std::setw(11)
            << "remaining" << "account\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string slot = row.key.slot ? std::to_string(*row.key.slot) : std::to_string(i + 1);
    std::string code;
    std::string remaining = "-";
    if (row.key.type == OtpType::kTotp) {
      code = totp(*row.secret, now, row.key.params).str();
      remaining = std::to_string(seconds_remaining(now, row.key.params)) + "s";
    } else {
      code = hotp(*row.secret, row.key.counter, row.key.params).str();
    }
    std::cout << std::setw(6) << slot << std::setw(10) << code << std::setw(11) << remaining
              << row.label << '\n';
  }
  std::cout << std::flush;
}

int run_authenticator(const std::vector<std::string>& uris, std::optional<std::int64_t> at,
                      bool watch, int iterations) {
  std::vector<AuthenticatorRow> rows;
  for (std::size_t i = 0; i < uris.size(); ++i) {
    try {
      AuthenticatorRow row;
      row.key = parse_otpauth_uri(uris[i]);
      row.secret.emplace(row.key.secret, row.key.slot.value_or(static_cast<int>(i) + 1));
      row.label = row.key.issuer + ":" + row.key.account;
      if (row.key.slot) row.label += " (slot " + std::to_string(*row.key.slot) + ")";
      rows.push_back(std::move(row));
    } catch (const Error& e) {
      std::cerr << "twofha authenticator: argument " << i + 1 << " (" << uris[i]
                << "): " << e.what() << '\n';
      return kExitUsage;
    }
  }

  SystemClock clock;
  std::int64_t now = at.value_or(clock.now());
  print_codes(rows, now);
  if (!watch) return kExitOk;
  for (int n = 1; iterations <= 0 || n < iterations; ++n) {
    const auto& params = rows.front().key.params;
    std::this_thread::sleep_for(std::chrono::seconds(seconds_remaining(now, params)));
    now = at ? now + seconds_remaining(now, params) : clock.now();
    std::cout << '\n';
    print_codes(rows, now);
  }
  return kExitOk;
}

int run_unlock(const std::string& config_path, const std::string& username,
               const std::string& admin_token) {
  const AppConfig config = load_config(config_path);
  prepare_state_dirs(config);
  ServerApp app(config);
  app.accounts().unlock(admin_token.empty() ? config.accounts.admin_token : admin_token, username);
  std::cout << "unlocked " << username << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-factor honeytoken authentication: server, honeychecker and tooling"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  bool force = false;

  auto* serve = app.add_subcommand("serve", "Run the HTTP authentication server");
  serve->add_option("--config", config_path, "Config file")->required();

  std::optional<int> hc_port;
  auto* hc = app.add_subcommand("honeychecker", "Run the standalone honeychecker");
  hc->add_option("--config", config_path, "Config file")->required();
  hc->add_option("--port", hc_port, "Override the listen port (0 picks a free one)");

  RegistrationForm form;
  auto* reg = app.add_subcommand("register", "Register a user and write its QR codes");
  reg->add_option("--config", config_path, "Config file")->required();
  reg->add_option("--username", form.username)->required();
  reg->add_option("--password", form.password)->required();
  reg->add_option("--firstname", form.firstname)->required();
  reg->add_option("--lastname", form.lastname)->required();
  reg->add_option("--phone", form.phone)->required();
  reg->add_option("--position", form.position, "Genuine slot, 1..N")->required();
  reg->add_option("--out", out, "Directory for QR images");
  reg->add_flag("--force", force, "Overwrite existing image files");

  std::vector<std::string> uris;
  auto* qr = app.add_subcommand("qr", "Write PNG and SVG QR codes for otpauth URIs");
  qr->add_option("uri", uris, "URIs to encode")->required();
  qr->add_option("--out", out, "Output directory")->required();
  qr->add_flag("--force", force, "Overwrite existing files");

  std::optional<std::int64_t> at;
  bool watch = false;
  int iterations = 0;
  auto* auth = app.add_subcommand("authenticator", "Show current codes for otpauth URIs");
  auth->add_option("uri", uris, "otpauth URIs")->required();
  auth->add_option("--at", at, "Unix time to compute codes for (default: now)");
  auth->add_flag("--watch", watch, "Refresh at every time step");
  auth->add_option("--count", iterations, "Stop after this many tables (with --watch)");

  std::string username;
  std::string admin_token;
  auto* unlock = app.add_subcommand("unlock", "Reactivate a locked account");
  unlock->add_option("--config", config_path, "Config file")->required();
  unlock->add_option("--username", username)->required();
  unlock->add_option("--admin-token", admin_token, "Defaults to accounts.admin_token");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*serve) return run_serve(config_path);
    if (*hc) return run_honeychecker(config_path, hc_port);
    if (*reg) return run_register(config_path, form, out, force);
    if (*qr) return run_qr(uris, out, force);
    if (*auth) return run_authenticator(uris, at, watch, iterations);
    if (*unlock) return run_unlock(config_path, username, admin_token);
  } catch (const Error& e) {
    std::cerr << "twofha: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "twofha: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
