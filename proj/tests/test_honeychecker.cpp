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

#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "support.hpp"
#include "twofha/errors.hpp"
#include "twofha/honeychecker.hpp"
#include "twofha/honeychecker_http.hpp"

namespace twofha {
namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Local {
  ManualClock clock{1000};
  MemoryAlarmSink alarms;
  Honeychecker checker;
  explicit Local(std::filesystem::path path = {})
      : checker(std::make_unique<IndexStore>(std::move(path)), 3, alarms, clock) {}
};

TEST(Honeychecker, SetThenCheck) {
  Local h;
  h.checker.set_index("alice", 2);
  EXPECT_TRUE(h.checker.check("alice", 2).match);
  EXPECT_EQ(h.alarms.count(), 0u);
  const auto result = h.checker.check("alice", 1);
  EXPECT_FALSE(result.match);
  ASSERT_TRUE(result.alarm.has_value());
  EXPECT_EQ(*result.alarm, (AlarmSignal{"alice", 1, 1000}));
  EXPECT_EQ(h.alarms.count(), 1u);
}

TEST(Honeychecker, OneAlarmPerFalseCheck) {
  Local h;
  h.checker.set_index("alice", 3);
  for (int i = 0; i < 5; ++i) h.checker.check("alice", 1 + i % 2);
  h.checker.check("alice", 3);
  EXPECT_EQ(h.alarms.count(), 5u);
}

TEST(Honeychecker, UpsertReplacesIndex) {
  Local h;
  h.checker.set_index("alice", 1);
  h.checker.set_index("alice", 3);
  EXPECT_TRUE(h.checker.check("alice", 3).match);
  EXPECT_FALSE(h.checker.check("alice", 1).match);
}

TEST(Honeychecker, UnknownUserIsLookupError) {
  Local h;
  EXPECT_THROW(h.checker.check("nobody", 1), LookupError);
  EXPECT_EQ(h.alarms.count(), 0u);
}

TEST(Honeychecker, DeleteIsIdempotent) {
  Local h;
  h.checker.set_index("alice", 2);
  h.checker.delete_index("alice");
  h.checker.delete_index("alice");
  EXPECT_THROW(h.checker.check("alice", 2), LookupError);
}

TEST(Honeychecker, ValidatesIndex) {
  Local h;
  EXPECT_THROW(h.checker.set_index("alice", 0), ValidationError);
  EXPECT_THROW(h.checker.set_index("alice", 4), ValidationError);
  EXPECT_THROW(h.checker.set_index("", 1), ValidationError);
  MemoryAlarmSink sink;
  ManualClock clock(0);
  EXPECT_THROW(Honeychecker(std::make_unique<IndexStore>(), 1, sink, clock), ConfigError);
}

TEST(IndexStore, PersistsAcrossReopen) {
  testing::TempDir dir;
  const auto path = dir / "hc.log";
  {
    Local h(path);
    h.checker.set_index("alice", 2);
    h.checker.set_index("bob", 1);
    h.checker.set_index("bob", 3);
    h.checker.set_index("carol", 1);
    h.checker.delete_index("carol");
  }
  Local reopened(path);
  EXPECT_TRUE(reopened.checker.check("alice", 2).match);
  EXPECT_TRUE(reopened.checker.check("bob", 3).match);
  EXPECT_THROW(reopened.checker.check("carol", 1), LookupError);
  // Compacted: one line per live record.
  const std::string text = slurp(path);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(IndexStore, ToleratesTornLastLine) {
  testing::TempDir dir;
  const auto path = dir / "hc.log";
  { Local(path).checker.set_index("alice", 2); }
  {
    std::ofstream out(path, std::ios::app);
    out << R"({"op":"set","username":"bob","sweet_in)";
  }
  Local reopened(path);
  EXPECT_TRUE(reopened.checker.check("alice", 2).match);
  EXPECT_THROW(reopened.checker.check("bob", 1), LookupError);
}

TEST(IndexStore, CorruptMiddleLineIsStorageError) {
  testing::TempDir dir;
  const auto path = dir / "hc.log";
  {
    std::ofstream out(path);
    out << "garbage\n"
        << R"({"op":"set","username":"alice","sweet_index":1,"updated_at":0})" << "\n";
  }
  EXPECT_THROW(IndexStore{path}, StorageError);
}

TEST(IndexStore, HoldsNoSecretMaterial) {
  testing::TempDir dir;
  const auto path = dir / "hc.log";
  { Local(path).checker.set_index("alice", 2); }
  const auto line = nlohmann::json::parse(slurp(path));
  std::set<std::string> keys;
  for (auto it = line.begin(); it != line.end(); ++it) keys.insert(it.key());
  EXPECT_EQ(keys, (std::set<std::string>{"op", "username", "sweet_index", "updated_at"}));
}

TEST(AlarmSinks, LogAndFanout) {
  testing::TempDir dir;
  const auto path = dir / "alarms.jsonl";
  auto memory = std::make_shared<MemoryAlarmSink>();
  FanoutAlarmSink fanout;
  fanout.add(memory);
  fanout.add(std::make_shared<LogAlarmSink>(path));
  fanout.raise({"alice", 1, 5});
  EXPECT_EQ(memory->count(), 1u);
  const auto line = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(line["username"], "alice");
  EXPECT_EQ(line["observed_slot"], 1);
}

class HoneycheckerHttp : public ::testing::Test {
 protected:
  void SetUp() override {
    service = std::make_unique<HoneycheckerHttpService>(local.checker, "s3cret");
    port = service->bind("127.0.0.1", 0);
    thread = std::thread([this] { service->run(); });
  }
  void TearDown() override {
    service->stop();
    thread.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }

  Local local;
  std::unique_ptr<HoneycheckerHttpService> service;
  int port = 0;
  std::thread thread;
};

TEST_F(HoneycheckerHttp, RemoteClientRoundTrip) {
  RemoteHoneycheckerClient client(url(), "s3cret");
  client.set_index("alice", 2);
  EXPECT_TRUE(client.check("alice", 2));
  EXPECT_FALSE(client.check("alice", 3));
  EXPECT_EQ(local.alarms.count(), 1u);
  EXPECT_THROW(client.set_index("alice", 9), ValidationError);
  client.delete_index("alice");
  EXPECT_THROW(client.check("alice", 2), LookupError);
}

TEST_F(HoneycheckerHttp, WrongTokenRejected) {
  RemoteHoneycheckerClient client(url(), "wrong");
  EXPECT_THROW(client.set_index("alice", 2), IntegrityError);
  httplib::Client raw("127.0.0.1", port);
  auto res = raw.Post("/v1/index/check", R"({"username":"alice","slot":1})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 401);
  EXPECT_EQ(local.alarms.count(), 0u);
}

TEST_F(HoneycheckerHttp, MalformedBodies) {
  httplib::Client raw("127.0.0.1", port);
  httplib::Headers headers{{kHoneycheckerTokenHeader, "s3cret"}};
  auto res = raw.Post("/v1/index/set", headers, "not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  res = raw.Post("/v1/index/set", headers, R"({"username":"a","sweet_index":"2"})",
                 "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  res = raw.Get("/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
}

TEST_F(HoneycheckerHttp, ConcurrentChecks) {
  RemoteHoneycheckerClient client(url(), "s3cret", 4);
  client.set_index("alice", 1);
  std::vector<std::thread> workers;
  std::atomic<int> matches{0};
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&, w] {
      for (int i = 0; i < 25; ++i) {
        if (client.check("alice", 1 + (w + i) % 3)) ++matches;
      }
    });
  }
  for (auto& t : workers) t.join();
  EXPECT_EQ(static_cast<std::size_t>(matches.load()) + local.alarms.count(), 100u);
}

TEST(HoneycheckerRemote, UnreachableIsIntegrityError) {
  // Port 9 (discard) on loopback is not served in the test environment.
  RemoteHoneycheckerClient client("http://127.0.0.1:9", "s3cret", 1, 300);
  EXPECT_THROW(client.check("alice", 1), IntegrityError);
}

TEST(HoneycheckerRemote, UrlSplitting) {
  EXPECT_EQ(split_http_url("http://h:1/api/"), std::make_pair(std::string("http://h:1"),
                                                              std::string("/api")));
  EXPECT_EQ(split_http_url("http://h:1").second, "");
  EXPECT_THROW(split_http_url("h:1"), ConfigError);
}

}  // namespace
}  // namespace twofha
