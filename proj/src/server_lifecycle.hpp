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

#include <mutex>

#include <httplib.h>

namespace twofha::detail {

/// Makes stop() effective whatever its order relative to run(): a stop
/// before run turns the later run into a no-op, a stop during startup waits
/// for the accept loop before closing it.
class ServerLifecycle {
 public:
  void run(httplib::Server& server) {
    {
      std::lock_guard lock(mutex_);
      if (stopped_) return;
      started_ = true;
    }
    server.listen_after_bind();
  }

  void stop(httplib::Server& server) {
    {
      std::lock_guard lock(mutex_);
      stopped_ = true;
      if (!started_) return;
    }
    server.wait_until_ready();
    server.stop();
  }

 private:
  std::mutex mutex_;
  bool started_ = false;
  bool stopped_ = false;
};

}  // namespace twofha::detail
