#pragma once

// In-process Executor: a callback decides the outcome of each request, so
// tests can exercise the runner without spawning processes.

#include <atomic>
#include <functional>
#include <utility>

#include "domconf/bench.hpp"

namespace testsupport {

class ScriptedExecutor : public domconf::bench::Executor {
 public:
  using Script = std::function<domconf::bench::ExecResult(const domconf::bench::ExecRequest&)>;

  explicit ScriptedExecutor(Script script) : script_(std::move(script)) {}

  domconf::bench::ExecResult execute(const domconf::bench::ExecRequest& request) override {
    ++calls_;
    return script_(request);
  }

  std::size_t calls() const { return calls_; }

 private:
  Script script_;
  std::atomic<std::size_t> calls_{0};
};

/// Normal exit with the given reported time.
inline domconf::bench::ExecResult reported_exit(double seconds) {
  domconf::bench::ExecResult r;
  r.status = domconf::bench::ExecResult::Status::Exited;
  r.code = 0;
  r.cpu_seconds = 0.0;
  r.wall_seconds = 0.0;
  r.reported_seconds = seconds;
  return r;
}

}  // namespace testsupport
