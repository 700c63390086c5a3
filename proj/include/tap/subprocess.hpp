/**
 * @file subprocess.hpp
 * @brief Black-box adapter: runs an external TAP program behind the Engine
 *        interface over a line-delimited JSON protocol on stdin/stdout.
 */
#pragma once

#include <mutex>
#include <string>

#include "tap/engine.hpp"

namespace tap {

/// How to reach an engine.
struct EngineHandle {
  enum class Kind { in_process, external };
  Kind kind = Kind::in_process;
  std::string command;     // shell command line, non-empty for external engines
  double timeout_s = 10.0; // per-request I/O deadline
  // Default: one process invocation per request. Persistent mode keeps one
  // process alive and sends one line per request.
  bool persistent = false;
};

/// Engine implementation that forwards requests to an external process.
/// In default mode every request owns its process, so concurrent calls are
/// independent; persistent mode serializes requests onto one process.
class ExternalEngine final : public Engine {
 public:
  explicit ExternalEngine(EngineHandle handle);
  ~ExternalEngine() override;

  ExternalEngine(const ExternalEngine&) = delete;
  ExternalEngine& operator=(const ExternalEngine&) = delete;

  TidalSolution analyze(const TimeSeries& series, const ConstituentSet& constituents,
                        const FitConfig& config) const override;
  TimeSeries predict(const TidalSolution& solution,
                     const std::vector<double>& times) const override;
  std::string name() const override;

 private:
  std::string roundtrip(const std::string& request_line) const;
  std::string roundtrip_once(const std::string& request_line) const;
  std::string roundtrip_persistent(const std::string& request_line) const;
  void stop_persistent() const;

  EngineHandle handle_;
  mutable std::mutex mutex_;  // persistent-mode request serialization
  mutable long child_pid_ = -1;
  mutable int child_stdin_ = -1;
  mutable int child_stdout_ = -1;
  mutable std::string read_buffer_;
};

}  // namespace tap
