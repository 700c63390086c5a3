#include "tap/subprocess.hpp"

#include <csignal>
#include <cstring>
#include <chrono>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "tap/errors.hpp"
#include "tap/io.hpp"

namespace tap {

namespace {

using Clock = std::chrono::steady_clock;

void ignore_sigpipe_once() {
  static const bool done = [] {
    std::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  return static_cast<int>(std::max<long long>(0, left.count()));
}

struct Pipe {
  int fds[2] = {-1, -1};
  Pipe() {
    if (::pipe(fds) != 0) throw EngineFailureError("pipe() failed");
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  void close_read() {
    if (fds[0] >= 0) ::close(fds[0]);
    fds[0] = -1;
  }
  void close_write() {
    if (fds[1] >= 0) ::close(fds[1]);
    fds[1] = -1;
  }
};

/// Returns false when the engine closed its input early (it may still have
/// produced a response); throws on timeout or unexpected I/O errors.
bool write_line_deadline(int fd, const std::string& line, Clock::time_point deadline,
                         const std::string& command) {
  std::string payload = line;
  payload.push_back('\n');
  std::size_t written = 0;
  while (written < payload.size()) {
    pollfd pfd{fd, POLLOUT, 0};
    const int ready = ::poll(&pfd, 1, remaining_ms(deadline));
    if (ready == 0) {
      throw EngineTimeoutError("engine \"" + command + "\" did not accept input before the deadline");
    }
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw EngineFailureError("poll() on engine stdin failed");
    }
    const ssize_t n = ::write(fd, payload.data() + written, payload.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EPIPE) return false;
      throw EngineFailureError("write to engine \"" + command + "\" failed (" +
                               std::strerror(errno) + ")");
    }
    written += static_cast<std::size_t>(n);
  }
  return true;
}

/// Reads one LF-terminated line; `buffer` carries surplus bytes between
/// calls in persistent mode. Returns false on clean EOF with nothing read.
bool read_line_deadline(int fd, std::string& buffer, std::string& line,
                        Clock::time_point deadline, const std::string& command) {
  for (;;) {
    const auto newline = buffer.find('\n');
    if (newline != std::string::npos) {
      line = buffer.substr(0, newline);
      buffer.erase(0, newline + 1);
      return true;
    }
    pollfd pfd{fd, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, remaining_ms(deadline));
    if (ready == 0) {
      throw EngineTimeoutError("engine \"" + command + "\" did not respond before the deadline");
    }
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw EngineFailureError("poll() on engine stdout failed");
    }
    char chunk[4096];
    const ssize_t n = ::read(fd, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw EngineFailureError("read() from engine \"" + command + "\" failed");
    }
    if (n == 0) {
      if (buffer.empty()) return false;
      line = buffer;  // tolerate a final line without LF
      buffer.clear();
      return true;
    }
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

long spawn(const std::string& command, int* stdin_fd, int* stdout_fd) {
  Pipe to_child;
  Pipe from_child;
  const pid_t pid = ::fork();
  if (pid < 0) throw EngineFailureError("fork() failed");
  if (pid == 0) {
    ::dup2(to_child.fds[0], STDIN_FILENO);
    ::dup2(from_child.fds[1], STDOUT_FILENO);
    // The protocol owns stdin/stdout; engine chatter on stderr is dropped.
    const int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
    ::close(to_child.fds[0]);
    ::close(to_child.fds[1]);
    ::close(from_child.fds[0]);
    ::close(from_child.fds[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  to_child.close_read();
  from_child.close_write();
  *stdin_fd = to_child.fds[1];
  to_child.fds[1] = -1;
  *stdout_fd = from_child.fds[0];
  from_child.fds[0] = -1;
  return pid;
}

/// Reaps the child; kills it first when `force` is set. Returns the exit
/// status, or -1 when the child died from a signal.
int reap(long pid, bool force) {
  if (force) ::kill(static_cast<pid_t>(pid), SIGKILL);
  int status = 0;
  for (;;) {
    const pid_t r = ::waitpid(static_cast<pid_t>(pid), &status, 0);
    if (r >= 0 || errno != EINTR) break;
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

}  // namespace

ExternalEngine::ExternalEngine(EngineHandle handle) : handle_(std::move(handle)) {
  if (handle_.command.empty()) {
    throw InvalidInputError("external engine: command must not be empty");
  }
  ignore_sigpipe_once();
}

ExternalEngine::~ExternalEngine() { stop_persistent(); }

std::string ExternalEngine::name() const { return "external: " + handle_.command; }

std::string ExternalEngine::roundtrip(const std::string& request_line) const {
  return handle_.persistent ? roundtrip_persistent(request_line) : roundtrip_once(request_line);
}

std::string ExternalEngine::roundtrip_once(const std::string& request_line) const {
  const auto deadline =
      Clock::now() + std::chrono::milliseconds(static_cast<long>(handle_.timeout_s * 1000.0));

  int stdin_fd = -1;
  int stdout_fd = -1;
  const long pid = spawn(handle_.command, &stdin_fd, &stdout_fd);

  std::string line;
  bool got_line = false;
  std::exception_ptr failure;
  try {
    // An engine that closes stdin early may still have answered; keep going
    // and let the read decide.
    (void)write_line_deadline(stdin_fd, request_line, deadline, handle_.command);
    ::close(stdin_fd);
    stdin_fd = -1;
    std::string buffer;
    got_line = read_line_deadline(stdout_fd, buffer, line, deadline, handle_.command);
  } catch (...) {
    failure = std::current_exception();
  }
  if (stdin_fd >= 0) ::close(stdin_fd);
  ::close(stdout_fd);

  const int exit_code = reap(pid, /*force=*/failure != nullptr);
  if (failure) std::rethrow_exception(failure);
  if (!got_line) {
    throw EngineFailureError("engine \"" + handle_.command +
                             "\" exited without a response (exit code " +
                             std::to_string(exit_code) + ")");
  }
  if (exit_code != 0) {
    throw EngineFailureError("engine \"" + handle_.command + "\" exited with code " +
                             std::to_string(exit_code));
  }
  return line;
}

std::string ExternalEngine::roundtrip_persistent(const std::string& request_line) const {
  const std::lock_guard<std::mutex> lock(mutex_);
  const auto deadline =
      Clock::now() + std::chrono::milliseconds(static_cast<long>(handle_.timeout_s * 1000.0));

  if (child_pid_ < 0) {
    int stdin_fd = -1;
    int stdout_fd = -1;
    child_pid_ = spawn(handle_.command, &stdin_fd, &stdout_fd);
    child_stdin_ = stdin_fd;
    child_stdout_ = stdout_fd;
    read_buffer_.clear();
  }

  try {
    if (!write_line_deadline(child_stdin_, request_line, deadline, handle_.command)) {
      throw EngineFailureError("engine \"" + handle_.command + "\" closed its input");
    }
    std::string line;
    if (!read_line_deadline(child_stdout_, read_buffer_, line, deadline, handle_.command)) {
      throw EngineFailureError("engine \"" + handle_.command + "\" closed its output");
    }
    return line;
  } catch (...) {
    stop_persistent();
    throw;
  }
}

void ExternalEngine::stop_persistent() const {
  if (child_pid_ < 0) return;
  if (child_stdin_ >= 0) ::close(child_stdin_);
  if (child_stdout_ >= 0) ::close(child_stdout_);
  reap(child_pid_, /*force=*/true);
  child_pid_ = -1;
  child_stdin_ = -1;
  child_stdout_ = -1;
}

TidalSolution ExternalEngine::analyze(const TimeSeries& series,
                                      const ConstituentSet& constituents,
                                      const FitConfig& config) const {
  const std::string request = io::encode_analyze_request(series, constituents,
                                                         config.include_trend);
  const std::string response = roundtrip(request);
  return io::parse_analyze_response(response, constituents);
}

TimeSeries ExternalEngine::predict(const TidalSolution& solution,
                                   const std::vector<double>& times) const {
  const std::string request = io::encode_predict_request(solution, times);
  const std::string response = roundtrip(request);
  return io::parse_predict_response(response, times);
}

}  // namespace tap
