#pragma once

#include <sys/types.h>

#include <string>
#include <utility>
#include <vector>

namespace mcpforge::util {

// Child process with piped stdin/stdout. stderr is inherited unless quieted.
// The destructor kills and reaps the child if it is still running.
class Subprocess {
 public:
  struct Options {
    std::vector<std::string> argv;  // argv[0] = executable path
    std::vector<std::pair<std::string, std::string>> extra_env;
    bool quiet_stderr = false;      // redirect child stderr to /dev/null
  };

  static Subprocess spawn(const Options& options);

  Subprocess(Subprocess&& other) noexcept;
  Subprocess& operator=(Subprocess&& other) noexcept;
  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;
  ~Subprocess();

  int stdin_fd() const { return stdin_fd_; }
  int stdout_fd() const { return stdout_fd_; }
  pid_t pid() const { return pid_; }

  void close_stdin();

  // Relinquish fd ownership without closing (caller adopted the fds).
  void forget_fds();

  // SIGKILL + reap. Safe to call more than once.
  void terminate();

  // Blocks until exit; returns exit code, or -signal when killed by a signal.
  int wait();

  bool running();

 private:
  Subprocess() = default;
  void release_fds();

  pid_t pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  bool reaped_ = false;
  int exit_status_ = 0;
};

}  // namespace mcpforge::util
