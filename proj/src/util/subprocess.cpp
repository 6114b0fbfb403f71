#include "mcpforge/util/subprocess.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

extern char** environ;

namespace mcpforge::util {

namespace {
void make_pipe(int fds[2]) {
  if (::pipe2(fds, O_CLOEXEC) != 0)
    throw std::runtime_error(std::string("pipe2: ") + std::strerror(errno));
}
}  // namespace

Subprocess Subprocess::spawn(const Options& options) {
  if (options.argv.empty()) throw std::runtime_error("spawn: empty argv");

  int in_pipe[2];   // parent writes -> child stdin
  int out_pipe[2];  // child stdout -> parent reads
  make_pipe(in_pipe);
  make_pipe(out_pipe);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  if (options.quiet_stderr) {
    posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null",
                                     O_WRONLY, 0);
  }

  std::vector<char*> argv;
  argv.reserve(options.argv.size() + 1);
  for (const auto& a : options.argv) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  std::vector<std::string> env_storage;
  std::vector<char*> envp;
  for (char** e = environ; e && *e; ++e) envp.push_back(*e);
  for (const auto& [key, value] : options.extra_env) {
    env_storage.push_back(key + "=" + value);
    envp.push_back(const_cast<char*>(env_storage.back().c_str()));
  }
  envp.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawn(&pid, options.argv[0].c_str(), &actions, nullptr,
                               argv.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw std::runtime_error(std::string("posix_spawn: ") + std::strerror(rc));
  }

  Subprocess proc;
  proc.pid_ = pid;
  proc.stdin_fd_ = in_pipe[1];
  proc.stdout_fd_ = out_pipe[0];
  return proc;
}

Subprocess::Subprocess(Subprocess&& other) noexcept { *this = std::move(other); }

Subprocess& Subprocess::operator=(Subprocess&& other) noexcept {
  if (this != &other) {
    terminate();
    release_fds();
    pid_ = other.pid_;
    stdin_fd_ = other.stdin_fd_;
    stdout_fd_ = other.stdout_fd_;
    reaped_ = other.reaped_;
    exit_status_ = other.exit_status_;
    other.pid_ = -1;
    other.stdin_fd_ = -1;
    other.stdout_fd_ = -1;
    other.reaped_ = true;
  }
  return *this;
}

Subprocess::~Subprocess() {
  terminate();
  release_fds();
}

void Subprocess::release_fds() {
  if (stdin_fd_ >= 0) ::close(stdin_fd_);
  if (stdout_fd_ >= 0) ::close(stdout_fd_);
  stdin_fd_ = -1;
  stdout_fd_ = -1;
}

void Subprocess::close_stdin() {
  if (stdin_fd_ >= 0) ::close(stdin_fd_);
  stdin_fd_ = -1;
}

void Subprocess::forget_fds() {
  stdin_fd_ = -1;
  stdout_fd_ = -1;
}

void Subprocess::terminate() {
  if (pid_ < 0 || reaped_) return;
  ::kill(pid_, SIGKILL);
  wait();
}

int Subprocess::wait() {
  if (pid_ < 0) return -1;
  if (reaped_) return exit_status_;
  int status = 0;
  pid_t r;
  do {
    r = ::waitpid(pid_, &status, 0);
  } while (r < 0 && errno == EINTR);
  reaped_ = true;
  if (r < 0) {
    exit_status_ = -1;
  } else if (WIFEXITED(status)) {
    exit_status_ = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    exit_status_ = -WTERMSIG(status);
  } else {
    exit_status_ = -1;
  }
  return exit_status_;
}

bool Subprocess::running() {
  if (pid_ < 0 || reaped_) return false;
  int status = 0;
  const pid_t r = ::waitpid(pid_, &status, WNOHANG);
  if (r == 0) return true;
  reaped_ = true;
  if (r > 0) {
    if (WIFEXITED(status)) exit_status_ = WEXITSTATUS(status);
    else if (WIFSIGNALED(status)) exit_status_ = -WTERMSIG(status);
  }
  return false;
}

}  // namespace mcpforge::util
