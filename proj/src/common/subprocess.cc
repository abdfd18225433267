// Copyright 2026 The Perturbkit Authors
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

#include "perturbkit/common/subprocess.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "perturbkit/common/error.h"

extern char** environ;

namespace perturbkit {
namespace {

class Pipe {
 public:
  Pipe() {
    if (pipe2(fds_, O_CLOEXEC) != 0) {
      throw IoError(std::string("pipe2 failed: ") + std::strerror(errno));
    }
  }
  ~Pipe() {
    CloseRead();
    CloseWrite();
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;

  int read_fd() const { return fds_[0]; }
  int write_fd() const { return fds_[1]; }
  void CloseRead() { Close(0); }
  void CloseWrite() { Close(1); }

 private:
  void Close(int i) {
    if (fds_[i] >= 0) {
      ::close(fds_[i]);
      fds_[i] = -1;
    }
  }
  int fds_[2] = {-1, -1};
};

std::vector<char*> CStringArray(std::vector<std::string>& items) {
  std::vector<char*> out;
  out.reserve(items.size() + 1);
  for (auto& s : items) out.push_back(s.data());
  out.push_back(nullptr);
  return out;
}

}  // namespace

ProcessOptions ShellCommand(const std::string& command) {
  ProcessOptions opts;
  opts.argv = {"/bin/sh", "-c", command};
  return opts;
}

std::string ShellQuote(const std::string& arg) {
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

ProcessResult RunProcess(const ProcessOptions& options) {
  if (options.argv.empty()) throw PreconditionError("empty argv");
  // A child that exits before draining stdin must not kill the caller.
  static const bool sigpipe_ignored = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  // Everything the child touches is prepared before fork().
  std::vector<std::string> argv_storage = options.argv;
  std::vector<char*> argv = CStringArray(argv_storage);
  std::vector<std::string> env_storage;
  std::vector<char*> envp;
  if (options.env) {
    env_storage = *options.env;
    envp = CStringArray(env_storage);
  }
  const std::string cwd = options.cwd.string();

  Pipe in, out, err;
  const pid_t pid = fork();
  if (pid < 0) throw IoError(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    setpgid(0, 0);
    dup2(in.read_fd(), STDIN_FILENO);
    dup2(out.write_fd(), STDOUT_FILENO);
    dup2(err.write_fd(), STDERR_FILENO);
    if (!cwd.empty() && chdir(cwd.c_str()) != 0) _exit(127);
    if (options.env) environ = envp.data();
    execvp(argv[0], argv.data());
    _exit(127);
  }
  setpgid(pid, pid);
  in.CloseRead();
  out.CloseWrite();
  err.CloseWrite();

  ProcessResult result;
  const auto deadline =
      std::chrono::steady_clock::now() +
      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(options.timeout_seconds.value_or(0)));

  size_t written = 0;
  if (options.stdin_data.empty()) in.CloseWrite();
  else fcntl(in.write_fd(), F_SETFL, O_NONBLOCK);

  bool out_open = true, err_open = true;
  char buf[65536];
  while (out_open || err_open) {
    std::vector<pollfd> fds;
    if (out_open) fds.push_back({out.read_fd(), POLLIN, 0});
    if (err_open) fds.push_back({err.read_fd(), POLLIN, 0});
    const bool stdin_pending = in.write_fd() >= 0;
    if (stdin_pending) fds.push_back({in.write_fd(), POLLOUT, 0});

    int wait_ms = -1;
    if (options.timeout_seconds) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        result.timed_out = true;
        break;
      }
      wait_ms = static_cast<int>(std::min<long long>(left.count(), 100));
    }
    const int ready = poll(fds.data(), fds.size(), wait_ms);
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (const auto& p : fds) {
      if (p.revents == 0) continue;
      if (p.fd == in.write_fd()) {
        const ssize_t n = ::write(p.fd, options.stdin_data.data() + written,
                                  options.stdin_data.size() - written);
        if (n > 0) written += static_cast<size_t>(n);
        if (n < 0 && errno != EAGAIN) written = options.stdin_data.size();
        if (written >= options.stdin_data.size()) in.CloseWrite();
        continue;
      }
      const ssize_t n = ::read(p.fd, buf, sizeof(buf));
      std::string& sink = p.fd == out.read_fd() ? result.stdout_data : result.stderr_data;
      if (n > 0) {
        const size_t room = options.max_output_bytes > sink.size()
                                ? options.max_output_bytes - sink.size()
                                : 0;
        sink.append(buf, std::min(room, static_cast<size_t>(n)));
      } else if (n == 0 || errno != EINTR) {
        if (p.fd == out.read_fd()) out_open = false;
        else err_open = false;
      }
    }
  }

  if (result.timed_out) kill(-pid, SIGKILL);
  in.CloseWrite();

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  // Reap anything left in the group (e.g. background children).
  if (!result.timed_out) kill(-pid, SIGKILL);
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.term_signal = WTERMSIG(status);
  }
  return result;
}

}  // namespace perturbkit
