#include "her2/sidecar.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sodium.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <thread>

#include "her2/error.hpp"

namespace her2 {

std::string Base64Encode(std::span<const std::uint8_t> bytes) {
  const std::size_t len =
      sodium_base64_encoded_len(bytes.size(), sodium_base64_VARIANT_ORIGINAL);
  std::string out(len, '\0');
  sodium_bin2base64(out.data(), len, bytes.data(), bytes.size(),
                    sodium_base64_VARIANT_ORIGINAL);
  out.resize(len - 1);  // drop the terminator
  return out;
}

std::vector<std::uint8_t> Base64Decode(std::string_view text) {
  std::vector<std::uint8_t> out(text.size() / 4 * 3 + 3);
  std::size_t written = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr,
                        &written, &end, sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    Fail(ErrorKind::kProtocolViolation, "malformed base64 payload");
  }
  out.resize(written);
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

std::filesystem::path MakeStderrFile() {
  std::string tmpl =
      (std::filesystem::temp_directory_path() / "her2-sidecar-XXXXXX").string();
  const int fd = mkstemp(tmpl.data());
  if (fd < 0) Fail(ErrorKind::kBackendUnavailable, "cannot create sidecar stderr file");
  close(fd);
  return tmpl;
}

}  // namespace

std::unique_ptr<SidecarHandle> SidecarHandle::Spawn(const std::string& command,
                                                    const SidecarOptions& options) {
  if (sodium_init() < 0) Fail(ErrorKind::kBackendUnavailable, "libsodium init failed");

  std::unique_ptr<SidecarHandle> handle(new SidecarHandle());
  handle->command_ = command;
  handle->options_ = options;
  handle->stderr_path_ = MakeStderrFile();

  // A socket rather than a pipe pair: one descriptor carries both directions
  // and MSG_NOSIGNAL avoids SIGPIPE when the child dies mid-write.
  int fds[2];
  if (socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    Fail(ErrorKind::kBackendUnavailable,
         "socketpair failed: " + std::string(std::strerror(errno)));
  }
  const std::string stderr_file = handle->stderr_path_.string();
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    Fail(ErrorKind::kBackendUnavailable, "fork failed: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    dup2(fds[1], STDIN_FILENO);
    dup2(fds[1], STDOUT_FILENO);
    const int err = open(stderr_file.c_str(), O_WRONLY | O_TRUNC);
    if (err >= 0) dup2(err, STDERR_FILENO);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);
  handle->fd_ = fds[0];
  handle->pid_ = pid;

  nlohmann::json hello;
  try {
    hello = nlohmann::json::parse(handle->ReadLine(options.handshake_timeout));
  } catch (const nlohmann::json::exception&) {
    handle->Unavailable("handshake is not valid JSON");
  }
  if (!hello.is_object() || hello.value("protocol", "") != kSidecarProtocol) {
    handle->Unavailable("handshake does not declare protocol her2-sidecar");
  }
  const auto version = hello.find("version");
  if (version == hello.end() || !version->is_number_integer()) {
    handle->Unavailable("handshake lacks an integer version");
  }
  handle->version_ = version->get<int>();
  if (handle->version_ != kSidecarVersion) {
    handle->Unavailable("unsupported protocol version " +
                        std::to_string(handle->version_));
  }
  const auto roles = hello.find("roles");
  if (roles == hello.end() || !roles->is_array()) {
    handle->Unavailable("handshake lacks a roles array");
  }
  for (const auto& role : *roles) {
    if (!role.is_string()) handle->Unavailable("handshake roles must be strings");
    handle->roles_.push_back(role.get<std::string>());
  }
  return handle;
}

SidecarHandle::~SidecarHandle() {
  Shutdown();
  std::error_code ec;
  if (!stderr_path_.empty()) std::filesystem::remove(stderr_path_, ec);
}

bool SidecarHandle::serves(std::string_view role) const {
  for (const auto& r : roles_) {
    if (r == role) return true;
  }
  return false;
}

void SidecarHandle::Shutdown() {
  if (fd_ >= 0) {
    close(fd_);
    fd_ = -1;
  }
  if (pid_ > 0) {
    // EOF on stdin asks the child to exit; give it a moment, then kill.
    const auto deadline = Clock::now() + std::chrono::seconds(2);
    int status = 0;
    while (waitpid(pid_, &status, WNOHANG) == 0) {
      if (Clock::now() >= deadline) {
        kill(pid_, SIGKILL);
        waitpid(pid_, &status, 0);
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    pid_ = -1;
  }
}

std::string SidecarHandle::StderrExcerpt(std::size_t max_bytes) const {
  std::ifstream in(stderr_path_, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.size() > max_bytes) text = text.substr(text.size() - max_bytes);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

void SidecarHandle::Unavailable(const std::string& what) const {
  std::string message = "sidecar '" + command_ + "': " + what;
  const std::string excerpt = StderrExcerpt();
  if (!excerpt.empty()) message += "; stderr: " + excerpt;
  Fail(ErrorKind::kBackendUnavailable, message);
}

void SidecarHandle::Broken(ErrorKind kind, const std::string& what) {
  broken_ = true;
  if (kind == ErrorKind::kBackendUnavailable) Unavailable(what);
  Fail(kind, "sidecar '" + command_ + "': " + what);
}

void SidecarHandle::SendLine(const std::string& line) {
  if (fd_ < 0) Unavailable("handle is shut down");
  std::size_t sent = 0;
  while (sent < line.size()) {
    const ssize_t n = send(fd_, line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      Broken(ErrorKind::kBackendUnavailable, "write failed: " + std::string(std::strerror(errno)));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string SidecarHandle::ReadLine(std::chrono::milliseconds timeout) {
  if (fd_ < 0) Unavailable("handle is shut down");
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    const auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (remaining.count() <= 0) Broken(ErrorKind::kBackendUnavailable, "timed out waiting for a response");
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      Broken(ErrorKind::kBackendUnavailable, "poll failed: " + std::string(std::strerror(errno)));
    }
    if (ready == 0) continue;
    char chunk[65536];
    const ssize_t n = recv(fd_, chunk, sizeof(chunk), 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      Broken(ErrorKind::kBackendUnavailable, "read failed: " + std::string(std::strerror(errno)));
    }
    if (n == 0) {
      // Let the child finish writing stderr before reporting.
      int status = 0;
      waitpid(pid_, &status, 0);
      pid_ = -1;
      Broken(ErrorKind::kBackendUnavailable, "process exited");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

nlohmann::json SidecarHandle::Call(std::string_view role, int width, int height,
                                   std::span<const std::uint8_t> rgb_pixels) {
  const std::int64_t id = next_id_++;
  nlohmann::ordered_json request{{"id", id},
                                 {"role", role},
                                 {"width", width},
                                 {"height", height},
                                 {"pixels_b64", Base64Encode(rgb_pixels)}};
  SendLine(request.dump() + "\n");

  const std::string line = ReadLine(options_.request_timeout);
  nlohmann::json response;
  try {
    response = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    Broken(ErrorKind::kProtocolViolation, "response is not valid JSON");
  }
  if (!response.is_object()) {
    Broken(ErrorKind::kProtocolViolation, "response is not an object");
  }
  const auto rid = response.find("id");
  if (rid == response.end() || !rid->is_number_integer() ||
      rid->get<std::int64_t>() != id) {
    Broken(ErrorKind::kProtocolViolation,
           "response does not echo request id " + std::to_string(id));
  }
  if (const auto err = response.find("error"); err != response.end()) {
    Unavailable("error response: " + (err->is_string() ? err->get<std::string>()
                                                       : err->dump()));
  }
  return response;
}

}  // namespace her2
