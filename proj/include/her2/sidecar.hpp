#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "her2/error.hpp"
#include "json.hpp"

namespace her2 {

inline constexpr std::string_view kSidecarProtocol = "her2-sidecar";
inline constexpr int kSidecarVersion = 1;

std::string Base64Encode(std::span<const std::uint8_t> bytes);
// Throws kProtocolViolation on malformed input.
std::vector<std::uint8_t> Base64Decode(std::string_view text);

struct SidecarOptions {
  std::chrono::milliseconds handshake_timeout{10'000};
  std::chrono::milliseconds request_timeout{60'000};
};

// A spawned inference process speaking newline-delimited JSON over its
// stdin/stdout. One request is in flight at a time; callers sharing a handle
// across threads must serialize access.
class SidecarHandle {
 public:
  // Runs `command` through /bin/sh and waits for the handshake line. Throws
  // kBackendUnavailable on spawn failure, timeout, or an unsupported
  // protocol/version.
  static std::unique_ptr<SidecarHandle> Spawn(const std::string& command,
                                              const SidecarOptions& options = {});

  ~SidecarHandle();
  SidecarHandle(const SidecarHandle&) = delete;
  SidecarHandle& operator=(const SidecarHandle&) = delete;

  int version() const noexcept { return version_; }
  const std::vector<std::string>& roles() const noexcept { return roles_; }
  bool serves(std::string_view role) const;
  // False once the stream is out of sync (transport failure, timeout or a
  // malformed response). Error responses leave the handle healthy.
  bool healthy() const noexcept { return fd_ >= 0 && !broken_; }

  // Sends one request and returns the matching response object. Throws
  // kBackendUnavailable for transport failures and error responses, and
  // kProtocolViolation for malformed or mismatched responses.
  nlohmann::json Call(std::string_view role, int width, int height,
                      std::span<const std::uint8_t> rgb_pixels);

  // Closes the pipe and reaps the child. Safe to call repeatedly.
  void Shutdown();

  // Tail of whatever the child wrote to stderr so far.
  std::string StderrExcerpt(std::size_t max_bytes = 512) const;

 private:
  SidecarHandle() = default;

  void SendLine(const std::string& line);
  std::string ReadLine(std::chrono::milliseconds timeout);
  [[noreturn]] void Unavailable(const std::string& what) const;
  [[noreturn]] void Broken(ErrorKind kind, const std::string& what);

  std::string command_;
  SidecarOptions options_;
  int fd_ = -1;
  int pid_ = -1;
  std::filesystem::path stderr_path_;
  std::string buffer_;
  std::int64_t next_id_ = 1;
  int version_ = 0;
  std::vector<std::string> roles_;
  bool broken_ = false;
};

}  // namespace her2
