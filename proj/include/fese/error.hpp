#pragma once

#include <stdexcept>
#include <string>

namespace fese {

enum class ErrorCode {
  kDimension,
  kParameter,
  kConfig,
  kFormat,
  kEncoding,
  kDecryption,
  kHeaderMismatch,
  kOverflow,
  kProtocol,
  kTransport,
  kIndexInconsistency,
  kCorruptShare,
};

const char* error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (notably the CLI) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace fese
