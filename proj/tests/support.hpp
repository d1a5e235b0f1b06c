#pragma once

#include <functional>

#include "doctest.h"
#include "fese/error.hpp"

namespace support {

/// Error code thrown by fn; fails the test if nothing is thrown.
inline fese::ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const fese::Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return fese::ErrorCode::kProtocol;
}

}  // namespace support
