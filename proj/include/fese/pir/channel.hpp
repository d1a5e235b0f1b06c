#pragma once

#include <functional>
#include <utility>

#include "fese/pir/transcript.hpp"
#include "fese/pir/wire.hpp"

namespace fese {

/// Request/response link to a server: every client frame gets exactly one
/// reply frame.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual Frame exchange(const Frame& request) = 0;
};

/// Sends `request` and returns the reply, rethrowing ERR replies and
/// rejecting replies of any type other than `expected` (kProtocol).
Frame call(Channel& channel, const Frame& request, FrameType expected);

/// In-process channel that hands frames to a handler, optionally recording
/// every frame in a transcript.
class LoopbackChannel final : public Channel {
 public:
  using Handler = std::function<Frame(const Frame&)>;

  explicit LoopbackChannel(Handler handler, Transcript* capture = nullptr)
      : handler_(std::move(handler)), capture_(capture) {}

  Frame exchange(const Frame& request) override;
  void set_capture(Transcript* capture) { capture_ = capture; }

 private:
  Handler handler_;
  Transcript* capture_;
};

}  // namespace fese
