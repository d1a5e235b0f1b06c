#include <atomic>
#include <thread>

#include "doctest.h"
#include "fese/pir/bucket_server.hpp"
#include "fese/pir/pir_client.hpp"
#include "support.hpp"

using namespace fese;
using support::code_of;

namespace {

const StoreShape kShape{7, 3, 5};

Bytes pattern(std::size_t n, std::uint8_t seed) {
  Bytes b(n);
  for (std::size_t k = 0; k < n; ++k) b[k] = static_cast<std::uint8_t>(seed + 31 * k);
  return b;
}

BucketStore filled_store() {
  return BucketStore(kShape, pattern(kShape.total_bytes(), 1));
}

LoopbackChannel channel_for(BucketServer& server, Transcript* t = nullptr) {
  return LoopbackChannel([&server](const Frame& f) { return server.handle(f); }, t);
}

}  // namespace

TEST_SUITE("wire") {
  TEST_CASE("frame layout is type, big-endian length, payload") {
    Frame f{FrameType::kQueryDirect, {0, 0, 0, 9}};
    Bytes enc = encode_frame(f);
    CHECK(enc == Bytes{0x01, 0, 0, 0, 4, 0, 0, 0, 9});
    CHECK(decode_frame(enc) == f);
    FrameType t;
    CHECK(parse_frame_header(ByteView(enc).first(5), t) == 4);
    CHECK(t == FrameType::kQueryDirect);
  }

  TEST_CASE("malformed frames are rejected") {
    CHECK(code_of([] { decode_frame(Bytes{0x01, 0, 0}); }) == ErrorCode::kTransport);
    CHECK(code_of([] { decode_frame(Bytes{0x01, 0, 0, 0, 2, 7}); }) == ErrorCode::kTransport);
    CHECK(code_of([] { decode_frame(Bytes{0x7f, 0, 0, 0, 0}); }) == ErrorCode::kProtocol);
    FrameType t;
    CHECK(code_of([&] { parse_frame_header(Bytes{0x01, 0xff, 0xff, 0xff, 0xff}, t); }) ==
          ErrorCode::kProtocol);
    CHECK(!is_known_frame_type(0x00));
    CHECK(is_known_frame_type(0x18));
  }

  TEST_CASE("error frames carry the code across") {
    Frame err = make_error_frame(ErrorCode::kOverflow, "bucket 3 full");
    CHECK(err.type == FrameType::kErr);
    try {
      raise_error_frame(err);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kOverflow);
      CHECK(std::string(e.what()).find("bucket 3 full") != std::string::npos);
    }
  }

  TEST_CASE("transcripts serialize and compare byte-exactly") {
    Transcript t;
    t.record(Direction::kClientToServer, Frame{FrameType::kQueryBatch, {}});
    t.record(Direction::kServerToClient, Frame{FrameType::kRespStore, {1, 2, 3}});
    CHECK(t.total_bytes() == 5 + 8);
    CHECK(t.lengths() == std::vector<std::size_t>{5, 8});
    auto seq = t.message_sequence();
    REQUIRE(seq.size() == 2);
    CHECK(seq[1].second == FrameType::kRespStore);
    CHECK(Transcript::deserialize(t.serialize()) == t);
    Bytes bad = t.serialize();
    bad.resize(bad.size() - 1);
    CHECK(code_of([&] { Transcript::deserialize(bad); }) == ErrorCode::kFormat);
  }
}

TEST_SUITE("bucket store") {
  TEST_CASE("slots address the image row by row") {
    BucketStore s = filled_store();
    Bytes image = pattern(kShape.total_bytes(), 1);
    for (BucketIndex a = 0; a < kShape.m; ++a)
      for (std::size_t k = 0; k < kShape.l; ++k) {
        auto slot = s.slot(a, k);
        std::size_t off = (a * kShape.l + k) * kShape.slot_width;
        CHECK(Bytes(slot.begin(), slot.end()) ==
              Bytes(image.begin() + off, image.begin() + off + kShape.slot_width));
      }
    Bytes v(5, 0xaa);
    s.set_slot(6, 2, v);
    CHECK(s.image()[kShape.total_bytes() - 1] == 0xaa);
    CHECK(code_of([&] { s.set_slot(7, 0, v); }) == ErrorCode::kProtocol);
    CHECK(code_of([&] { s.set_slot(0, 3, v); }) == ErrorCode::kProtocol);
    CHECK(code_of([&] { s.set_slot(0, 0, Bytes(4)); }) == ErrorCode::kProtocol);
    CHECK(code_of([&] { s.replace_image(Bytes(3)); }) == ErrorCode::kProtocol);
  }

  TEST_CASE("serialization round trip") {
    BucketStore s = filled_store();
    ByteWriter w;
    s.serialize(w);
    ByteReader r(w.bytes());
    CHECK(BucketStore::deserialize(r) == s);
    CHECK(r.remaining() == 0);
  }
}

TEST_SUITE("slot allocator") {
  TEST_CASE("reservations are all or nothing") {
    SlotAllocator a(4, 2);
    std::vector<BucketIndex> idx = {0, 1, 1};
    CHECK(a.reserve(idx) == std::vector<std::size_t>{0, 0, 1});
    CHECK(a.fill(1) == 2);
    SlotAllocator before = a;
    std::vector<BucketIndex> again = {3, 1};
    try {
      a.reserve(again);
      FAIL("expected overflow");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kOverflow);
      CHECK(std::string(e.what()).find("bucket 1") != std::string::npos);
    }
    CHECK(a == before);
    std::vector<BucketIndex> dup = {2, 2, 2};
    CHECK(code_of([&] { a.reserve(dup); }) == ErrorCode::kOverflow);
    CHECK(a == before);
  }

  TEST_CASE("serialization round trip and corruption") {
    SlotAllocator a(5, 3);
    std::vector<BucketIndex> idx = {4, 4, 0};
    a.reserve(idx);
    Bytes enc = a.serialize();
    CHECK(SlotAllocator::deserialize(enc) == a);
    enc.back() = 9;  // fill of bucket 4 above capacity
    CHECK(code_of([&] { SlotAllocator::deserialize(enc); }) == ErrorCode::kFormat);
  }
}

TEST_SUITE("pir transports") {
  TEST_CASE("every query transport returns the requested buckets") {
    BucketStore store = filled_store();
    BucketServer server(store);
    std::vector<BucketIndex> alphas = {5, 0, 5, 2};
    for (auto t : {QueryTransport::kDirect, QueryTransport::kObliviousBatch,
                   QueryTransport::kRestricted}) {
      CAPTURE(query_transport_name(t));
      auto ch = channel_for(server);
      auto got = pir_query_many(ch, t, kShape, alphas);
      REQUIRE(got.size() == alphas.size());
      for (std::size_t k = 0; k < alphas.size(); ++k) {
        auto expect = store.bucket(alphas[k]);
        CHECK(got[k] == Bytes(expect.begin(), expect.end()));
      }
      CHECK(pir_query(ch, t, kShape, 3) == Bytes(store.bucket(3).begin(), store.bucket(3).end()));
      CHECK(parse_query_transport(query_transport_name(t)) == t);
    }
    CHECK(code_of([] { parse_query_transport("ORAM"); }) == ErrorCode::kConfig);
  }

  TEST_CASE("frame counts per transport") {
    BucketServer server(filled_store());
    std::vector<BucketIndex> alphas = {1, 2, 3};
    for (auto [t, frames] : std::vector<std::pair<QueryTransport, std::size_t>>{
             {QueryTransport::kDirect, 6},
             {QueryTransport::kObliviousBatch, 2},
             {QueryTransport::kRestricted, 2}}) {
      Transcript tr;
      auto ch = channel_for(server, &tr);
      pir_query_many(ch, t, kShape, alphas);
      CHECK(tr.entries.size() == frames);
    }
  }

  TEST_CASE("batch transcript does not depend on the indices") {
    BucketServer server(filled_store());
    Transcript a, b;
    auto ca = channel_for(server, &a);
    auto cb = channel_for(server, &b);
    std::vector<BucketIndex> x = {0, 1}, y = {6, 6};
    pir_query_many(ca, QueryTransport::kObliviousBatch, kShape, x);
    pir_query_many(cb, QueryTransport::kObliviousBatch, kShape, y);
    CHECK(a == b);
  }

  TEST_CASE("out of range index is an error") {
    BucketServer server(filled_store());
    auto ch = channel_for(server);
    CHECK(code_of([&] { pir_query(ch, QueryTransport::kDirect, kShape, 7); }) ==
          ErrorCode::kProtocol);
    // The server rejects it as well when a client skips the local check.
    ByteWriter w;
    w.u32(7);
    Frame reply = server.handle(Frame{FrameType::kQueryDirect, w.bytes()});
    CHECK(reply.type == FrameType::kErr);
  }

  TEST_CASE("direct and rewrite updates") {
    BucketServer server(filled_store());
    auto ch = channel_for(server);
    SlotWrite w{3, 1, Bytes(5, 0x42)};
    pis_update_direct(ch, w);
    auto slot = server.snapshot().slot(3, 1);
    CHECK(Bytes(slot.begin(), slot.end()) == Bytes(5, 0x42));

    std::vector<SlotWrite> writes = {{0, 0, Bytes(5, 1)}, {6, 2, Bytes(5, 2)}};
    int calls = 0;
    pis_update_rewrite(ch, kShape, writes, [&](Bytes& image) {
      ++calls;
      CHECK(image.size() == kShape.total_bytes());
      image[5] ^= 0xff;  // touch a slot nobody wrote
    });
    CHECK(calls == 1);
    BucketStore after = server.snapshot();
    CHECK(after.slot(0, 0)[0] == 1);
    CHECK(after.slot(6, 2)[4] == 2);
    CHECK(after.image()[5] == static_cast<std::uint8_t>(filled_store().image()[5] ^ 0xff));
    CHECK(after.slot(3, 1)[0] == 0x42);

    Frame bad{FrameType::kUpdateRewrite, Bytes(10)};
    CHECK(server.handle(bad).type == FrameType::kErr);
    CHECK(server.snapshot() == after);
  }

  TEST_CASE("reads proceed concurrently with updates") {
    BucketServer server(BucketStore(StoreShape{16, 4, 8}));
    std::atomic<bool> ok{true};
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t)
      threads.emplace_back([&, t] {
        auto ch = channel_for(server);
        for (int k = 0; k < 200; ++k) {
          if (t == 0) {
            SlotWrite w{static_cast<BucketIndex>(k % 16), static_cast<std::size_t>(k % 4),
                        Bytes(8, static_cast<std::uint8_t>(k))};
            pis_update_direct(ch, w);
          } else {
            auto b = pir_query(ch, QueryTransport::kDirect, server.shape(), k % 16);
            // A slot is written whole under the lock, so no reader sees a torn one.
            for (std::size_t s = 0; s < 4; ++s)
              for (std::size_t j = 1; j < 8; ++j)
                if (b[s * 8 + j] != b[s * 8]) ok = false;
          }
        }
      });
    for (auto& th : threads) th.join();
    CHECK(ok);
  }
}
