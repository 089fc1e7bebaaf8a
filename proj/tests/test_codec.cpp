#include <gtest/gtest.h>

#include <openssl/evp.h>

#include <random>

#include "roimark/codec.hpp"
#include "test_support.hpp"

using namespace roimark;

namespace {

// Independent reference digest.
Digest128 openssl_md5(std::span<const std::uint8_t> data) {
  Digest128 out{};
  unsigned len = 0;
  EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_md5(), nullptr);
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Rle, WorkedExample) {
  const BitString data = BitString::from_text("000001111110000000");
  const BitString packed = rle_compress(data);
  EXPECT_EQ(packed.size(), 12u);
  EXPECT_EQ(packed, BitString::from_text("101 0 110 1 111 0"));
  EXPECT_EQ(rle_decompress(packed, 18), data);
}

TEST(Rle, Empty) {
  EXPECT_TRUE(rle_compress(BitString{}).empty());
  EXPECT_TRUE(rle_decompress(BitString{}, 0).empty());
}

TEST(Rle, LongRunsSplitGreedily) {
  EXPECT_EQ(rle_compress(BitString(9, true)), BitString::from_text("111 1 010 1"));
  EXPECT_EQ(rle_compress(BitString(14, false)), BitString::from_text("111 0 111 0"));
}

TEST(Rle, CorruptStreams) {
  EXPECT_EQ(code_of([] { rle_decompress(BitString::from_text("000 1"), 3); }),
            ErrorCode::CorruptStream);
  EXPECT_EQ(code_of([] { rle_decompress(BitString::from_text("010 1 000 0"), 5); }),
            ErrorCode::CorruptStream);
  // 7 bits would overshoot 5.
  EXPECT_EQ(code_of([] { rle_decompress(BitString::from_text("111 1"), 5); }),
            ErrorCode::CorruptStream);
  // Exhausted before 10 bits.
  EXPECT_EQ(code_of([] { rle_decompress(BitString::from_text("111 1"), 10); }),
            ErrorCode::CorruptStream);
  // Partial trailing token.
  EXPECT_EQ(code_of([] { rle_decompress(BitString::from_text("011 1 01"), 5); }),
            ErrorCode::CorruptStream);
}

TEST(Rle, ExhaustiveRoundTripUpTo12Bits) {
  for (std::size_t n = 0; n <= 12; ++n) {
    for (std::uint32_t v = 0; v < (1u << n); ++v) {
      BitString d;
      d.append_uint(v, static_cast<int>(n));
      ASSERT_EQ(rle_decompress(rle_compress(d), n), d);
    }
  }
}

TEST(Rle, OutputLengthFormula) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const BitString d = fixture::random_bits(rng() % 600, rng, static_cast<unsigned>(rng() % 12));
    std::size_t tokens = 0;
    for (std::size_t i = 0; i < d.size();) {
      std::size_t run = 1;
      while (i + run < d.size() && d[i + run] == d[i]) ++run;
      tokens += (run + 6) / 7;
      i += run;
    }
    const BitString c = rle_compress(d);
    ASSERT_EQ(c.size(), 4 * tokens);
    ASSERT_EQ(rle_decompress(c, d.size()), d);
  }
}

TEST(Md5, Rfc1321Suite) {
  const std::pair<const char*, const char*> vectors[] = {
      {"", "d41d8cd98f00b204e9800998ecf8427e"},
      {"a", "0cc175b9c0f1b6a831c399e269772661"},
      {"abc", "900150983cd24fb0d6963f7d28e17f72"},
      {"message digest", "f96b697d7cb7938d525a2f31aaf161d0"},
      {"abcdefghijklmnopqrstuvwxyz", "c3fcd3d76192e4007dfb496cca67e13b"},
      {"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789",
       "d174ab98d277d9f5a5611c2c9f419d9f"},
      {"12345678901234567890123456789012345678901234567890123456789012345678901234567890",
       "57edf4a22be3c955ac49da2e2107b67a"},
  };
  for (const auto& [in, hex] : vectors) EXPECT_EQ(to_hex(md5(in)), hex) << in;
}

TEST(Md5, AgreesWithOpensslAcrossLengthsAndChunking) {
  std::mt19937_64 rng(5);
  for (std::size_t n = 0; n < 300; ++n) {
    std::vector<std::uint8_t> data(n);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng());
    ASSERT_EQ(md5(data), openssl_md5(data)) << n;
    // Feed in irregular chunks.
    Md5 h;
    std::size_t pos = 0;
    while (pos < n) {
      const std::size_t take = std::min<std::size_t>(n - pos, 1 + rng() % 70);
      h.update(std::span(data).subspan(pos, take));
      pos += take;
    }
    ASSERT_EQ(h.finish(), openssl_md5(data));
  }
}

TEST(Keystream, FirstBlockIsDigestOfKeyAndZeroCounter) {
  EXPECT_EQ(to_hex(keystream("k1", 128).to_bytes()), "38876d0a4405e11adf1a792d4cc37530");
  EXPECT_EQ(to_hex(keystream("k1", 256).to_bytes()),
            "38876d0a4405e11adf1a792d4cc37530abd1e3b67ce9b03f0f4fffbd327e1e08");
}

TEST(Keystream, MatchesOpensslCounterConstruction) {
  const std::string key = "a longer secret key";
  const BitString ks = keystream(key, 1000);
  BitString expect;
  for (std::uint32_t c = 0; expect.size() < 1000; ++c) {
    std::vector<std::uint8_t> msg(key.begin(), key.end());
    for (int s = 24; s >= 0; s -= 8) msg.push_back(static_cast<std::uint8_t>(c >> s));
    expect.append_bytes(openssl_md5(msg));
  }
  EXPECT_EQ(ks, expect.slice(0, 1000));
}

TEST(Keystream, PrefixConsistentAndEdgeCases) {
  EXPECT_TRUE(keystream("k", 0).empty());
  const BitString full = keystream("k", 777);
  for (std::size_t m : {0u, 1u, 127u, 128u, 129u, 500u, 777u}) {
    EXPECT_EQ(keystream("k", m), full.slice(0, m));
  }
  EXPECT_EQ(code_of([] { keystream("", 8); }), ErrorCode::EmptyKey);
}

TEST(XorCrypt, InvolutionAndLength) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const BitString d = fixture::random_bits(rng() % 10001, rng);
    const std::string key = fixture::ascii_text(1 + rng() % 12, rng());
    const BitString e = xor_crypt(d, key);
    ASSERT_EQ(e.size(), d.size());
    ASSERT_EQ(xor_crypt(e, key), d);
  }
  EXPECT_TRUE(xor_crypt(BitString{}, "k").empty());
  EXPECT_EQ(code_of([] { xor_crypt(BitString(4), ""); }), ErrorCode::EmptyKey);
}

TEST(XorCrypt, ZeroKeystreamBitsLeaveDataBitsUnchanged) {
  const BitString d = BitString::from_text("1100101011110000110010101111000011");
  const BitString ks = keystream("k1", d.size());
  const BitString e = xor_crypt(d, "k1");
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(e[i], ks[i] ? !d[i] : d[i]);
  }
}

TEST(Header, PackMatchesFieldOracle) {
  const HeaderPayload h{1, 28, 28, 200, 192, 42752, 512};
  const BitString bits = pack_header(h);
  ASSERT_EQ(bits.size(), kHeaderBits);
  EXPECT_EQ(bits.to_text(),
            "00000001"
            "0000000000011100"
            "0000000000011100"
            "0000000011001000"
            "0000000011000000"
            "00000000000000001010011100000000"
            "0000001000000000");
  EXPECT_EQ(unpack_header(bits), h);
}

TEST(Header, RandomRoundTrip) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 500; ++i) {
    HeaderPayload h;
    h.roi_x = rng() & 0xFFFF;
    h.roi_y = rng() & 0xFFFF;
    h.roi_w = rng() & 0xFFFF;
    h.roi_h = rng() & 0xFFFF;
    h.payload_len_bits = rng() & 0xFFFFFFFF;
    h.epr_len_bytes = rng() & 0xFFFF;
    ASSERT_EQ(unpack_header(pack_header(h)), h);
  }
}

TEST(Header, Errors) {
  EXPECT_EQ(code_of([] { unpack_header(BitString(120)); }), ErrorCode::BadVersion);
  EXPECT_EQ(code_of([] { unpack_header(BitString(119)); }), ErrorCode::HeaderInvalid);
  HeaderPayload h;
  h.roi_w = 65536;
  EXPECT_EQ(code_of([&] { pack_header(h); }), ErrorCode::FieldOverflow);
  h.roi_w = 0;
  h.payload_len_bits = 1ull << 32;
  EXPECT_EQ(code_of([&] { pack_header(h); }), ErrorCode::FieldOverflow);
}

TEST(BitString, BytesAreMsbFirst) {
  const std::uint8_t bytes[] = {0xA5, 0x01};
  const BitString b = BitString::from_bytes(bytes);
  EXPECT_EQ(b.to_text(), "1010010100000001");
  EXPECT_EQ(b.to_bytes(), std::vector<std::uint8_t>({0xA5, 0x01}));
  EXPECT_EQ(b.read_uint(4, 8), 0x50u);
}
