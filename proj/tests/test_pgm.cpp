#include <gtest/gtest.h>

#include <sstream>

#include "roimark/pgm.hpp"
#include "test_support.hpp"

using namespace roimark;

TEST(Pgm, WriteIsBitExact) {
  GrayImage img(3, 2, std::vector<std::uint8_t>{0, 1, 2, 253, 254, 255});
  std::ostringstream out;
  pgm::write(out, img);
  EXPECT_EQ(out.str(), std::string("P5\n3 2\n255\n\x00\x01\x02\xfd\xfe\xff", 17));
}

TEST(Pgm, RoundTrip) {
  const GrayImage img = fixture::random_image(37, 23, 8);
  std::stringstream io;
  pgm::write(io, img);
  EXPECT_EQ(pgm::read(io), img);
}

TEST(Pgm, HeaderCommentsAndWhitespace) {
  std::istringstream in(std::string("P5 # comment\n# another\n2\t2\n255\nABCD"));
  const GrayImage img = pgm::read(in);
  EXPECT_EQ(img.at(0, 0), 'A');
  EXPECT_EQ(img.at(1, 1), 'D');
}

TEST(Pgm, Rejects) {
  for (const std::string& bad : {std::string("P2\n2 2\n255\n0 0 0 0"), std::string("P5\n2 2\n65535\n"),
                                std::string("P5\n2 2\n255\nABC"), std::string("P5\n2\n255\nABCD"),
                                std::string("")}) {
    std::istringstream in(bad);
    try {
      pgm::read(in);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::FormatError);
    }
  }
  EXPECT_THROW(pgm::load("/nonexistent/file.pgm"), Error);
}
