#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "fringe/errors.hpp"
#include "fringe/field.hpp"
#include "fringe/field_io.hpp"
#include "fringe/rng.hpp"

#include "support.hpp"

using fringe::ScalarField;
using testsup::TempDir;

namespace {

// Random field whose samples are exactly float32-representable, the regime
// where PFM round trips are bit-exact.
ScalarField float_valued_field(int w, int h, std::uint64_t seed) {
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = static_cast<double>(
        static_cast<float>(20.0 * (fringe::rng::uniform_at(seed, i) - 0.5)));
  }
  return ScalarField::from_samples(w, h, std::move(v));
}

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_SUITE("field_io") {

TEST_CASE("pfm round trip is exact for float-representable samples") {
  TempDir dir("pfm");
  const ScalarField small = ScalarField::from_samples(2, 2, {1.0, -2.5, 0.25, 100.0});
  fringe::save_field(small, dir.file("small.pfm"));
  const ScalarField back = fringe::load_field(dir.file("small.pfm"));
  REQUIRE(back.width() == 2);
  REQUIRE(back.height() == 2);
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back.data()[i] == small.data()[i]);

  const ScalarField big = float_valued_field(33, 17, 99);
  fringe::save_field(big, dir.file("big.pfm"));
  const ScalarField big_back = fringe::load_field(dir.file("big.pfm"));
  for (std::size_t i = 0; i < big.size(); ++i) CHECK(big_back.data()[i] == big.data()[i]);
}

TEST_CASE("pfm load-then-save is byte-identical") {
  TempDir dir("pfmbytes");
  fringe::save_field(float_valued_field(9, 5, 123), dir.file("a.pfm"));
  const ScalarField f = fringe::load_field(dir.file("a.pfm"));
  fringe::save_field(f, dir.file("b.pfm"));
  CHECK(testsup::slurp(dir.file("a.pfm")) == testsup::slurp(dir.file("b.pfm")));
}

TEST_CASE("pfm honours scale magnitude and big-endian payloads") {
  TempDir dir("pfmendian");
  float fv = 3.5f;
  std::uint32_t bits;
  std::memcpy(&bits, &fv, 4);
  bits = __builtin_bswap32(bits);
  char payload[4];
  std::memcpy(payload, &bits, 4);
  write_bytes(dir.file("be.pfm"), std::string("Pf\n1 1\n2.0\n") + std::string(payload, 4));
  const ScalarField f = fringe::load_field(dir.file("be.pfm"));
  CHECK(f.at(0, 0) == doctest::Approx(7.0));  // positive scale: big endian, x2
}

TEST_CASE("pfm rows are stored bottom to top") {
  TempDir dir("pfmrows");
  const ScalarField f = ScalarField::from_samples(1, 2, {10.0, 20.0});
  fringe::save_field(f, dir.file("f.pfm"));
  const std::string bytes = testsup::slurp(dir.file("f.pfm"));
  float first;
  std::memcpy(&first, bytes.data() + bytes.size() - 8, 4);
  CHECK(first == 20.0f);  // file starts with the bottom image row
}

TEST_CASE("malformed pfm reports the byte offset") {
  TempDir dir("pfmbad");
  write_bytes(dir.file("trunc.pfm"), "Pf\n2 2\n-1.0\n01234567");
  CHECK_THROWS_WITH_AS(static_cast<void>(fringe::load_field(dir.file("trunc.pfm"))),
                       doctest::Contains("byte offset"), fringe::data_error);

  write_bytes(dir.file("rgb.pfm"), "PF\n1 1\n-1.0\n000000000000");
  CHECK_THROWS_AS(static_cast<void>(fringe::load_field(dir.file("rgb.pfm"))),
                  fringe::data_error);

  write_bytes(dir.file("nomagic.pfm"), "Qf\n1 1\n-1.0\n0000");
  CHECK_THROWS_AS(static_cast<void>(fringe::load_field(dir.file("nomagic.pfm"))),
                  fringe::data_error);

  write_bytes(dir.file("zeroscale.pfm"), "Pf\n1 1\n0.0\n0000");
  CHECK_THROWS_AS(static_cast<void>(fringe::load_field(dir.file("zeroscale.pfm"))),
                  fringe::data_error);
}

TEST_CASE("saving non-finite samples is rejected") {
  TempDir dir("nan");
  ScalarField f(2, 2, 0.0);
  f.at(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fringe::save_field(f, dir.file("bad.pfm")), std::invalid_argument);
  f.at(0, 1) = 1e300;  // finite but overflows float32
  CHECK_THROWS_AS(fringe::save_field(f, dir.file("bad.pfm")), fringe::data_error);
}

TEST_CASE("png black image loads as zeros and round trip stays within 1/255") {
  TempDir dir("png");
  fringe::save_field(ScalarField(6, 4, 0.0), dir.file("black.png"));
  const ScalarField black = fringe::load_field(dir.file("black.png"));
  for (std::size_t i = 0; i < black.size(); ++i) CHECK(black.data()[i] == 0.0);

  ScalarField ramp(16, 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 16; ++c) ramp.at(r, c) = (c + 16.0 * r) / 47.0;
  }
  fringe::save_field(ramp, dir.file("ramp.png"));
  const ScalarField back = fringe::load_field(dir.file("ramp.png"));
  CHECK(testsup::max_abs_diff(ramp, back) <= 1.0 / 255.0 + 1e-12);

  // Out-of-range data clamps instead of wrapping.
  fringe::save_field(ScalarField(3, 3, 7.0), dir.file("bright.png"));
  const ScalarField bright = fringe::load_field(dir.file("bright.png"));
  for (std::size_t i = 0; i < bright.size(); ++i) CHECK(bright.data()[i] == 1.0);
}

TEST_CASE("csv round trip is lossless and rejects ragged rows") {
  TempDir dir("csv");
  const ScalarField f = float_valued_field(7, 4, 5);
  fringe::save_field(f, dir.file("t.csv"));
  const ScalarField back = fringe::load_field(dir.file("t.csv"));
  REQUIRE(back.width() == 7);
  REQUIRE(back.height() == 4);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(back.data()[i] == f.data()[i]);

  write_bytes(dir.file("ragged.csv"), "1,2,3\n4,5\n");
  CHECK_THROWS_AS(static_cast<void>(fringe::load_field(dir.file("ragged.csv"))),
                  fringe::data_error);
  write_bytes(dir.file("alpha.csv"), "1,two\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(fringe::load_field(dir.file("alpha.csv"))),
                       doctest::Contains("byte offset"), fringe::data_error);
}

TEST_CASE("format dispatch follows the extension") {
  using fringe::FieldFormat;
  CHECK(fringe::format_from_extension("x.pfm") == FieldFormat::Pfm);
  CHECK(fringe::format_from_extension("x.PNG") == FieldFormat::Png);
  CHECK(fringe::format_from_extension("x.Csv") == FieldFormat::Csv);
  CHECK_THROWS_AS(static_cast<void>(fringe::format_from_extension("x.tiff")),
                  fringe::data_error);
  CHECK_THROWS_AS(static_cast<void>(fringe::format_from_extension("noext")),
                  fringe::data_error);
}

TEST_CASE("missing file raises a data error") {
  CHECK_THROWS_AS(static_cast<void>(fringe::load_field("/nonexistent/nowhere.pfm")),
                  fringe::data_error);
}

}  // TEST_SUITE
