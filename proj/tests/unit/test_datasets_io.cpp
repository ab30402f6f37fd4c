#include <doctest.h>

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>

#include "efs/datasets.hpp"
#include "efs/errors.hpp"
#include "efs/forward.hpp"
#include "efs/io.hpp"
#include "util.hpp"

using namespace efs;
using efs::test::rows;
using efs::test::temp_path;
using efs::test::vec;

namespace {

std::vector<unsigned char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void spit_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

std::uint64_t le(const std::vector<unsigned char>& b, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int k = width - 1; k >= 0; --k) v = (v << 8) | b[at + static_cast<std::size_t>(k)];
  return v;
}

double le_double(const std::vector<unsigned char>& b, std::size_t at) {
  const std::uint64_t bits = le(b, at, 8);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

TEST_CASE("mixture generator edge cases") {
  MixtureSpec one{{vec({1.5, -2.0})}, {0.0}, {1.0}};
  const auto pts = gaussian_mixture(20, one, 4);
  for (std::size_t i = 0; i < 20; ++i) CHECK(pts.points.row(i).transpose() == vec({1.5, -2.0}));

  MixtureSpec two{{vec({0, 0}), vec({5, 5})}, {1.0, 1.0}, {1.0, 0.0}};
  const auto lab = gaussian_mixture(200, two, 4);
  for (auto l : *lab.labels) CHECK(l == 0);

  CHECK_THROWS_AS(gaussian_mixture(10, MixtureSpec{}, 1), InvalidInput);
  CHECK_THROWS_AS(gaussian_mixture(10, MixtureSpec{{vec({0})}, {-1.0}, {1.0}}, 1), InvalidInput);
  CHECK_THROWS_AS(gaussian_mixture(10, MixtureSpec{{vec({0}), vec({1})}, {1.0, 1.0}, {0.6, 0.6}}, 1),
                  InvalidInput);
  CHECK_THROWS_AS(gaussian_mixture(10, MixtureSpec{{vec({0}), vec({1})}, {1.0}, {0.5, 0.5}}, 1),
                  InvalidInput);
}

TEST_CASE("default mixture component counts concentrate") {
  const auto spec = MixtureSpec::default_2d();
  REQUIRE(spec.means.size() == 4);
  for (const auto& m : spec.means) CHECK(std::abs(m[0]) == 2.0);
  const auto data = gaussian_mixture(40000, spec, 7);
  std::array<int, 4> counts{};
  for (auto l : *data.labels) counts.at(static_cast<std::size_t>(l))++;
  for (int c : counts) CHECK(std::abs(c - 10000) <= 300);
  // points scatter around their own component mean
  double sq = 0.0;
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    const auto l = static_cast<std::size_t>((*data.labels)[i]);
    sq += (data.points.row(i).transpose() - spec.means[l]).squaredNorm();
  }
  CHECK(std::sqrt(sq / (2.0 * 40000)) == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("swiss roll construction") {
  const auto clean = swiss_roll(500, 0.0, 7);
  const auto theta = swiss_roll_angles(500, 7);
  const double cap = 4.5 * std::numbers::pi / 3.0 + 1e-9;
  for (std::size_t i = 0; i < 500; ++i) {
    CHECK(theta[i] >= 1.5 * std::numbers::pi);
    CHECK(theta[i] <= 4.5 * std::numbers::pi);
    const double r = clean.points.row(i).norm();
    CHECK(r == doctest::Approx(theta[i] / 3.0).epsilon(1e-12));
    CHECK(r <= cap);
    const int quartile = std::min(3, static_cast<int>((theta[i] - 1.5 * std::numbers::pi) / (0.75 * std::numbers::pi)));
    CHECK((*clean.labels)[i] == quartile);
  }
  const auto noisy = swiss_roll(500, 0.2, 7);
  CHECK(noisy.points.dim() == 2);
  CHECK(swiss_roll(500, 0.2, 7).points == noisy.points);
  CHECK_FALSE(swiss_roll(500, 0.2, 8).points == noisy.points);
  CHECK_THROWS_AS(swiss_roll(10, -0.1, 1), InvalidInput);
}

TEST_CASE("efsb layout matches the byte specification") {
  const ParticleSet a(rows({{1.0, -2.5}, {0.1, 3.0}, {7.0, 8.0}}));
  const ParticleSet b(rows({{0.0, 0.5}, {-0.0, 1e-300}, {6.0, 5.0}}));
  const Trajectory traj({a, b}, 0.25, {1.0, 1e-3});
  const std::string path = temp_path("layout.efsb");
  io::save_trajectory(traj, path, std::vector<std::int32_t>{0, -3, 2});
  const auto bytes = slurp(path);
  REQUIRE(bytes.size() == 4 + 2 + 12 + 24 + 2 * 6 * 8 + 1 + 3 * 4);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "EFSB");
  CHECK(le(bytes, 4, 2) == 1);
  CHECK(le(bytes, 6, 4) == 3);
  CHECK(le(bytes, 10, 4) == 2);
  CHECK(le(bytes, 14, 4) == 2);
  CHECK(le_double(bytes, 18) == 0.25);
  CHECK(le_double(bytes, 26) == 1.0);
  CHECK(le_double(bytes, 34) == 1e-3);
  CHECK(le_double(bytes, 42) == 1.0);
  CHECK(le_double(bytes, 42 + 8) == -2.5);
  CHECK(le_double(bytes, 42 + 2 * 8) == 0.1);
  CHECK(le_double(bytes, 42 + 6 * 8 + 3 * 8) == 1e-300);
  CHECK(bytes[138] == 1);
  CHECK(static_cast<std::int32_t>(le(bytes, 143, 4)) == -3);

  std::optional<std::vector<std::int32_t>> labels;
  const auto back = io::load_trajectory(path, &labels);
  CHECK(back.snapshot(0) == a);
  CHECK(back.snapshot(1) == b);
  CHECK(std::signbit(back.snapshot(1).positions()(1, 0)));
  CHECK(back.gamma() == 0.25);
  CHECK(*labels == std::vector<std::int32_t>{0, -3, 2});

  io::save_trajectory(back, temp_path("layout2.efsb"), labels);
  CHECK(slurp(temp_path("layout2.efsb")) == bytes);
}

TEST_CASE("efsb rejects malformed files") {
  const ParticleSet a(rows({{1.0, 2.0}, {3.0, 4.0}}));
  const std::string path = temp_path("bad.efsb");
  save_points({a, std::nullopt}, path, PointFormat::kEfsb);
  const auto good = slurp(path);
  CHECK(good.size() == 42 + 32 + 1);
  CHECK(load_points(path, PointFormat::kEfsb).points == a);

  auto check_bad = [&](std::vector<unsigned char> bytes) {
    spit(path, bytes);
    CHECK_THROWS_AS(load_points(path, PointFormat::kEfsb), IoError);
  };
  auto magic = good;
  magic[0] = 'X';
  check_bad(magic);
  auto version = good;
  version[4] = 2;
  check_bad(version);
  check_bad(std::vector<unsigned char>(good.begin(), good.begin() + 50));
  auto trailing = good;
  trailing.push_back(0);
  check_bad(trailing);
  auto flag = good;
  flag.back() = 7;
  check_bad(flag);
  auto nan = good;
  const double q = std::numeric_limits<double>::quiet_NaN();
  std::memcpy(nan.data() + 42, &q, 8);
  check_bad(nan);
  // no label flag at all reads as unlabeled
  spit(path, std::vector<unsigned char>(good.begin(), good.end() - 1));
  CHECK(load_points(path, PointFormat::kEfsb).points == a);
  CHECK_THROWS_AS(load_points(temp_path("missing.efsb"), PointFormat::kEfsb), IoError);
}

TEST_CASE("csv round trip at 17 significant digits") {
  const auto data = gaussian_mixture(300, MixtureSpec::default_2d(), 9);
  const std::string path = temp_path("mix.csv");
  save_points(data, path, PointFormat::kCsv);
  const auto back = load_points(path, PointFormat::kCsv);
  CHECK(back.points == data.points);
  CHECK(*back.labels == *data.labels);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x0,x1,label");
  const auto bytes = slurp(path);
  CHECK(std::find(bytes.begin(), bytes.end(), '\r') == bytes.end());

  CHECK(io::format_double(0.1) == "0.10000000000000001");
  Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    const double v = std::ldexp(rng.uniform() - 0.5, static_cast<int>(rng.below(200)) - 100);
    const std::string s = io::format_double(v);
    double r = 0;
    std::from_chars(s.data(), s.data() + s.size(), r);
    CHECK(r == v);
  }
}

TEST_CASE("csv parse errors carry the line number") {
  const std::string path = temp_path("nan.csv");
  spit_text(path, "x0,x1\n1,2\n3,4\n5,nan\n");
  try {
    load_points(path, PointFormat::kCsv);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  spit_text(path, "x0,x1\n1,2\n3\n");
  CHECK_THROWS_AS(load_points(path, PointFormat::kCsv), ParseError);
  spit_text(path, "x0,x1\n1,abc\n");
  CHECK_THROWS_AS(load_points(path, PointFormat::kCsv), ParseError);
  spit_text(path, "a,b\n1,2\n");
  CHECK_THROWS_AS(load_points(path, PointFormat::kCsv), ParseError);
  spit_text(path, "");
  CHECK_THROWS_AS(load_points(path, PointFormat::kCsv), ParseError);
  CHECK_THROWS_AS(format_from_path("points.txt"), InvalidInput);
}

TEST_CASE("15-dimensional latent file") {
  const Matrix m = efs::test::random_matrix(15000, 15, 4);
  const std::string path = temp_path("latent.csv");
  save_points({ParticleSet(m), std::nullopt}, path, PointFormat::kCsv);
  const auto back = load_points(path, PointFormat::kCsv);
  CHECK(back.points.dim() == 15);
  CHECK(back.points.size() == 15000);
  CHECK_FALSE(back.labels);
  CHECK(back.points.positions() == m);
}
