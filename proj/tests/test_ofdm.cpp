#include <doctest.h>

#include <numbers>
#include <random>

#include "scma/errors.hpp"
#include "scma/ofdm.hpp"
#include "support.hpp"

using namespace scma;

TEST_CASE("tap profile") {
  const auto p = tap_profile(18);
  REQUIRE(p.size() == 18);
  double energy = 0.0;
  for (double a : p) energy += a * a;
  CHECK(energy == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t l = 1; l < p.size(); ++l) CHECK(p[l] < p[l - 1]);
  CHECK(20.0 * std::log10(p.front() / p.back()) == doctest::Approx(48.0).epsilon(1e-12));
  // Equal dB steps between neighbouring taps.
  CHECK(20.0 * std::log10(p[0] / p[1]) == doctest::Approx(48.0 / 17).epsilon(1e-12));
  CHECK(tap_profile(1) == std::vector<double>{1.0});
}

TEST_CASE("channel draws have unit average gain on every subcarrier") {
  OfdmConfig cfg;
  std::mt19937_64 rng(101);
  const int draws = 100000;
  double taps = 0.0;
  Eigen::VectorXd sub = Eigen::VectorXd::Zero(4);
  for (int i = 0; i < draws; ++i) {
    const auto h = draw_channel(cfg, rng);
    taps += h.taps.squaredNorm();
    sub += h.subcarriers.cwiseAbs2();
  }
  CHECK(std::abs(taps / draws - 1.0) <= 0.01);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(sub(k) / draws - 1.0) <= 0.02);
}

TEST_CASE("independent draws are uncorrelated") {
  OfdmConfig cfg;
  std::mt19937_64 rng(5);
  const int draws = 100000;
  cplx cross = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const cplx a = draw_channel(cfg, rng).subcarriers(0);
    const cplx b = draw_channel(cfg, rng).subcarriers(0);
    cross += a * std::conj(b);
    p1 += std::norm(a);
    p2 += std::norm(b);
  }
  CHECK(std::abs(cross) / std::sqrt(p1 * p2) <= 0.01);
}

TEST_CASE("single tap gives a flat channel") {
  CVector h(1);
  h << cplx(0.3, -0.4);
  const CVector f = channel_response(h, 64);
  for (Eigen::Index i = 0; i < f.size(); ++i) CHECK(std::abs(f(i) - h(0)) < 1e-15);
}

TEST_CASE("channel response against a direct DFT sum") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  CVector h(5);
  for (auto& v : h) v = cplx(g(rng), g(rng));
  const std::vector<int> idx{1, 2, 100, 256};
  const CVector f = channel_response(h, 256, idx);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    cplx direct = 0.0;
    for (int l = 0; l < 5; ++l) direct += h(l) * std::polar(1.0, -2.0 * std::numbers::pi * (idx[i] - 1) * l / 256.0);
    CHECK(std::abs(f(static_cast<Eigen::Index>(i)) - direct) < 1e-12);
  }
  const CVector all = channel_response(h, 256);
  CHECK(std::abs(all(99) - f(2)) < 1e-15);
  CHECK_THROWS_AS(channel_response(h, 256, {0}), RangeError);
}

TEST_CASE("unitary DFT round trip and Parseval") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int n : {4, 16, 256, 100}) {
    CVector x(n);
    for (auto& v : x) v = cplx(g(rng), g(rng));
    const CVector X = unitary_dft(x);
    CHECK(X.norm() == doctest::Approx(x.norm()).epsilon(1e-12));
    CHECK((unitary_idft(X) - x).norm() < 1e-12 * x.norm());
    CHECK(std::abs(X(0) - x.sum() / std::sqrt(static_cast<double>(n))) < 1e-12);
  }
}

TEST_CASE("excluding the poorest channels") {
  std::mt19937_64 rng(13);
  std::exponential_distribution<double> e;
  std::vector<double> q(100000);
  for (auto& v : q) v = e(rng);
  const auto kept = exclude_poor_channels(q, 0.4);
  CHECK(kept.size() == 60000);
  CHECK(std::is_sorted(kept.begin(), kept.end()));
  std::vector<bool> is_kept(q.size(), false);
  for (auto i : kept) is_kept[i] = true;
  double min_kept = std::numeric_limits<double>::infinity();
  double max_dropped = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (is_kept[i]) min_kept = std::min(min_kept, q[i]);
    else max_dropped = std::max(max_dropped, q[i]);
  }
  CHECK(min_kept >= max_dropped);

  const auto all = exclude_poor_channels(q, 0.0);
  CHECK(all.size() == q.size());
  CHECK(all.back() == q.size() - 1);
  CHECK(exclude_poor_channels(std::vector<double>{3.0, 1.0, 2.0}, 0.5) == std::vector<std::size_t>{0, 2});
  CHECK_THROWS_AS(exclude_poor_channels(q, 1.0), RangeError);
  CHECK_THROWS_AS(exclude_poor_channels(q, -0.1), RangeError);
}

TEST_CASE("other-subcarrier load") {
  OfdmConfig cfg;
  std::mt19937_64 rng(17);
  const double var = 6 * 1.0 / 4;
  double sum = 0.0;
  long count = 0;
  for (int rep = 0; rep < 400; ++rep) {
    const CVector X = other_subcarrier_load(cfg, var, rng);
    REQUIRE(X.size() == 256);
    for (int s : cfg.subcarriers) CHECK(X(s - 1) == cplx(0.0, 0.0));
    sum += X.squaredNorm();
    count += 252;
  }
  CHECK(std::abs(sum / count / var - 1.0) <= 0.02);
}

TEST_CASE("time-domain chain matches the per-subcarrier model") {
  const auto c = test::appendix_c();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto chk = validate_time_domain(c, OfdmConfig{}, 0.05, seed);
    CHECK(chk.relative_difference <= 1e-9);
  }
  const auto sep = validate_time_domain(c, OfdmConfig::separated({32, 96, 160, 224}), 0.0, 4);
  CHECK(sep.relative_difference <= 1e-9);

  OfdmConfig short_cp;
  short_cp.cp_length = short_cp.taps - 2;
  CHECK_THROWS_AS(validate_time_domain(c, short_cp, 0.05, 1), ParameterError);
  const auto isi = validate_time_domain(c, short_cp, 0.0, 1, true);
  CHECK(isi.relative_difference > 1e-6);
}

TEST_CASE("configuration checks") {
  OfdmConfig cfg;
  CHECK_NOTHROW(cfg.validate(4));
  CHECK_THROWS_AS(cfg.validate(5), ParameterError);
  cfg.subcarriers = {1, 2, 3, 257};
  CHECK_THROWS_AS(cfg.validate(4), RangeError);
  cfg.subcarriers = {1, 2, 2, 3};
  CHECK_THROWS_AS(cfg.validate(4), ParameterError);
  CHECK(OfdmConfig::consecutive(4).subcarriers == std::vector<int>{127, 128, 129, 130});
}
