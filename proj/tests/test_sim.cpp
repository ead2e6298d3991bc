#include <doctest.h>

#include <random>
#include <sstream>

#include "scma/errors.hpp"
#include "scma/sim.hpp"
#include "support.hpp"

using namespace scma;

namespace {

SimulationConfig small_config(Scenario scenario, DetectorKind detector, std::vector<double> grid,
                              std::uint64_t trials) {
  SimulationConfig cfg;
  cfg.scenario = scenario;
  cfg.detector = detector;
  cfg.ebn0_db = std::move(grid);
  cfg.stop.min_errors = 0;
  cfg.stop.max_trials = trials;
  cfg.chunk_size = 1024;
  cfg.threads = 1;
  return cfg;
}

bool same_points(const ErrorCurve& a, const ErrorCurve& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const auto& p = a.points[i];
    const auto& q = b.points[i];
    if (p.trials != q.trials || p.errors_sym != q.errors_sym || p.errors_bit != q.errors_bit ||
        p.ser_stderr != q.ser_stderr) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("noise calibration") {
  std::mt19937_64 rng(3);
  const auto c = normalize_each_user(test::random_collection(6, rng), 1.0);
  for (double db : {-3.0, 0.0, 7.5, 20.0}) {
    CHECK(noise_variance(c, db) == doctest::Approx(1.0 / (2.0 * std::pow(10.0, db / 10))).epsilon(1e-12));
  }
  CHECK(noise_variance(c.scaled(cplx(2.0, 0.0)), 0.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("names") {
  CHECK(parse_scenario("dl") == Scenario::downlink_consecutive);
  CHECK(parse_scenario("dl-sep") == Scenario::downlink_separated);
  CHECK(parse_scenario("ul") == Scenario::uplink_consecutive);
  CHECK(parse_scenario(to_string(Scenario::awgn)) == Scenario::awgn);
  CHECK(parse_detector("map") == DetectorKind::joint_map);
  CHECK(parse_detector(to_string(DetectorKind::marginal_map)) == DetectorKind::marginal_map);
  CHECK_THROWS_AS(parse_scenario("mimo"), ParameterError);
  CHECK_THROWS_AS(parse_detector("ml"), ParameterError);
}

TEST_CASE("configuration validation") {
  const auto dims = SystemDims::standard(6);
  auto cfg = small_config(Scenario::awgn, DetectorKind::mpa, {0.0}, 10);
  CHECK_NOTHROW(cfg.validate(dims));
  cfg.ebn0_db.clear();
  CHECK_THROWS_AS(cfg.validate(dims), ParameterError);
  cfg = small_config(Scenario::awgn, DetectorKind::mpa, {0.0}, 0);
  CHECK_THROWS_AS(cfg.validate(dims), ParameterError);
  cfg = small_config(Scenario::downlink_consecutive, DetectorKind::mpa, {0.0}, 10);
  cfg.exclusion = 1.0;
  CHECK_THROWS(cfg.validate(dims));
  cfg = small_config(Scenario::awgn, DetectorKind::mpa, {0.0}, 10);
  cfg.chunk_size = 0;
  CHECK_THROWS_AS(cfg.validate(dims), ParameterError);
}

TEST_CASE("runs are reproducible and independent of the thread count") {
  const auto c = test::appendix_c();
  for (auto scenario : {Scenario::awgn, Scenario::downlink_consecutive, Scenario::uplink_consecutive}) {
    auto cfg = small_config(scenario, DetectorKind::mpa, {4.0, 8.0}, 5000);
    const auto a = simulate(c, cfg);
    const auto b = simulate(c, cfg);
    cfg.threads = 3;
    const auto t = simulate(c, cfg);
    CHECK(same_points(a, b));
    CHECK(same_points(a, t));
    CHECK(a.points[0].trials == 5000);
    cfg.seed = 2;
    CHECK_FALSE(same_points(a, simulate(c, cfg)));
  }
}

TEST_CASE("error-event stop rule") {
  const auto c = test::appendix_c();
  auto cfg = small_config(Scenario::awgn, DetectorKind::mpa, {2.0}, 1'000'000);
  cfg.stop.min_errors = 300;
  const auto bits = simulate(c, cfg).points[0];
  CHECK(bits.errors_bit >= 300);
  CHECK(bits.trials < 1'000'000);
  cfg.stop.count_bit_errors = false;
  const auto syms = simulate(c, cfg).points[0];
  CHECK(syms.errors_sym >= 300);
  CHECK(bits.ser == doctest::Approx(static_cast<double>(bits.errors_sym) / (6.0 * bits.trials)));
  CHECK(bits.ber == doctest::Approx(static_cast<double>(bits.errors_bit) / (12.0 * bits.trials)));
}

TEST_CASE("high SNR is error free and curves decrease") {
  const auto c = test::appendix_b();
  const auto hi = simulate(c, small_config(Scenario::awgn, DetectorKind::mpa, {40.0}, 20000));
  CHECK(hi.points[0].ser <= 1e-4);
  const auto curve = simulate(c, small_config(Scenario::awgn, DetectorKind::mpa, {0.0, 4.0, 8.0}, 20000));
  CHECK(curve.points[0].ser > curve.points[1].ser);
  CHECK(curve.points[1].ser > curve.points[2].ser);
  for (const auto& p : curve.points) {
    CHECK(p.ber <= p.ser);
    CHECK(p.ser_stderr > 0.0);
  }
}

TEST_CASE("AWGN joint MAP agrees with a direct Monte Carlo loop") {
  const auto c = test::appendix_c();
  const double db = 4.0;
  const std::uint64_t n = 20000;
  const auto sim = simulate(c, small_config(Scenario::awgn, DetectorKind::joint_map, {db}, n)).points[0];

  // Straightforward loop with the free functions and its own generator.
  const double n0 = noise_variance(c, db);
  std::mt19937_64 rng(999);
  std::uniform_int_distribution<int> sym(1, 4);
  std::normal_distribution<double> noise(0.0, std::sqrt(n0 / 2));
  const std::vector<cplx> ones(4, 1.0);
  std::uint64_t errors = 0;
  for (std::uint64_t t = 0; t < n; ++t) {
    std::vector<int> s(6);
    for (auto& v : s) v = sym(rng);
    CVector r = superimpose(c, s);
    for (auto& v : r) v += cplx(noise(rng), noise(rng));
    const auto d = joint_map(std::vector<cplx>(r.begin(), r.end()), c, ones, n0);
    for (int j = 0; j < 6; ++j) errors += d.symbols[j] != s[j];
  }
  const double direct = static_cast<double>(errors) / (6.0 * n);
  // Both estimates carry block-correlated noise; 5 combined standard errors.
  const double sigma = std::sqrt(2.0) * sim.ser_stderr;
  CHECK(std::abs(sim.ser - direct) <= 5.0 * sigma);
}

TEST_CASE("discarding poor channels lowers the faded error rate") {
  const auto c = test::appendix_c();
  auto cfg = small_config(Scenario::downlink_consecutive, DetectorKind::mpa, {10.0}, 20000);
  const auto all = simulate(c, cfg).points[0];
  cfg.exclusion = 0.4;
  const auto kept = simulate(c, cfg).points[0];
  CHECK(kept.ser < all.ser);
  CHECK(kept.trials >= 11000);
}

TEST_CASE("CSV round trip and schema errors") {
  const auto c = test::appendix_c();
  const auto curve = simulate(c, small_config(Scenario::awgn, DetectorKind::mpa, {0.0, 3.0}, 2000));
  std::stringstream ss;
  write_csv(ss, curve);
  CHECK(ss.str().rfind("#", 0) == 0);
  const auto back = read_csv(ss);
  REQUIRE(back.points.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.points[i].ebn0_db == curve.points[i].ebn0_db);
    CHECK(back.points[i].trials == curve.points[i].trials);
    CHECK(back.points[i].errors_bit == curve.points[i].errors_bit);
    CHECK(back.points[i].ser == doctest::Approx(curve.points[i].ser).epsilon(1e-9));
  }
  CHECK(back.metadata == curve.metadata);

  std::istringstream bad_header("ebn0,ser\n1,2\n");
  CHECK_THROWS_AS(read_csv(bad_header), SchemaError);
  std::istringstream bad_row("ebn0_db,ser,ber,ser_stderr,ber_stderr,trials,errors_sym,errors_bit\n1,x,2,,,,,\n");
  CHECK_THROWS_AS(read_csv(bad_row), SchemaError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_csv(empty), SchemaError);
}
