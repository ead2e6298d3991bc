#include <doctest.h>

#include <bit>
#include <random>

#include "scma/errors.hpp"
#include "scma/med.hpp"
#include "scma/qcqp.hpp"
#include "support.hpp"

using namespace scma;

TEST_CASE("published collections: MED golden values") {
  // Frozen from an independent numpy scan of all 8,386,560 pairs.
  const auto b = med(test::appendix_b());
  CHECK(b.d_min == doctest::Approx(1.170528496022).epsilon(1e-11));
  CHECK(b.d_min_sq == doctest::Approx(1.37013696).epsilon(1e-11));
  CHECK(b.normalized_d_min == doctest::Approx(1.170522562463).epsilon(1e-11));
  CHECK(b.pair_count == 8386560);
  CHECK(b.argmin_pairs.size() == 32);
  CHECK(b.argmin_pairs.front() == std::pair<std::uint64_t, std::uint64_t>{1163, 2577});
  CHECK(b.argmin_pairs[1] == std::pair<std::uint64_t, std::uint64_t>{1164, 2578});
  CHECK(std::abs(b.d_min - 1.17) <= 0.01);

  const auto c = med(test::appendix_c());
  CHECK(c.d_min == doctest::Approx(1.297161790217).epsilon(1e-11));
  CHECK(c.normalized_d_min == doctest::Approx(1.297158784055).epsilon(1e-11));
  CHECK(c.argmin_pairs.size() == 64);
  CHECK(c.argmin_pairs.front() == std::pair<std::uint64_t, std::uint64_t>{1, 3379});
  CHECK(c.argmin_pairs[2] == std::pair<std::uint64_t, std::uint64_t>{5, 3383});
  CHECK(std::abs(c.d_min - 1.30) <= 0.01);
  CHECK(std::abs(c.d_min_sq - 1.30 * 1.30) <= 0.03);
}

TEST_CASE("argmin pairs are sorted and attain the minimum") {
  const auto coll = test::appendix_c();
  const auto s = med(coll);
  for (std::size_t i = 0; i < s.argmin_pairs.size(); ++i) {
    const auto [k, l] = s.argmin_pairs[i];
    CHECK(k < l);
    if (i > 0) CHECK(s.argmin_pairs[i - 1] < s.argmin_pairs[i]);
    CHECK(test::rel_close(pair_distance_sq(coll, k, l), s.d_min_sq, 1e-12));
  }
}

TEST_CASE("antipodal single-user toy") {
  const SystemDims dims(4, 2, 2, 1, {{1, 2}});
  CMatrix C(2, 2);
  C << 1.0, -1.0, 0.0, 0.0;
  const auto s = med(CodebookCollection(dims, {C}));
  CHECK(s.d_min == doctest::Approx(2.0));
  CHECK(s.pair_count == 1);
}

TEST_CASE("pair distances: identity, symmetry, range") {
  std::mt19937_64 rng(21);
  const auto c = test::random_collection(6, rng);
  std::uniform_int_distribution<std::uint64_t> pick(1, 4096);
  for (int i = 0; i < 100; ++i) {
    const auto k = pick(rng);
    const auto l = pick(rng);
    CHECK(pair_distance_sq(c, k, k) == 0.0);
    CHECK(pair_distance_sq(c, k, l) == pair_distance_sq(c, l, k));
  }
  CHECK_THROWS_AS(pair_distance_sq(c, 0, 1), RangeError);
  CHECK_THROWS_AS(pair_distance_sq(c, 1, 4097), RangeError);
}

TEST_CASE("distance agrees with the quadratic form of A_{k,l}") {
  std::mt19937_64 rng(8);
  int draws = 0;
  for (int J : {3, 6}) {
    for (int rep = 0; rep < 120; ++rep) {
      const auto c = test::random_collection(J, rng);
      std::uniform_int_distribution<std::uint64_t> pick(1, c.dims().multiplexed_count());
      std::uint64_t k = pick(rng);
      std::uint64_t l = pick(rng);
      if (k == l) l = k % c.dims().multiplexed_count() + 1;
      const double direct = pair_distance_sq(c, k, l);
      const double quad = build_distance_matrix(k, l, c.dims()).quadratic_form(vectorize(c));
      REQUIRE(test::rel_close(direct, quad, 1e-10));
      ++draws;
    }
  }
  CHECK(draws >= 200);
}

TEST_CASE("scale covariance of the MED") {
  std::mt19937_64 rng(4);
  const auto c = test::random_collection(3, rng);
  const auto s = med(c);
  for (cplx a : {cplx(2.5, 0.0), cplx(0.0, -0.3), cplx(1.0, 1.0)}) {
    const auto t = med(c.scaled(a));
    CHECK(t.d_min == doctest::Approx(std::abs(a) * s.d_min).epsilon(1e-12));
    CHECK(t.normalized_d_min == doctest::Approx(s.normalized_d_min).epsilon(1e-12));
    CHECK(t.argmin_pairs == s.argmin_pairs);
  }
  // Sampled at J = 6 with the published collection.
  const auto pc = test::appendix_c();
  const auto base = med(pc);
  const auto scaled = med(pc.scaled(cplx(0.0, 3.0)));
  CHECK(scaled.d_min == doctest::Approx(3.0 * base.d_min).epsilon(1e-12));
  CHECK(scaled.argmin_pairs == base.argmin_pairs);
}

TEST_CASE("hamming distances") {
  const auto d6 = SystemDims::standard(6);
  CHECK(symbol_hamming(1, 4096, d6) == 6);
  CHECK(bit_hamming_index(1, 4096, d6) == 12);
  CHECK(symbol_hamming(7, 7, d6) == 0);
  // Symbols 1 (00) and 4 (11) for user 1.
  CHECK(bit_hamming_index(1, 4, d6) == 2);
  CHECK(bit_hamming_index(2, 3, d6) == 2);

  const auto d2 = SystemDims::standard(2);
  const HammingMatrices H(d2);
  long sum_s = 0;
  long brute = 0;
  for (std::uint64_t k = 1; k <= 16; ++k) {
    CHECK(H.symbol(k, k) == 0);
    CHECK(H.bit(k, k) == 0);
    for (std::uint64_t l = 1; l <= 16; ++l) {
      sum_s += H.symbol(k, l);
      const auto a = index_to_symbols(k, d2).symbols;
      const auto b = index_to_symbols(l, d2).symbols;
      int ds = 0;
      int db = 0;
      for (int j = 0; j < 2; ++j) {
        ds += a[j] != b[j];
        db += std::popcount(static_cast<unsigned>((a[j] - 1) ^ (b[j] - 1)));
      }
      brute += ds;
      CHECK(H.symbol(k, l) == ds);
      CHECK(H.bit(k, l) == db);
      CHECK(H.symbol(k, l) == H.symbol(l, k));
      CHECK(H.bit(k, l) <= 2 * H.symbol(k, l));
    }
  }
  CHECK(sum_s == brute);
  CHECK(sum_s == 384);  // 2 users x 256 pairs x 3/4 differing
}

TEST_CASE("capacity guards") {
  const SystemDims big(4, 2, 16, 6, {{1, 2}, {3, 4}, {1, 3}, {2, 4}, {1, 4}, {2, 3}});
  const auto z = CodebookCollection::zeros(big);
  CHECK_THROWS_AS(med(z), CapacityError);
  CHECK_THROWS_AS(HammingMatrices{big}, CapacityError);
}
