#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "scma/errors.hpp"
#include "scma/med.hpp"
#include "scma/qcqp.hpp"
#include "support.hpp"

using namespace scma;

TEST_CASE("vectorization") {
  std::mt19937_64 rng(2);
  const auto c = test::random_collection(3, rng);
  const CVector x = vectorize(c);
  CHECK(x.size() == 24);
  CHECK(SystemDims::standard(6).vector_length() == 48);
  const auto back = devectorize(x, c.dims());
  for (int j = 1; j <= 3; ++j) CHECK((back.constellation(j) - c.constellation(j)).norm() == 0.0);
  // Column-major inside each user's NM block.
  CHECK(x(vec_index(c.dims(), 2, 3, 2)) == c.constellation(2)(1, 2));
  CHECK(vec_index(c.dims(), 2, 1, 1) == 8);
  CHECK_THROWS(devectorize(CVector::Zero(23), c.dims()));
}

TEST_CASE("power matrices") {
  const auto dims = SystemDims::standard(6);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(48, 48);
  std::vector<Eigen::MatrixXd> B;
  for (int j = 1; j <= 6; ++j) {
    B.push_back(build_power_matrix(j, dims).dense());
    sum += B.back();
    CHECK(B.back().trace() == doctest::Approx(8.0));
    CHECK((B.back() * B.back() - B.back()).norm() == 0.0);
    const auto Bj = build_power_matrix(j, dims);
    for (const auto& t : Bj.upper()) CHECK(t.value == 1.0);
  }
  CHECK((sum - Eigen::MatrixXd::Identity(48, 48)).norm() == 0.0);
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      if (a != b) CHECK((B[a] * B[b]).norm() == 0.0);
    }
  }
  CHECK_THROWS_AS(build_power_matrix(0, dims), RangeError);

  std::mt19937_64 rng(9);
  const auto c = normalize_each_user(test::random_collection(6, rng), 1.3);
  const CVector x = vectorize(c);
  for (int j = 1; j <= 6; ++j) {
    CHECK(build_power_matrix(j, dims).quadratic_form(x) == doctest::Approx(4 * 1.3));
  }
}

TEST_CASE("distance matrices: entries, symmetry, block support, PSD form") {
  const auto dims = SystemDims::standard(6);
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::uint64_t> pick(1, 4096);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 200; ++rep) {
    const auto k = pick(rng);
    auto l = pick(rng);
    if (k == l) continue;
    const auto A = build_distance_matrix(k, l, dims);
    for (const auto& t : A.upper()) {
      CHECK(t.row <= t.col);
      CHECK((t.value == 1.0 || t.value == -1.0));
    }
    CHECK(A == build_distance_matrix(l, k, dims));
    CHECK(A == build_distance_matrix(k, l, dims));  // deterministic regeneration
    const Eigen::MatrixXd D = A.dense();
    CHECK((D - D.transpose()).norm() == 0.0);
    CHECK((D - build_distance_factor(k, l, dims).dense(48)).norm() == 0.0);
    CVector x(48);
    for (auto& v : x) v = cplx(g(rng), g(rng));
    CHECK(A.quadratic_form(x) >= 0.0);
  }

  // Differing only in user 4: support inside block 4.
  auto sym = index_to_symbols(777, dims).symbols;
  sym[3] = sym[3] % 4 + 1;
  const auto l = symbols_to_index(sym, dims);
  const auto A777 = build_distance_matrix(777, l, dims);
  CHECK(!A777.upper().empty());
  for (const auto& t : A777.upper()) {
    CHECK(t.row / 8 == 3);
    CHECK(t.col / 8 == 3);
  }
  CHECK_THROWS_AS(build_distance_matrix(5, 5, dims), DegenerateInputError);
}

TEST_CASE("trace against Hermitian X is real and matches the pair table") {
  const auto dims = SystemDims::standard(3);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  CMatrix Y(24, 24);
  for (auto& v : Y.reshaped()) v = cplx(g(rng), g(rng));
  const CMatrix X = Y * Y.adjoint();
  const PairTraceTable table(dims, X);
  const QcqpInstance inst(dims, 1.0);
  for (std::uint64_t i = 1; i <= inst.pair_count(); i += 37) {
    const auto [k, l] = pair_from_index(i);
    const double via_matrix = inst.distance_matrix(i).trace_product(X);
    const cplx full = (inst.distance_matrix(i).dense().cast<cplx>() * X).trace();
    CHECK(std::abs(full.imag()) < 1e-9 * std::abs(full.real()));
    CHECK(test::rel_close(via_matrix, full.real(), 1e-12));
    CHECK(test::rel_close(table(k, l), via_matrix, 1e-12));
    CHECK(test::rel_close(inst.distance_factor(i).trace_product(X), via_matrix, 1e-12));
  }
}

TEST_CASE("constraint counts and the pair bijection") {
  CHECK(constraint_count(SystemDims::standard(3)) == 2016);
  CHECK(constraint_count(SystemDims::standard(6)) == 8386560);
  CHECK(constraint_count(SystemDims(4, 2, 2, 1, {{1, 2}})) == 1);
  std::uint64_t i = 0;
  for (std::uint64_t l = 2; l <= 64; ++l) {
    for (std::uint64_t k = 1; k < l; ++k) {
      ++i;
      REQUIRE(pair_index(k, l) == i);
      REQUIRE(pair_from_index(i) == std::pair<std::uint64_t, std::uint64_t>{k, l});
    }
  }
  CHECK(pair_from_index(8386560) == std::pair<std::uint64_t, std::uint64_t>{4095, 4096});
}

TEST_CASE("J = 3 has 1062 distinct distance matrices") {
  // Count from an independent numpy construction of all 2016 A matrices.
  const auto dims = SystemDims::standard(3);
  std::set<std::vector<Triplet>> distinct;
  for (std::uint64_t i = 1; i <= 2016; ++i) {
    const auto [k, l] = pair_from_index(i);
    distinct.insert(build_distance_matrix(k, l, dims).upper());
  }
  CHECK(distinct.size() == 1062);
}

TEST_CASE("triplet dump") {
  const auto dims = SystemDims::standard(1);
  std::ostringstream os;
  write_triplets(os, build_distance_matrix(1, 2, dims));
  // Symbols 1 vs 2 of user 1: g has +1 at (m=1) and -1 at (m=2) for each row.
  CHECK(os.str() == "# dim 8\n1 1 1\n1 3 -1\n2 2 1\n2 4 -1\n3 3 1\n4 4 1\n");
}
