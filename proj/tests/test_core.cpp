#include <doctest.h>

#include <fstream>
#include <random>

#include "scma/codebook_io.hpp"
#include "scma/core.hpp"
#include "scma/errors.hpp"
#include "support.hpp"

using namespace scma;

TEST_CASE("dimension invariants are enforced") {
  const auto dims = SystemDims::standard(6);
  CHECK(dims.resources() == 4);
  CHECK(dims.nonzeros() == 2);
  CHECK(dims.codebook_size() == 4);
  CHECK(dims.bits_per_symbol() == 2);
  CHECK(dims.multiplexed_count() == 4096);
  CHECK(dims.loading_factor() == doctest::Approx(1.5));
  CHECK(dims.vector_length() == 48);
  CHECK(dims.support(5) == std::vector<int>{1, 4});

  CHECK_THROWS_AS(SystemDims(4, 2, 3, 1, {{1, 2}}), ParameterError);         // M not 2^b
  CHECK_THROWS_AS(SystemDims(4, 4, 4, 1, {{1, 2, 3, 4}}), ParameterError);   // N = K
  CHECK_THROWS_AS(SystemDims(4, 2, 4, 2, {{1, 2}, {2, 1}}), ParameterError); // same V
  CHECK_THROWS_AS(SystemDims(4, 2, 4, 1, {{1, 5}}), ParameterError);
  CHECK_THROWS_AS(SystemDims(4, 2, 4, 1, {{2, 2}}), ParameterError);
  CHECK_THROWS_AS(SystemDims(4, 2, 4, 7, {{1, 2}, {3, 4}, {1, 3}, {2, 4}, {1, 4}, {2, 3}, {1, 2}}),
                  ParameterError);
  CHECK_THROWS_AS(SystemDims::standard(7), ParameterError);
}

TEST_CASE("users on each resource follow the standard mapping") {
  const auto dims = SystemDims::standard(6);
  for (int r = 1; r <= 4; ++r) CHECK(dims.users_on(r).size() == 3);
  const auto& on1 = dims.users_on(1);
  CHECK(on1[0].user == 1);
  CHECK(on1[1].user == 3);
  CHECK(on1[2].user == 5);
  CHECK(on1[2].row == 0);
  CHECK_THROWS_AS(dims.users_on(0), RangeError);
}

TEST_CASE("index examples") {
  const auto d6 = SystemDims::standard(6);
  CHECK(index_to_symbols(1, d6).symbols == std::vector<int>{1, 1, 1, 1, 1, 1});
  CHECK(index_to_symbols(4096, d6).symbols == std::vector<int>{4, 4, 4, 4, 4, 4});
  CHECK(index_to_symbols(2, SystemDims::standard(3)).symbols == std::vector<int>{2, 1, 1});
  CHECK(index_to_symbols(5, SystemDims::standard(3)).symbols == std::vector<int>{1, 2, 1});
  CHECK_THROWS_AS(index_to_symbols(0, d6), RangeError);
  CHECK_THROWS_AS(index_to_symbols(4097, d6), RangeError);
  const std::vector<int> bad{1, 5, 1};
  CHECK_THROWS_AS(symbols_to_index(bad, SystemDims::standard(3)), RangeError);
}

TEST_CASE("index round trip, exhaustive for J <= 3 and sampled for J = 6") {
  for (int J = 1; J <= 3; ++J) {
    const auto dims = SystemDims::standard(J);
    for (std::uint64_t k = 1; k <= dims.multiplexed_count(); ++k) {
      const auto ms = index_to_symbols(k, dims);
      REQUIRE(symbols_to_index(ms.symbols, dims) == k);
      std::uint64_t expect = 1;
      std::uint64_t stride = 1;
      for (int j = 0; j < J; ++j) {
        expect += static_cast<std::uint64_t>(ms.symbols[j] - 1) * stride;
        stride *= 4;
      }
      REQUIRE(expect == k);
    }
  }
  const auto d6 = SystemDims::standard(6);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> pick(1, 4096);
  for (int i = 0; i < 1000; ++i) {
    const auto k = pick(rng);
    REQUIRE(symbols_to_index(index_to_symbols(k, d6).symbols, d6) == k);
  }
}

TEST_CASE("natural binary map") {
  CHECK(bits_to_symbol(std::vector<int>{0, 0}) == 1);
  CHECK(bits_to_symbol(std::vector<int>{1, 0}) == 2);
  CHECK(bits_to_symbol(std::vector<int>{0, 1}) == 3);
  CHECK(bits_to_symbol(std::vector<int>{1, 1}) == 4);
  for (int m = 1; m <= 16; ++m) CHECK(bits_to_symbol(symbol_to_bits(m, 4)) == m);
  CHECK(bit_hamming(1, 4) == 2);
  CHECK(bit_hamming(2, 3) == 2);
  CHECK(bit_hamming(1, 2) == 1);
  CHECK(bit_hamming(3, 3) == 0);
}

TEST_CASE("encode: sparsity, support and the published first codeword") {
  const auto c = test::appendix_c();
  // User 1, symbol 1 of the published collection.
  const CVector x = encode(c, 1, 1);
  CHECK(x(0).real() == doctest::Approx(-0.4969).epsilon(1e-4));
  CHECK(std::abs(x(0).imag()) < 1e-4);
  CHECK(x(1).real() == doctest::Approx(0.2516).epsilon(1e-4));
  CHECK(x(1).imag() == doctest::Approx(0.8044).epsilon(1e-4));
  CHECK(x(2) == cplx(0.0, 0.0));
  CHECK(x(3) == cplx(0.0, 0.0));

  for (int j = 1; j <= 6; ++j) {
    const auto& support = c.dims().support(j);
    for (int m = 1; m <= 4; ++m) {
      const CVector v = encode(c, j, m);
      for (int r = 1; r <= 4; ++r) {
        const bool on = std::find(support.begin(), support.end(), r) != support.end();
        if (!on) CHECK(v(r - 1) == cplx(0.0, 0.0));
      }
    }
  }
  // V_5 selects rows 1 and 4.
  const CVector v5 = encode(c, 5, 3);
  CHECK(v5(1) == cplx(0.0, 0.0));
  CHECK(v5(2) == cplx(0.0, 0.0));

  const auto z = CodebookCollection::zeros(SystemDims::standard(6));
  CHECK(encode(z, 2, 3).squaredNorm() == 0.0);
  CHECK_THROWS_AS(encode(c, 7, 1), RangeError);
  CHECK_THROWS_AS(encode(c, 1, 5), RangeError);
}

TEST_CASE("superposition") {
  std::mt19937_64 rng(11);
  const auto c = test::random_collection(6, rng);
  const std::vector<int> syms{2, 4, 1, 3, 3, 2};
  CVector direct = CVector::Zero(4);
  for (int j = 1; j <= 6; ++j) direct += encode(c, j, syms[j - 1]);
  CHECK((superimpose(c, syms) - direct).norm() < 1e-14);

  const auto c1 = test::random_collection(1, rng);
  for (int m = 1; m <= 4; ++m) {
    CHECK((superimpose(c1, std::vector<int>{m}) - encode(c1, 1, m)).norm() == 0.0);
  }

  const CMatrix table = superimposed_codewords(c);
  CHECK(table.cols() == 4096);
  const auto k = symbols_to_index(syms, c.dims());
  CHECK((table.col(static_cast<Eigen::Index>(k - 1)) - direct).norm() < 1e-14);
}

TEST_CASE("energies") {
  const auto c = test::appendix_c();
  // Oracle: direct numpy sum over the JSON entries.
  CHECK(average_symbol_energy(c) == doctest::Approx(1.000004635000).epsilon(1e-11));
  CHECK(average_bit_energy(c) == doctest::Approx(1.000004635000 / 2).epsilon(1e-11));
  CHECK(average_symbol_energy(CodebookCollection::zeros(c.dims())) == 0.0);
  CHECK(average_symbol_energy(c.scaled(cplx(0.0, 2.0))) ==
        doctest::Approx(4.0 * average_symbol_energy(c)));
}

TEST_CASE("power normalization") {
  const auto b = test::appendix_b();
  const auto nb = normalize_power(b, 1.0);
  CHECK(nb.max_user_power() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(b.max_user_power() - 1.0) < 1e-3);

  // Idempotent.
  const auto nn = normalize_power(nb, 1.0);
  for (int j = 1; j <= 6; ++j) CHECK((nn.constellation(j) - nb.constellation(j)).norm() < 1e-15);

  // Powers (4P, P) -> amplitudes halved.
  const SystemDims d2 = SystemDims::standard(2);
  // (1/M) tr(C^H C) sums N = 2 rows: powers 4 and 1.
  CMatrix a = CMatrix::Constant(2, 4, cplx(std::sqrt(2.0), 0.0));
  CMatrix one = CMatrix::Constant(2, 4, cplx(0.0, std::sqrt(0.5)));
  const auto scaled = normalize_power(CodebookCollection(d2, {a, one}), 1.0);
  CHECK(scaled.user_power(1) == doctest::Approx(1.0));
  CHECK(scaled.user_power(2) == doctest::Approx(0.25));
  CHECK(std::abs(scaled.constellation(1)(0, 0) - std::sqrt(2.0) / 2) < 1e-14);
  CHECK(std::abs(scaled.constellation(2)(1, 3) - cplx(0.0, std::sqrt(0.5) / 2)) < 1e-14);

  // Equal per-user powers: E_s = P exactly.
  std::mt19937_64 rng(5);
  const auto each = normalize_each_user(test::random_collection(6, rng), 0.7);
  CHECK(average_symbol_energy(each) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(each.is_power_normalized(0.7));

  CHECK_THROWS_AS(normalize_power(CodebookCollection::zeros(d2), 1.0), DegenerateInputError);
}

TEST_CASE("codebook JSON round trip and schema errors") {
  const auto c = test::appendix_c();
  const auto back = codebook_from_json(codebook_to_json(c));
  CHECK(back.dims() == c.dims());
  for (int j = 1; j <= 6; ++j) CHECK((back.constellation(j) - c.constellation(j)).norm() == 0.0);

  auto doc = codebook_to_json(c);
  doc["M"] = 3;
  try {
    codebook_from_json(doc);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(e.path() == "/M");
    CHECK(std::string(e.what()).find("power of two") != std::string::npos);
  }
  doc = codebook_to_json(c);
  doc["constellations"][2][1] = "x";
  try {
    codebook_from_json(doc);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(e.path().rfind("/constellations/2", 0) == 0);
  }
  doc = codebook_to_json(c);
  doc.erase("mapping");
  CHECK_THROWS_AS(codebook_from_json(doc), SchemaError);
}

TEST_CASE("bundled data files have not drifted") {
  // FNV-1a 64 over the raw bytes, frozen when the files were transcribed.
  auto digest = [](const std::string& name) {
    std::ifstream in(bundled_codebook_path(name), std::ios::binary);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char ch; in.get(ch);) {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ull;
    }
    return h;
  };
  CHECK(digest("appendix-c") == 0x6a0b220ee3e6aa33ull);
  CHECK(digest("appendix-b") == 0xfd8a17f0a84c803eull);
}
