#include "doctest.h"
#include "test_util.hpp"

#include "hyperell/ensemble.hpp"
#include "hyperell/lfunctions.hpp"

#include <cmath>
#include <sstream>

using namespace hyperell;
using test_util::P;

TEST_CASE("coefficients for small D") {
  FieldOrder q(5);
  const auto table = enumerate_irreducibles(q, 5);
  CHECK(l_coefficients(q, P(q, "0,1"), table) == std::vector<std::int64_t>{1});

  const Poly D = P(q, "1,0,1");
  const auto c = l_coefficients(q, D, table);
  REQUIRE(c.size() == 2);
  CHECK(c[1] == -1);
  CHECK(c[1] == char_sum_over_Mn(q, D, 1));

  const auto L5 = completed_l(q, P(q, "1,1,0,0,0,1"), table);
  CHECK(L5.lambda == 0);
  CHECK(L5.genus == 2);
  CHECK(L5.star_coeffs.size() == 5);

  const auto L2 = completed_l(q, D, table);
  CHECK(L2.lambda == 1);
  CHECK(L2.genus == 0);
  CHECK(L2.star_coeffs == std::vector<std::int64_t>{1});
  CHECK(verify_functional_equation(q, L2));
  CHECK(verify_rh_zeros(q, L2) == RhStatus::holds);
}

TEST_CASE("coefficients agree with brute-force character sums") {
  FieldOrder q(3);
  const auto table = enumerate_irreducibles(q, 5);
  for (const auto& D : enumerate_H_n(q, 5)) {
    const auto c = l_coefficients(q, D, table);
    for (int j = 0; j < 5; ++j) CHECK(c[j] == char_sum_over_Mn(q, D, j));
  }
}

TEST_CASE("functional equation scans") {
  {
    FieldOrder q(5);
    const auto table = enumerate_irreducibles(q, 3);
    for (const auto& D : enumerate_H_n(q, 3)) CHECK(verify_functional_equation(q, completed_l(q, D, table)));
  }
  {
    FieldOrder q(3);
    const auto table = enumerate_irreducibles(q, 5);
    for (const auto& D : enumerate_H_n(q, 5)) CHECK(verify_functional_equation(q, completed_l(q, D, table)));
  }
}

TEST_CASE("Riemann hypothesis on H_5 at q=5 and a corrupted control") {
  FieldOrder q(5);
  const auto table = enumerate_irreducibles(q, 5);
  const auto ensemble = enumerate_H_n(q, 5);
  const auto rows = ensemble_l_data(q, ensemble, table, LMethod::euler_product);
  std::size_t bad = 0;
  for (const auto& L : rows) bad += verify_rh_zeros(q, L) != RhStatus::holds;
  CHECK(bad == 0);

  auto corrupted = rows.front().star_coeffs;
  corrupted[1] += 7;
  CHECK(verify_rh_zeros(q, corrupted) == RhStatus::violated);
}

TEST_CASE("the two completion routes agree") {
  FieldOrder q(5);
  const auto table = enumerate_irreducibles(q, 6);
  for (int n : {5, 6}) {
    const auto ensemble = enumerate_H_n(q, n);
    for (std::size_t i = 0; i < ensemble.size(); i += 97) {
      const auto a = completed_l(q, ensemble[i], table, LMethod::euler_product);
      const auto b = completed_l(q, ensemble[i], table, LMethod::functional_equation);
      CHECK(a.coeffs == b.coeffs);
      CHECK(a.star_coeffs == b.star_coeffs);
      CHECK(a.value_at_one == b.value_at_one);
    }
  }
}

TEST_CASE("L(1) values") {
  FieldOrder q(5);
  const auto table = enumerate_irreducibles(q, 3);
  CHECK(completed_l(q, P(q, "0,1"), table).value_at_one == 1);
  for (const auto& D : enumerate_H_n(q, 2)) CHECK(completed_l(q, D, table).value_at_one == Rational(4, 5));
  for (const auto& D : enumerate_H_n(q, 3)) {
    Rational direct = 0;
    for (int j = 0; j < 3; ++j) direct += test_util::frac(char_sum_over_Mn(q, D, j), int_pow(5, j));
    const auto v = completed_l(q, D, table).value_at_one;
    CHECK(v == direct);
    CHECK(v > 0);
  }
}

TEST_CASE("short Euler product") {
  FieldOrder q(5);
  const auto table = enumerate_irreducibles(q, 6);
  const Poly D = P(q, "2,0,1");
  CHECK(short_euler_l(q, D, 0, table) == 1);
  Rational expected = 1;
  for (const auto& Pl : table.of_degree(1)) {
    expected *= 1 / (1 - Rational(to_int(legendre_symbol_euler(q, D, Pl)), 5));
  }
  CHECK(short_euler_l(q, D, 1, table) == expected);

  // the short product approaches L(1) as y grows
  const auto ensemble = enumerate_H_n(q, 3);
  double err_short = 0, err_long = 0;
  for (std::size_t i = 0; i < ensemble.size(); i += 10) {
    const auto L1 = to_double(completed_l(q, ensemble[i], table).value_at_one);
    err_short += std::abs(to_double(short_euler_l(q, ensemble[i], 1, table)) - L1);
    err_long += std::abs(to_double(short_euler_l(q, ensemble[i], 6, table)) - L1);
  }
  CHECK(err_long < err_short);
}

TEST_CASE("class numbers are positive integers") {
  {
    FieldOrder q(5);
    const auto table = enumerate_irreducibles(q, 4);
    CHECK(class_number_odd(q, completed_l(q, P(q, "0,1"), table)) == 1);
    for (const auto& D : enumerate_H_n(q, 2)) CHECK(class_number_regulator_even(q, completed_l(q, D, table)) == 1);
    for (const auto& D : enumerate_H_n(q, 3)) CHECK(class_number_odd(q, completed_l(q, D, table)) >= 1);
    for (const auto& D : enumerate_H_n(q, 4)) CHECK(class_number_regulator_even(q, completed_l(q, D, table)) >= 1);
  }
  {
    FieldOrder q(3);
    const auto table = enumerate_irreducibles(q, 5);
    for (const auto& D : enumerate_H_n(q, 5)) CHECK(class_number_odd(q, completed_l(q, D, table)) >= 1);
    for (const auto& D : enumerate_H_n(q, 4)) CHECK(class_number_regulator_even(q, completed_l(q, D, table)) >= 1);
  }
}

TEST_CASE("divisor function and h") {
  FieldOrder q(5);
  const auto f = factor(q, P(q, "1,3,0,4,2,1"));
  CHECK(divisor_fn(1.0, f) == doctest::Approx(1.0));
  FactoredPoly cube;
  cube.factors.push_back({P(q, "0,1"), 3});
  CHECK(divisor_fn(2.0, cube) == doctest::Approx(4.0));
  CHECK(divisor_fn_exact(2, cube) == 4);
  FactoredPoly lin;
  lin.factors.push_back({P(q, "0,1"), 1});
  CHECK(divisor_fn(0.5, lin) == doctest::Approx(0.5));

  CHECK(h_fn(q, FactoredPoly{}) == 1);
  CHECK(h_fn(q, lin) == Rational(5, 6));
  FactoredPoly sq;
  sq.factors.push_back({P(q, "2,0,1"), 2});
  FactoredPoly rad;
  rad.factors.push_back({P(q, "2,0,1"), 1});
  CHECK(h_fn(q, sq) == h_fn(q, rad));
  CHECK(h_fn(q, rad) == Rational(25, 26));
}

TEST_CASE("multiplicative sieve matches direct sums") {
  FieldOrder q(5);
  const auto table = enumerate_irreducibles(q, 4);
  const MonicFactorSieve sieve(table, 4);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 30; ++i) {
    const Poly D = test_util::random_poly(q, 1 + static_cast<int>(rng() % 4), rng, true);
    const auto sums = sieve.character_sums(D);
    REQUIRE(sums.size() == 5);
    for (int m = 0; m <= 4; ++m) CHECK(sums[m] == char_sum_over_Mn(q, D, m));
  }
}

TEST_CASE("lcache round trip") {
  FieldOrder q(5);
  const auto table = enumerate_irreducibles(q, 3);
  const auto rows = ensemble_l_data(q, enumerate_H_n(q, 3), table, LMethod::euler_product);
  std::stringstream ss;
  write_lcache(ss, q, 3, rows);
  std::stringstream copy(ss.str());
  const auto back = read_lcache(ss, q, 3);
  REQUIRE(back.has_value());
  REQUIRE(back->size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK((*back)[i].D == rows[i].D);
    CHECK((*back)[i].coeffs == rows[i].coeffs);
    CHECK((*back)[i].value_at_one == rows[i].value_at_one);
  }
  CHECK_FALSE(read_lcache(copy, q, 4).has_value());
  std::stringstream bad("#hyperell-l1 lcache v0\n");
  CHECK_FALSE(read_lcache(bad, q, 3).has_value());
}
