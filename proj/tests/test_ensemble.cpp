#include "doctest.h"
#include "test_util.hpp"

#include "hyperell/ensemble.hpp"
#include "hyperell/random_model.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace hyperell;
using test_util::P;

TEST_CASE("ensemble sizes") {
  CHECK(ensemble_size(FieldOrder(5), 1) == 5);
  CHECK(ensemble_size(FieldOrder(5), 3) == 100);
  CHECK(ensemble_size(FieldOrder(3), 2) == 6);
  for (std::uint32_t qv : {3u, 5u, 7u}) {
    FieldOrder q(qv);
    for (int n = 1; n <= 4; ++n) {
      std::vector<Poly> brute;
      for (const auto& f : enumerate_monic(q, n)) {
        if (is_squarefree(q, f)) brute.push_back(f);
      }
      const auto H = enumerate_H_n(q, n);
      CHECK(H == brute);
      CHECK(H.size() == ensemble_size(q, n));
      if (n >= 2) CHECK(H.size() == int_pow(qv, n) - int_pow(qv, n - 1));
    }
  }
  CHECK(enumerate_H_n(FieldOrder(5), 4, 3) == enumerate_H_n(FieldOrder(5), 4, 1));
}

struct Scan {
  FieldOrder q;
  int n;
  std::vector<Poly> ensemble;
  IrreducibleTable table;
  std::vector<LData> rows;
  Scan(std::uint32_t qv, int nn, int table_deg)
      : q(qv), n(nn), ensemble(enumerate_H_n(q, n)), table(q, std::max(nn, table_deg)),
        rows(ensemble_l_data(q, ensemble, table, default_method(n))) {}
};

TEST_CASE("tail distribution") {
  Scan s(5, 3, 3);
  const double at_one = std::exp(-kEulerGamma);
  const auto tail = tail_distribution(s.q, s.rows, {0.0, at_one, 1.0, 1e6}, 1);
  REQUIRE(tail.size() == 4);
  CHECK(tail[0].phi == 1);
  CHECK(tail[3].phi == 0);
  std::uint64_t ge_one = 0;
  for (const auto& L : s.rows) ge_one += L.value_at_one >= 1;
  CHECK(tail[1].count == ge_one);
  CHECK(tail[1].phi == test_util::frac(Integer(ge_one), 100));
  CHECK(tail[2].phi == Rational(3, 20));
  for (std::size_t i = 1; i < tail.size(); ++i) CHECK(tail[i].phi <= tail[i - 1].phi);
}

TEST_CASE("moments against the model") {
  {
    Scan s(5, 4, 2);
    const auto hist = profile_histogram(character_profiles(s.q, s.ensemble, s.table, 2));
    CHECK(empirical_moment_exact(s.q, hist, 1, 0) == 1);
    const auto rec = moment_record(s.q, hist, 1, 1.0);
    REQUIRE(rec.empirical_exact.has_value());
    CHECK(rec.ratio == doctest::Approx(to_double(*rec.empirical_exact) / to_double(model_moment_exact(s.q, 1, 1))));
    CHECK(std::abs(rec.ratio - 1) < 0.05);
  }
  const auto gap = [](int n) {
    Scan s(5, n, 2);
    const auto hist = profile_histogram(character_profiles(s.q, s.ensemble, s.table, 2));
    return std::abs(moment_record(s.q, hist, 2, 2.0).ratio - 1);
  };
  CHECK(gap(6) < gap(4));
}

TEST_CASE("moment oracle: direct products over the ensemble") {
  FieldOrder q(3);
  const IrreducibleTable table(q, 3);
  for (int n = 1; n <= 3; ++n) {
    const auto H = enumerate_H_n(q, n);
    const auto hist = profile_histogram(character_profiles(q, H, table, 2));
    for (int y = 1; y <= 2; ++y) {
      for (unsigned k = 1; k <= 2; ++k) {
        Rational direct = 0;
        for (const auto& D : H) {
          Rational prod = 1;
          for (int d = 1; d <= y; ++d) {
            for (const auto& Pr : table.of_degree(d)) {
              const int chi = to_int(jacobi_symbol_by_factoring(q, Pr, D));
              prod *= rational_pow(1 / (1 - test_util::frac(chi, int_pow(3, d))), k);
            }
          }
          direct += prod;
        }
        direct /= static_cast<unsigned long>(H.size());
        CHECK(empirical_moment_exact(q, hist, y, k) == direct);
        CHECK(empirical_moment(q, hist, y, k) == doctest::Approx(to_double(direct)));
      }
    }
  }
}

TEST_CASE("square orthogonality") {
  FieldOrder q(5);
  const auto H = enumerate_H_n(q, 4);
  const auto recs = square_orthogonality_check(q, H, {Poly::one(), P(q, "0,1")});
  CHECK(recs[0].observed == 1);
  CHECK(recs[0].predicted == 1);
  CHECK(recs[1].predicted == Rational(5, 6));
  CHECK(recs[1].abs_err <= Rational(10, static_cast<unsigned long>(H.size())));
}

TEST_CASE("nonsquare cancellation") {
  FieldOrder q(5);
  const auto H = enumerate_H_n(q, 3);
  const auto recs = nonsquare_cancellation_check(q, 3, H, {P(q, "0,1"), P(q, "1,1,1")});
  for (const auto& r : recs) {
    std::int64_t brute = 0;
    for (const auto& D : H) brute += to_int(jacobi_symbol(q, r.ell, D));
    CHECK(r.sum == brute);
    CHECK(std::abs(r.sum) <= static_cast<std::int64_t>(H.size()));
  }
  CHECK(is_perfect_square(q, P(q, "1,2,1")));
  CHECK_FALSE(is_perfect_square(q, P(q, "0,1")));
  CHECK_THROWS(nonsquare_cancellation_check(q, 3, H, {P(q, "1,2,1")}));
}

TEST_CASE("truncation length and experiment") {
  CHECK(round_degree(1.5) == 1);
  CHECK(round_degree(2.5) == 2);
  CHECK(round_degree(2.51) == 3);
  CHECK(round_degree(0.2) == 1);
  CHECK(round_degree(-3) == 1);

  Scan s(5, 4, 6);
  const auto profiles = character_profiles(s.q, s.ensemble, s.table, 6);
  const auto recs = truncation_experiment(s.q, 4, s.rows, profiles, 2.0);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].N == truncation_length(s.q, 4, 2.0));
  for (const auto& r : recs) {
    CHECK(r.exceed_fraction >= 0);
    CHECK(r.exceed_fraction <= 1);
    CHECK(r.exceed_fraction == test_util::frac(Integer(r.exceed_count), static_cast<unsigned long>(s.rows.size())));
  }
}

TEST_CASE("short product from profiles matches the direct product") {
  Scan s(5, 3, 3);
  const auto profiles = character_profiles(s.q, s.ensemble, s.table, 3);
  for (std::size_t i = 0; i < s.ensemble.size(); i += 7) {
    for (int y = 0; y <= 3; ++y) {
      CHECK(short_l_from_profile(s.q, profiles[i], y) == short_euler_l(s.q, s.ensemble[i], y, s.table));
    }
  }
}

TEST_CASE("L data cache") {
  const auto dir = std::filesystem::temp_directory_path() / "hyperell_cache_test";
  std::filesystem::remove_all(dir);
  FieldOrder q(5);
  const auto H = enumerate_H_n(q, 3);
  const IrreducibleTable table(q, 3);
  const auto first = load_or_compute_l_data(q, 3, H, table, 1, dir);
  CHECK_FALSE(first.from_cache);
  const auto second = load_or_compute_l_data(q, 3, H, table, 1, dir);
  CHECK(second.from_cache);
  REQUIRE(second.rows.size() == first.rows.size());
  for (std::size_t i = 0; i < H.size(); ++i) CHECK(second.rows[i].value_at_one == first.rows[i].value_at_one);

  { std::ofstream(lcache_path(dir, q, 3)) << "#hyperell-l1 lcache v0\n"; }
  const auto third = load_or_compute_l_data(q, 3, H, table, 1, dir);
  CHECK_FALSE(third.from_cache);
  CHECK_FALSE(third.notice.empty());
  CHECK(load_or_compute_l_data(q, 3, H, table, 1, dir).from_cache);
  std::filesystem::remove_all(dir);
}
