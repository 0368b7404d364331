#pragma once

// The random Euler product model
//   L(1, X; y) = prod_{deg P <= y} (1 - X(P)/|P|)^-1
// with independent X(P) equal to 0 with probability 1/(|P|+1) and to +1 or
// -1 each with probability |P| / (2(|P|+1)). Only degrees matter, so every
// product over primes runs over degrees with multiplicity pi_q(d).
//
// Model-side analytics are double precision; integer moments also have an
// exact rational path.

#include "hyperell/gf_poly.hpp"
#include "hyperell/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hyperell {

inline constexpr double kEulerGamma = 0.57721566490153286061;

struct ModelParams {
  FieldOrder q;
  int y = 1;
  std::uint64_t seed = 1;
  std::uint64_t mc_samples = 100000;
};

/// E_P(k) = 1/(p+1) + p/(2(p+1)) ((1 - 1/p)^-k + (1 + 1/p)^-k) for |P| = p.
double local_expectation(double p, double k);
Rational local_expectation_exact(const Integer& p, unsigned k);

/// E(L(1, X; y)^k) = prod_{d <= y} E(q^d, k)^pi_q(d).
double model_moment(const ModelParams& params, double k);
Rational model_moment_exact(FieldOrder q, int y, unsigned k);
/// log E(L(1, X; y)^r), computed stably for large r.
double log_model_moment(FieldOrder q, int y, double r);

/// Uniform double in [0, 1) from (seed, sample, slot), a SplitMix64-style
/// counter hash. Results never depend on how samples are split across workers.
double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t slot);

/// One draw of L(1, X; y) for the given sample index.
double sample_value(const ModelParams& params, std::uint64_t sample_index);
std::vector<double> sample_model(const ModelParams& params, unsigned threads = 1);

struct MonteCarloMoment {
  double k = 1;
  double mean = 0;
  double stddev = 0;
  double std_error = 0;
  double closed_form = 0;
  bool within_3se = false;
};

MonteCarloMoment monte_carlo_moment(const ModelParams& params, double k, unsigned threads = 1);

enum class TailFlag {
  interior,
  /// Threshold below the log-mean: the bound degenerates to 1 as r -> 0.
  lower_boundary,
  /// Threshold at or above the largest attainable value: r -> infinity.
  upper_boundary,
};

struct TailEstimate {
  double tau = 0;
  double chernoff_exponent = 0;  // ln of the bound, <= 0
  double minimizing_r = 0;
  TailFlag flag = TailFlag::interior;
};

/// P[L(1, X; y) >= e^gamma tau] <= min_r (e^gamma tau)^-r E(L^r), minimized by
/// golden-section search over log r. Requires tau > 0.
TailEstimate chernoff_tail(const ModelParams& params, double tau);

// ---- explicit constants ---------------------------------------------------------

double zeta_A2(std::uint64_t q);
/// ln q / (2 (3 ln 2 - pi/2) zeta_A(2)), the admissible cap for the resonator constant.
double c_star(std::uint64_t q);
/// pi/4 - ln 2 / 2
double c3_constant();
/// log base q.
double log_q(std::uint64_t q, double x);

/// 1/2 - (pi/4 - ln2/2) q/(q-1) + log_q((q-1) ln q / (2q(3 ln 2 - pi/2))).
double constant_C2(std::uint64_t q);

struct C2Comparison {
  std::uint64_t q = 0;
  double computed = 0;
  std::optional<double> published;  // only q = 17 has a quoted value
  double window_lo = 0.03;
  double window_hi = 0.05;
  bool discrepancy = false;
  /// Other readings of the same expression, for documentation only.
  std::vector<std::pair<std::string, double>> alternatives;
};

C2Comparison compare_C2(std::uint64_t q);

struct ThresholdValue {
  double value = 0;
  bool useful = true;  // false when the threshold is <= 0
};

/// e^gamma (log_q n + log_q log_q n + C2(q) - beta). Requires n >= q.
ThresholdValue tau_beta_n(std::uint64_t q, int n, double beta);

/// exp(-q^-beta ln q / 2)
double tail_probability_target(std::uint64_t q, double beta);

}  // namespace hyperell
