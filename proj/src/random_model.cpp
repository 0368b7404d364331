#include "hyperell/random_model.hpp"

#include "hyperell/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyperell {

namespace {

// pi_q(d) for d = 1..y as doubles.
std::vector<double> prime_counts(std::uint64_t q, int y) {
  std::vector<double> out;
  for (int d = 1; d <= y; ++d) out.push_back(pi_q_exact(q, d).get_d());
  return out;
}

double log_local_expectation(double p, double k) {
  const double la = -std::log1p(-1.0 / p);  // ln (1 - 1/p)^-1
  const double lb = -std::log1p(1.0 / p);   // ln (1 + 1/p)^-1
  const double w0 = -std::log(p + 1.0);
  const double w1 = std::log(p / (2.0 * (p + 1.0)));
  const double t0 = w0, t1 = w1 + k * la, t2 = w1 + k * lb;
  const double m = std::max({t0, t1, t2});
  return m + std::log(std::exp(t0 - m) + std::exp(t1 - m) + std::exp(t2 - m));
}

}  // namespace

double local_expectation(double p, double k) {
  return 1.0 / (p + 1.0) + p / (2.0 * (p + 1.0)) * (std::pow(1.0 - 1.0 / p, -k) + std::pow(1.0 + 1.0 / p, -k));
}

Rational local_expectation_exact(const Integer& p, unsigned k) {
  const Rational minus(p, p - 1);  // (1 - 1/p)^-1
  const Rational plus(p, p + 1);   // (1 + 1/p)^-1
  Rational half_weight(p, 2 * (p + 1));
  half_weight.canonicalize();
  Rational r = Rational(1, p + 1) + half_weight * (rational_pow(minus, k) + rational_pow(plus, k));
  return r;
}

double log_model_moment(FieldOrder q, int y, double r) {
  const auto counts = prime_counts(q.q64(), y);
  double total = 0;
  for (int d = 1; d <= y; ++d) {
    total += counts[d - 1] * log_local_expectation(std::pow(q.q64(), d), r);
  }
  return total;
}

double model_moment(const ModelParams& params, double k) {
  if (k < 0) throw std::invalid_argument("model_moment needs k >= 0");
  const auto counts = prime_counts(params.q.q64(), params.y);
  double product = 1;
  for (int d = 1; d <= params.y; ++d) {
    product *= std::pow(local_expectation(std::pow(params.q.q64(), d), k), counts[d - 1]);
  }
  return product;
}

Rational model_moment_exact(FieldOrder q, int y, unsigned k) {
  Rational product = 1;
  for (int d = 1; d <= y; ++d) {
    const Integer p = int_pow(q.q64(), static_cast<std::uint64_t>(d));
    product *= rational_pow(local_expectation_exact(p, k), pi_q_exact(q.q64(), d).get_ui());
  }
  product.canonicalize();
  return product;
}

double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t slot) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  const std::uint64_t h = mix(mix(mix(seed) ^ sample) ^ (slot * 0xd1b54a32d192ed03ull));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double sample_value(const ModelParams& params, std::uint64_t sample_index) {
  double value = 1;
  std::uint64_t slot = 0;
  for (int d = 1; d <= params.y; ++d) {
    const double p = std::pow(params.q.q64(), d);
    const std::uint64_t count = pi_q_exact(params.q.q64(), d).get_ui();
    const double p_zero = 1.0 / (p + 1.0);
    const double p_plus = p_zero + p / (2.0 * (p + 1.0));
    for (std::uint64_t j = 0; j < count; ++j, ++slot) {
      const double u = counter_uniform(params.seed, sample_index, slot);
      if (u < p_zero) continue;
      value /= u < p_plus ? (1.0 - 1.0 / p) : (1.0 + 1.0 / p);
    }
  }
  return value;
}

std::vector<double> sample_model(const ModelParams& params, unsigned threads) {
  if (params.mc_samples < 1) throw std::invalid_argument("mc_samples must be >= 1");
  std::vector<double> out(params.mc_samples);
  parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = sample_value(params, i); });
  return out;
}

MonteCarloMoment monte_carlo_moment(const ModelParams& params, double k, unsigned threads) {
  const auto samples = sample_model(params, threads);
  MonteCarloMoment m;
  m.k = k;
  double sum = 0, sum_sq = 0;
  for (double v : samples) {
    const double x = std::pow(v, k);
    sum += x;
    sum_sq += x * x;
  }
  const double n = static_cast<double>(samples.size());
  m.mean = sum / n;
  m.stddev = n > 1 ? std::sqrt(std::max(0.0, (sum_sq - n * m.mean * m.mean) / (n - 1))) : 0.0;
  m.std_error = m.stddev / std::sqrt(n);
  m.closed_form = model_moment(params, k);
  m.within_3se = std::abs(m.mean - m.closed_form) <= 3.0 * m.std_error;
  return m;
}

TailEstimate chernoff_tail(const ModelParams& params, double tau) {
  if (!(tau > 0)) throw std::invalid_argument("chernoff_tail needs tau > 0");
  const double log_threshold = kEulerGamma + std::log(tau);
  const auto counts = prime_counts(params.q.q64(), params.y);
  double mean_log = 0, max_log = 0;
  for (int d = 1; d <= params.y; ++d) {
    const double p = std::pow(params.q.q64(), d);
    const double la = -std::log1p(-1.0 / p), lb = -std::log1p(1.0 / p);
    mean_log += counts[d - 1] * p / (2.0 * (p + 1.0)) * (la + lb);
    max_log += counts[d - 1] * la;
  }
  TailEstimate est;
  est.tau = tau;
  if (log_threshold <= mean_log) {
    est.flag = TailFlag::lower_boundary;
    est.chernoff_exponent = 0;
    est.minimizing_r = 0;
    return est;
  }
  auto objective = [&](double s) {
    const double r = std::exp(s);
    return -r * log_threshold + log_model_moment(params.q, params.y, r);
  };
  constexpr double kLo = -20.0, kHi = 25.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = kLo, b = kHi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 200 && b - a > 1e-10; ++it) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - phi * (b - a); f1 = objective(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + phi * (b - a); f2 = objective(x2);
    }
  }
  const double s = 0.5 * (a + b);
  est.minimizing_r = std::exp(s);
  est.chernoff_exponent = std::min(0.0, objective(s));
  if (log_threshold >= max_log || kHi - s < 1e-6) est.flag = TailFlag::upper_boundary;
  return est;
}

// ---- explicit constants -----------------------------------------------------------

double zeta_A2(std::uint64_t q) { return static_cast<double>(q) / static_cast<double>(q - 1); }

double log_q(std::uint64_t q, double x) { return std::log(x) / std::log(static_cast<double>(q)); }

double c3_constant() { return std::numbers::pi / 4.0 - std::log(2.0) / 2.0; }

double c_star(std::uint64_t q) {
  return std::log(static_cast<double>(q)) / (2.0 * (3.0 * std::log(2.0) - std::numbers::pi / 2.0) * zeta_A2(q));
}

double constant_C2(std::uint64_t q) {
  if (q < 3) throw std::invalid_argument("constant_C2 needs q >= 3");
  const double qd = static_cast<double>(q);
  const double inner = (qd - 1.0) * std::log(qd) / (2.0 * qd * (3.0 * std::log(2.0) - std::numbers::pi / 2.0));
  return 0.5 - c3_constant() * qd / (qd - 1.0) + log_q(q, inner);
}

C2Comparison compare_C2(std::uint64_t q) {
  C2Comparison c;
  c.q = q;
  c.computed = constant_C2(q);
  const double qd = static_cast<double>(q);
  const double inner = (qd - 1.0) * std::log(qd) / (2.0 * qd * (3.0 * std::log(2.0) - std::numbers::pi / 2.0));
  const double c3 = c3_constant();
  if (q == 17) {
    c.published = 0.04;
    c.discrepancy = c.computed < c.window_lo || c.computed > c.window_hi;
  }
  c.alternatives = {
      {"final log natural", 0.5 - c3 * qd / (qd - 1.0) + std::log(inner)},
      {"c3 without q/(q-1)", 0.5 - c3 + log_q(q, inner)},
      {"without the 1/2 term", -c3 * qd / (qd - 1.0) + log_q(q, inner)},
      {"-1/2 in place of +1/2", -0.5 - c3 * qd / (qd - 1.0) + log_q(q, inner)},
  };
  return c;
}

ThresholdValue tau_beta_n(std::uint64_t q, int n, double beta) {
  if (n < static_cast<int>(q)) throw std::invalid_argument("tau_beta_n needs n >= q");
  const double ln = log_q(q, n);
  ThresholdValue t;
  t.value = std::exp(kEulerGamma) * (ln + log_q(q, ln) + constant_C2(q) - beta);
  t.useful = t.value > 0;
  return t;
}

double tail_probability_target(std::uint64_t q, double beta) {
  return std::exp(-std::pow(static_cast<double>(q), -beta) * std::log(static_cast<double>(q)) / 2.0);
}

}  // namespace hyperell
