#include "hyperell/resonator.hpp"

#include "hyperell/characters.hpp"
#include "hyperell/parallel.hpp"
#include "hyperell/random_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hyperell {

int resonator_N(FieldOrder q, int n, double c) {
  if (n < 2) throw std::invalid_argument("resonator needs n >= 2");
  if (!(c > 0)) throw std::invalid_argument("resonator constant c must be > 0");
  const double ln = log_q(q.q64(), n);
  return round_degree(ln + log_q(q.q64(), ln) + log_q(q.q64(), c));
}

int default_M(FieldOrder q, int n) { return round_degree(3.0 * log_q(q.q64(), n)); }

double default_c(FieldOrder q) { return 0.9 * c_star(q.q64()); }

double constant_c(FieldOrder q, int n, double beta, bool refine) {
  double lc = log_q(q.q64(), c_star(q.q64())) - beta;
  if (refine) {
    const double ln = log_q(q.q64(), n);
    if (!(ln > 0)) throw std::invalid_argument("refined constant needs n >= 2");
    lc += 1.0 / std::sqrt(ln);
  }
  return std::pow(static_cast<double>(q.q64()), lc);
}

Rational resonator_r(FieldOrder q, int d, int N) {
  if (N < 1) throw std::invalid_argument("resonator length N must be >= 1");
  if (d >= N) return 0;
  const Integer qN = int_pow(q.q64(), N);
  Rational r(qN - int_pow(q.q64(), d), qN);
  r.canonicalize();
  return r;
}

Rational resonator_coeff(FieldOrder q, const FactoredPoly& f, int N) {
  Rational out = 1;
  for (const auto& pp : f.factors) {
    out *= rational_pow(resonator_r(q, pp.prime.degree(), N), pp.multiplicity);
  }
  out.canonicalize();
  return out;
}

Rational resonator_value(FieldOrder q, const Poly& D, int N, const IrreducibleTable& table) {
  if (table.max_degree() < N - 1) throw std::invalid_argument("irreducible table too small for resonator");
  Rational out = 1;
  for (int d = 1; d < N; ++d) {
    const Rational r = resonator_r(q, d, N);
    for (const auto& P : table.of_degree(d)) {
      const int chi = to_int(jacobi_symbol(q, P, D));
      if (chi != 0) out /= 1 - r * chi;
    }
  }
  out.canonicalize();
  return out;
}

Rational resonator_value(FieldOrder q, const CharacterProfile& profile, int N) {
  if (static_cast<int>(profile.plus.size()) < N - 1) throw std::invalid_argument("profile too short for resonator");
  Rational out = 1;
  for (int d = 1; d < N; ++d) {
    const Rational r = resonator_r(q, d, N);
    out /= rational_pow(1 - r, profile.plus[d - 1]) * rational_pow(1 + r, profile.minus[d - 1]);
  }
  out.canonicalize();
  return out;
}

Integer log_rd_bound(FieldOrder q, int N) {
  if (N < 1) throw std::invalid_argument("log_rd_bound needs N >= 1");
  Integer total = 0, weighted = 0;
  for (int m = 1; m <= N; ++m) {
    const Integer pm = pi_q_exact(q.q64(), m);
    total += pm;
    weighted += m * pm;
  }
  return N * total - weighted;
}

double theory_ratio_bound(FieldOrder q, int n, double c) {
  if (n < static_cast<int>(q.value())) throw std::invalid_argument("theory_ratio_bound needs n >= q");
  const double qd = static_cast<double>(q.q64());
  const double ln = log_q(q.q64(), n);
  return std::exp(kEulerGamma) * (ln + log_q(q.q64(), ln) + 0.5 - c3_constant() * qd / (qd - 1.0) + log_q(q.q64(), c));
}

LocalFactors make_local_factors(const Integer& p, const Rational& r_in) {
  Rational r = r_in;
  r.canonicalize();
  if (p < 2) throw std::invalid_argument("local factors need |P| >= 2");
  if (r < 0 || r >= 1) throw std::invalid_argument("local factors need 0 <= r < 1");
  LocalFactors lf;
  lf.P_norm = p;
  lf.r = r;
  lf.B = 1 / (1 - Rational(1, p * p));
  lf.R = 1 / (1 - r * r);
  lf.h = Rational(p, p + 1);
  lf.B.canonicalize();
  lf.R.canonicalize();
  lf.h.canonicalize();
  return lf;
}

IdentityCheck local_factor_S_identity(const LocalFactors& lf) {
  const Rational p(lf.P_norm);
  const Rational& r = lf.r;
  const Rational& B = lf.B;
  const Rational& R = lf.R;
  const Rational& h = lf.h;
  const Rational r2 = r * r, r3 = r2 * r, r4 = r2 * r2, p2 = p * p;
  IdentityCheck out;
  out.lhs = 1 + 2 * r / p * B * R * h + 2 * r3 / p * B * R * R * h + r2 * R * R * h + r2 / p2 * B * R * R * h +
            B * h / p2 + 2 * r2 / p2 * B * R * h + r4 / p2 * B * R * R * h + 2 * r2 * R * h + r4 * R * R * h;
  const Rational one_minus = 1 - r2;
  out.rhs = B * R * R * h * (1 + r2 + 2 * r / p + one_minus * one_minus * (1 - 1 / p2) / p);
  out.lhs.canonicalize();
  out.rhs.canonicalize();
  out.equal = out.lhs == out.rhs;
  return out;
}

namespace {

SeriesCheck series_check(const LocalFactors& lf, const Rational& h, const Rational& tolerance) {
  if (tolerance <= 0) throw std::invalid_argument("series tolerance must be > 0");
  const Rational p(lf.P_norm);
  const Rational x = lf.r * lf.r;
  SeriesCheck out;
  out.closed_form = (1 + (p - 2) / (p + 1) * x + x * x / (p + 1)) / ((1 - x) * (1 - x));
  out.series_exact = 1 + h * ((1 + x) / ((1 - x) * (1 - x)) - 1);
  out.closed_form.canonicalize();
  out.series_exact.canonicalize();
  out.equal = out.closed_form == out.series_exact;

  // partial sums until the geometric majorant of the remainder is below tolerance
  constexpr unsigned kMaxTerms = 100000;
  out.partial_sum = 1;
  Rational xk = 1;
  unsigned k = 0;
  while (true) {
    if (x == 0) {
      out.tail_bound = 0;
      break;
    }
    // remainder after k terms: h sum_{j>k} (2j+1) x^j <= h (2k+3) x^(k+1) / (1 - rho),
    // rho = x (2k+5)/(2k+3) bounds every later term ratio
    const Rational rho = x * Rational(2 * k + 5, 2 * k + 3);
    if (rho < 1) {
      Rational bound = h * (2 * k + 3) * xk * x / (1 - rho);
      bound.canonicalize();
      if (bound <= tolerance) {
        out.tail_bound = bound;
        break;
      }
    }
    if (k >= kMaxTerms) throw std::runtime_error("series certificate did not converge");
    ++k;
    xk *= x;
    out.partial_sum += h * (2 * k + 1) * xk;
  }
  out.partial_sum.canonicalize();
  out.terms = k;
  const Rational gap = out.closed_form - out.partial_sum;
  out.within_certificate = gap >= 0 && gap <= out.tail_bound;
  return out;
}

}  // namespace

SeriesCheck local_factor_R_identity(const LocalFactors& lf, const Rational& tolerance) {
  return series_check(lf, lf.h, tolerance);
}

SeriesCheck local_factor_R_identity_without_h(const LocalFactors& lf, const Rational& tolerance) {
  return series_check(lf, Rational(1), tolerance);
}

EulerProducts euler_E_products(FieldOrder q, int N) {
  if (N < 1) throw std::invalid_argument("euler_E_products needs N >= 1");
  EulerProducts out;
  out.N = N;
  double lnE = 0, lnE1 = 0, lnE2 = 0;
  const double qd = static_cast<double>(q.q64());
  for (int d = 1; d < N; ++d) {
    const double count = pi_q_exact(q.q64(), d).get_d();
    const double p = std::pow(qd, d);
    const double r = 1.0 - std::pow(qd, d - N);
    const double r2 = r * r;
    lnE += count * (-2.0 * std::log1p(-r2) + std::log1p(r2));
    lnE1 += count * std::log(1.0 - (1.0 - r) * (1.0 - r) / ((p + 1.0) * (1.0 + r2)) +
                             (1.0 - 1.0 / p) * (1.0 - r2) * (1.0 - r2) / (p * (1.0 + r2)));
    lnE2 += count * std::log(1.0 - 3.0 * r2 / ((p + 1.0) * (1.0 + r2)) + r2 * r2 / ((p + 1.0) * (1.0 + r2)));
  }
  out.ln_E = lnE;
  out.E = std::exp(lnE);
  out.E1 = std::exp(lnE1);
  out.E2 = std::exp(lnE2);
  out.normalized_ln_E = lnE / (std::pow(qd, N) / N);
  out.asymptotic_constant =
      (2.0 + std::numbers::pi / 2.0 - 3.0 * std::log(2.0)) * zeta_A2(q.q64()) / std::log(qd);
  return out;
}

namespace {

struct MainTerms {
  Rational with_M;
  Rational with_N;
  Rational ratio;
};

MainTerms main_terms(FieldOrder q, int N, int M) {
  MainTerms out;
  out.with_M = 1;
  out.with_N = 1;
  out.ratio = 1;
  const int top = std::max(N - 1, M);
  for (int d = 1; d <= top; ++d) {
    const unsigned long count = pi_q_exact(q.q64(), d).get_ui();
    const Integer p = int_pow(q.q64(), d);
    const LocalFactors lf = make_local_factors(p, resonator_r(q, d, N));
    const Rational x = lf.r * lf.r;
    const Rational with_e = local_factor_S_identity(lf).rhs;
    const Rational without_e = 1 + lf.h * ((1 + x) / ((1 - x) * (1 - x)) - 1);
    const Rational prime_only = 1 + lf.B * lf.h / Rational(p * p);
    Rational fM = 1;
    if (d < N) fM = d <= M ? with_e : without_e;
    else if (d <= M) fM = prime_only;
    out.with_M *= rational_pow(fM, count);
    if (d < N) {
      out.with_N *= rational_pow(with_e, count);
      const Rational pr(p);
      const Rational e1 = 1 - (1 - lf.r) * (1 - lf.r) / ((pr + 1) * (1 + x)) +
                          (1 - 1 / pr) * (1 - x) * (1 - x) / (pr * (1 + x));
      const Rational e2 = 1 - 3 * x / ((pr + 1) * (1 + x)) + x * x / ((pr + 1) * (1 + x));
      out.ratio *= rational_pow(e1 * (1 - 1 / pr) * lf.h / e2, count);
    }
  }
  out.with_M.canonicalize();
  out.with_N.canonicalize();
  out.ratio.canonicalize();
  return out;
}

}  // namespace

ResonatorRun run_resonance(FieldOrder q, int n, double c, int M, const std::vector<Poly>& ensemble,
                           const std::vector<LData>* rows, unsigned threads) {
  if (M < 1) throw std::invalid_argument("Euler product length M must be >= 1");
  if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
  if (rows && rows->size() != ensemble.size()) throw std::invalid_argument("L-data does not match ensemble");
  ResonatorRun run;
  run.q = q.q64();
  run.n = n;
  run.c = c;
  run.N = resonator_N(q, n, c);
  run.M = M;
  run.c_cap = c_star(q.q64());
  if (c >= run.c_cap) {
    run.c_warning = "c = " + std::to_string(c) + " is not below the admissible cap " + std::to_string(run.c_cap);
  }
  run.theory_bound = n >= static_cast<int>(q.value()) ? theory_ratio_bound(q, n, c)
                                                      : std::numeric_limits<double>::quiet_NaN();

  const int max_deg = std::max({M, run.N - 1, 1});
  const IrreducibleTable table(q, max_deg);
  const auto profiles = character_profiles(q, ensemble, table, max_deg, threads);

  std::vector<Rational> weight(ensemble.size()), l_short(ensemble.size()), l_smooth(ensemble.size());
  parallel_for(ensemble.size(), threads, [&](std::size_t i) {
    const Rational R = resonator_value(q, profiles[i], run.N);
    weight[i] = R * R;
    l_short[i] = short_l_from_profile(q, profiles[i], M);
    l_smooth[i] = short_l_from_profile(q, profiles[i], run.N - 1);
  });

  run.log_rd_bound = log_rd_bound(q, run.N);
  const Rational rd_cap = rational_pow(Rational(q.q64()), run.log_rd_bound.get_ui());
  run.rd_bound_holds = true;
  run.s1 = 0;
  run.s2 = 0;
  run.s1_N_smooth = 0;
  Rational sum_l = 0, s1_full = 0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    run.s1 += l_short[i] * weight[i];
    run.s2 += weight[i];
    run.s1_N_smooth += l_smooth[i] * weight[i];
    sum_l += l_short[i];
    if (rows) s1_full += (*rows)[i].value_at_one * weight[i];
    // R_D^2 <= q^(2 bound) is equivalent to R_D <= q^bound
    if (weight[i] > rd_cap * rd_cap) run.rd_bound_holds = false;
    if (i == 0 || l_short[i] > run.max_L_short) {
      run.max_L_short = l_short[i];
      run.argmax_D = ensemble[i];
    }
    if (i == 0 || l_short[i] < run.min_L_short) run.min_L_short = l_short[i];
  }
  run.s1.canonicalize();
  run.s2.canonicalize();
  run.s1_N_smooth.canonicalize();
  run.ratio = run.s1 / run.s2;
  run.ratio.canonicalize();
  run.mean_L_short = sum_l / Integer(static_cast<unsigned long>(ensemble.size()));
  run.mean_L_short.canonicalize();
  run.sandwich_holds = run.min_L_short <= run.ratio && run.ratio <= run.max_L_short;
  run.ratio_ge_mean = run.ratio >= run.mean_L_short;
  if (rows) {
    Rational full = s1_full / run.s2;
    full.canonicalize();
    run.ratio_full_L = full;
  }

  const MainTerms mt = main_terms(q, run.N, M);
  run.main_term_M = mt.with_M;
  run.main_term_N = mt.with_N;
  run.main_ratio = mt.ratio;
  run.main_term_positivity = run.N - 1 > M || mt.with_N <= mt.with_M;
  return run;
}

}  // namespace hyperell
