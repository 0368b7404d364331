#pragma once

// Long resonator: r_P = 1 - |P|/q^N for deg P < N and 0 otherwise, extended
// completely multiplicatively, and R_D = prod_{deg P < N} (1 - r_P chi_D(P))^-1.

#include "hyperell/ensemble.hpp"
#include "hyperell/gf_poly.hpp"
#include "hyperell/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hyperell {

/// round(log_q n + log_q log_q n + log_q c), ties down, at least 1. Needs n >= 2.
int resonator_N(FieldOrder q, int n, double c);
/// round(3 log_q n), at least 1.
int default_M(FieldOrder q, int n);
/// 0.9 * c_star(q).
double default_c(FieldOrder q);
/// log_q c = log_q c_star - beta (+ 1/sqrt(log_q n) when refined).
double constant_c(FieldOrder q, int n, double beta, bool refine);

/// r_P for a prime of degree d; zero when d >= N.
Rational resonator_r(FieldOrder q, int d, int N);
Rational resonator_coeff(FieldOrder q, const FactoredPoly& f, int N);

/// Exact R_D through jacobi_symbol. `table` must cover degree N-1.
Rational resonator_value(FieldOrder q, const Poly& D, int N, const IrreducibleTable& table);
/// Same from a character profile covering degree N-1.
Rational resonator_value(FieldOrder q, const CharacterProfile& profile, int N);

/// N * Pi_q(N) - sum_{m <= N} m pi_q(m), with Pi_q(N) = sum_{m <= N} pi_q(m).
Integer log_rd_bound(FieldOrder q, int N);

/// e^gamma (log n + log_2 n + 1/2 - c_3 q/(q-1) + log c), base-q logs. Needs n >= q.
double theory_ratio_bound(FieldOrder q, int n, double c);

struct LocalFactors {
  Integer P_norm;
  Rational r;
  Rational B;  // (1 - |P|^-2)^-1
  Rational R;  // (1 - r^2)^-1
  Rational h;  // |P| / (|P| + 1)
};

/// Throws std::invalid_argument unless |P| >= 2 and 0 <= r < 1.
LocalFactors make_local_factors(const Integer& p, const Rational& r);

struct IdentityCheck {
  Rational lhs;
  Rational rhs;
  bool equal = false;
};

/// Ten-term expansion against B R^2 h (1 + r^2 + 2r/p + (1-r^2)^2 (1 - p^-2) / p).
IdentityCheck local_factor_S_identity(const LocalFactors& lf);

struct SeriesCheck {
  Rational closed_form;   // (1-r^2)^-2 (1 + (p-2)/(p+1) r^2 + r^4/(p+1))
  Rational series_exact;  // 1 + h sum_{k>=1} (2k+1) r^(2k), summed in closed form
  Rational partial_sum;   // the first `terms` summands
  Rational tail_bound;    // certified majorant of the remainder
  unsigned terms = 0;
  bool equal = false;                 // closed_form == series_exact
  bool within_certificate = false;    // 0 <= closed_form - partial_sum <= tail_bound
};

/// `tolerance` is the requested bound on the series tail.
SeriesCheck local_factor_R_identity(const LocalFactors& lf, const Rational& tolerance);
/// Same with h replaced by 1; used as a negative control.
SeriesCheck local_factor_R_identity_without_h(const LocalFactors& lf, const Rational& tolerance);

struct EulerProducts {
  int N = 1;
  double E = 1;
  double E1 = 1;
  double E2 = 1;
  double ln_E = 0;
  double normalized_ln_E = 0;     // ln E / (q^N / N)
  double asymptotic_constant = 0; // (2 + pi/2 - 3 ln 2) zeta_A(2) / ln q
};

EulerProducts euler_E_products(FieldOrder q, int N);

struct ResonatorRun {
  std::uint64_t q = 0;
  int n = 0;
  double c = 0;
  int N = 1;
  int M = 1;
  Rational s1;
  Rational s2;
  Rational ratio;
  Poly argmax_D;
  Rational max_L_short;
  Rational min_L_short;
  Rational mean_L_short;
  bool sandwich_holds = false;
  bool ratio_ge_mean = false;
  // log_q R_D <= bound for every D
  Integer log_rd_bound;
  bool rd_bound_holds = false;
  // c above the admissible cap gives a warning, not a failure
  double c_cap = 0;
  std::optional<std::string> c_warning;
  double theory_bound = 0;  // NaN when n < q
  // main-term Euler products with e restricted to degree <= M and to degree < N
  Rational main_term_M;
  Rational main_term_N;
  bool main_term_positivity = false;  // main_term_N <= main_term_M when N-1 <= M
  Rational main_ratio;                // E1 prod (1 - 1/|P|) / (E2 prod h^-1)
  // exact S_1 with L(1, chi_D; N-1) in place of L(1, chi_D; M); reported only
  Rational s1_N_smooth;
  // full L(1, chi_D) in place of the short product; reported only
  std::optional<Rational> ratio_full_L;
};

/// Exact scan of H_n. `rows`, when given, must match `ensemble` and enables
/// the full-L diagnostic.
ResonatorRun run_resonance(FieldOrder q, int n, double c, int M, const std::vector<Poly>& ensemble,
                           const std::vector<LData>* rows = nullptr, unsigned threads = 1);

}  // namespace hyperell
