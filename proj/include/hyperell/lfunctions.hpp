#pragma once

// L-polynomials of quadratic characters over F_q[t].
//
// For monic squarefree D of degree d the L-function
//   L(u, chi_D) = sum_f chi_D(f) u^deg f
// is a polynomial of degree <= d-1. It factors as (1-u)^lambda L*(u) with
// lambda = 1 iff d is even, and deg L* = 2g = d - 1 - lambda. Everything on
// this side is exact: integer coefficients and rational L(1, chi_D).

#include "hyperell/characters.hpp"
#include "hyperell/gf_poly.hpp"
#include "hyperell/rational.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hyperell {

struct LData {
  Poly D;
  std::vector<std::int64_t> coeffs;       // c_0 .. c_{d-1}
  int lambda = 0;
  int genus = 0;
  std::vector<std::int64_t> star_coeffs;  // a_0 .. a_{2g}
  Rational value_at_one;                  // L(1, chi_D) = sum c_n q^-n
};

/// How the coefficient vector is obtained.
enum class LMethod {
  /// Expand the Euler product over every irreducible of degree <= d-1.
  euler_product,
  /// Expand only up to degree g and complete by the functional equation.
  /// Much cheaper for large d; never use it to test the functional equation.
  functional_equation,
};

/// chi_D(P) for every irreducible of degree 1..max_deg, in table order.
std::vector<std::int8_t> prime_characters(FieldOrder q, const Poly& D,
                                          const IrreducibleTable& table, int max_deg);

/// c_0 .. c_{d-1} from the Euler product. Throws std::invalid_argument if D
/// is not monic squarefree of degree >= 1.
std::vector<std::int64_t> l_coefficients(FieldOrder q, const Poly& D, const IrreducibleTable& table);

/// Requires table.max_degree() >= d-1 for euler_product and >= g for
/// functional_equation.
LData completed_l(FieldOrder q, const Poly& D, const IrreducibleTable& table,
                  LMethod method = LMethod::euler_product);

/// Checks a_{2g-i} = q^(g-i) a_i exactly.
bool verify_functional_equation(FieldOrder q, const LData& L);

enum class RhStatus { holds, violated, no_convergence };

/// Every root u of L* satisfies ||u| - q^-1/2| <= tol. The squarefree part
/// of L* over Q is taken exactly before the companion-matrix eigensolve, so
/// repeated roots do not cost precision.
RhStatus verify_rh_zeros(FieldOrder q, std::span<const std::int64_t> star_coeffs, double tol = 1e-8);
RhStatus verify_rh_zeros(FieldOrder q, const LData& L, double tol = 1e-8);

/// sum_n c_n q^-n, exact.
Rational l_value_one(FieldOrder q, std::span<const std::int64_t> coeffs);
inline Rational l_value_one(FieldOrder q, const LData& L) { return l_value_one(q, L.coeffs); }

/// prod over irreducibles of degree <= y of (1 - chi_D(P)/|P|)^-1, exact.
Rational short_euler_l(FieldOrder q, const Poly& D, int y, const IrreducibleTable& table);

/// Same product given per-degree counts of chi = +1 and chi = -1.
Rational short_euler_from_counts(FieldOrder q, std::span<const int> plus, std::span<const int> minus);

/// h_D = q^g L(1, chi_D) for odd deg D. Throws std::logic_error if not a
/// positive integer.
Integer class_number_odd(FieldOrder q, const LData& L);

/// h_D R_D = q^(g+1) L(1, chi_D) / (q-1) for even deg D. Throws
/// std::logic_error if not a positive integer.
Integer class_number_regulator_even(FieldOrder q, const LData& L);

/// Generalized divisor function d_r, multiplicative with
/// d_r(P^a) = Gamma(r+a) / (Gamma(r) a!). Non-integer r goes through lgamma
/// (relative accuracy about 1e-12).
double divisor_fn(double r, const FactoredPoly& f);
/// Exact d_k for integer k: d_k(P^a) = binom(k+a-1, a).
Integer divisor_fn_exact(unsigned k, const FactoredPoly& f);

/// h(f) = prod_{P | f} |P| / (|P| + 1).
Rational h_fn(FieldOrder q, const FactoredPoly& f);

/// Factor links for every monic polynomial of degree <= max_deg: each f
/// points at one irreducible P | f and the cofactor f/P. A completely
/// multiplicative function is then filled in with one pass per degree.
class MonicFactorSieve {
 public:
  /// table must cover max_deg.
  MonicFactorSieve(const IrreducibleTable& table, int max_deg);

  int max_degree() const noexcept { return max_deg_; }

  /// sum_{f in M_m} chi_D(f) for m = 0..max_deg, with chi_D evaluated by
  /// jacobi_symbol on irreducibles and extended multiplicatively.
  std::vector<std::int64_t> character_sums(const Poly& D) const;

 private:
  struct Link {
    std::uint32_t prime;     // global index in table order
    std::uint32_t cofactor;  // monic index of f/P in degree (m - deg P)
    std::uint8_t cofactor_degree;
  };
  const IrreducibleTable* table_;
  int max_deg_;
  std::vector<std::vector<Link>> links_;  // links_[m][monic index]
};

// ---- cache ------------------------------------------------------------------

inline constexpr std::string_view kLcacheHeader = "#hyperell-l1 lcache v1";

void write_lcache(std::ostream& out, FieldOrder q, int n, std::span<const LData> rows);
/// std::nullopt on version mismatch or malformed content.
std::optional<std::vector<LData>> read_lcache(std::istream& in, FieldOrder q, int n);
std::filesystem::path lcache_path(const std::filesystem::path& dir, FieldOrder q, int n);

}  // namespace hyperell
