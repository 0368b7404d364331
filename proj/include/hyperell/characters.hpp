#pragma once

// Quadratic residue symbols over F_q[t].
//
// Two independent routes are kept side by side: the Euler criterion
// f^((|P|-1)/2) mod P for a single irreducible P, and a reciprocity loop for
// the Jacobi-style symbol (f/D). For coprime monic A, B the loop uses
//   (A/B)(B/A) = (-1)^((q-1)/2 * deg A * deg B)
// and pulls constants out as (a/B) = legendre(a)^deg B.

#include "hyperell/gf_poly.hpp"

#include <cstdint>

namespace hyperell {

enum class Sign : std::int8_t { negative = -1, zero = 0, positive = 1 };

constexpr int to_int(Sign s) noexcept { return static_cast<int>(s); }
constexpr Sign sign_of(int v) noexcept {
  return v > 0 ? Sign::positive : (v < 0 ? Sign::negative : Sign::zero);
}
constexpr Sign operator*(Sign a, Sign b) noexcept { return sign_of(to_int(a) * to_int(b)); }

/// Legendre symbol of a residue a modulo q.
Sign legendre_constant(FieldOrder q, std::uint32_t a);

/// (f/P) by the Euler criterion. Throws std::invalid_argument if P is not
/// monic irreducible.
Sign legendre_symbol_euler(FieldOrder q, const Poly& f, const Poly& P);

/// chi_D(f) = (f/D) for monic D via the reciprocity loop. D = 1 gives +1.
/// Throws std::invalid_argument for zero or non-monic D.
Sign jacobi_symbol(FieldOrder q, const Poly& f, const Poly& D);

/// Product of Euler-criterion symbols over the factorization of D.
Sign jacobi_symbol_by_factoring(FieldOrder q, const Poly& f, const Poly& D);

/// Exact sum of chi_D(f) over all monic f of degree n (brute force).
std::int64_t char_sum_over_Mn(FieldOrder q, const Poly& D, int n);

}  // namespace hyperell
