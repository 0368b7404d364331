#pragma once

// Arithmetic in F_q[t] for an odd prime q.
//
// Polynomials are dense coefficient vectors, constant term first. The zero
// polynomial is the empty vector and has degree -1 here (degree -inf
// conceptually, norm 0). Canonical order is (degree, then coefficients
// compared from the leading end), which coincides with the enumeration order
// of monic polynomials where the constant term varies fastest.

#include "hyperell/rational.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hyperell {

/// The prime order q of the coefficient field. Validated once at construction.
class FieldOrder {
 public:
  /// Throws std::invalid_argument unless q is an odd prime below 2^31.
  explicit FieldOrder(std::uint32_t q);

  std::uint32_t value() const noexcept { return q_; }
  std::uint64_t q64() const noexcept { return q_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept {
    return a >= b ? a - b : a + q_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const noexcept { return a == 0 ? 0 : q_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % q_);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const noexcept;
  /// Inverse of a nonzero residue.
  std::uint32_t inv(std::uint32_t a) const;
  /// Reduce an arbitrary signed integer into [0, q).
  std::uint32_t reduce(std::int64_t a) const noexcept;

  friend bool operator==(const FieldOrder&, const FieldOrder&) = default;

 private:
  std::uint32_t q_;
};

bool is_prime(std::uint64_t n);

struct Poly {
  std::vector<std::uint32_t> coeffs;

  Poly() = default;
  explicit Poly(std::vector<std::uint32_t> c) : coeffs(std::move(c)) { trim(); }

  static Poly constant(std::uint32_t c) { return Poly({c}); }
  static Poly one() { return Poly({1}); }
  /// t^k
  static Poly monomial(int k);

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const noexcept { return coeffs.empty(); }
  bool is_constant() const noexcept { return coeffs.size() <= 1; }
  bool is_monic() const noexcept { return !coeffs.empty() && coeffs.back() == 1; }
  bool is_one() const noexcept { return coeffs.size() == 1 && coeffs[0] == 1; }
  std::uint32_t leading() const noexcept { return coeffs.empty() ? 0 : coeffs.back(); }

  void trim() {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  }

  friend bool operator==(const Poly&, const Poly&) = default;
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b);
};

struct PolyHash {
  std::size_t operator()(const Poly& p) const noexcept;
};

/// A monic irreducible with its multiplicity.
struct PrimePower {
  Poly prime;
  int multiplicity = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// unit * prod prime^multiplicity, primes sorted canonically and distinct.
struct FactoredPoly {
  std::uint32_t unit = 1;
  std::vector<PrimePower> factors;

  /// True when every multiplicity is even (a square up to the unit).
  bool all_multiplicities_even() const;
  friend bool operator==(const FactoredPoly&, const FactoredPoly&) = default;
};

// ---- arithmetic -----------------------------------------------------------

Poly poly_add(FieldOrder q, const Poly& a, const Poly& b);
Poly poly_sub(FieldOrder q, const Poly& a, const Poly& b);
Poly poly_scale(FieldOrder q, const Poly& a, std::uint32_t c);
Poly poly_mul(FieldOrder q, const Poly& a, const Poly& b);

/// Returns (quotient, remainder). Throws std::invalid_argument when b = 0.
std::pair<Poly, Poly> poly_divmod(FieldOrder q, const Poly& a, const Poly& b);
Poly poly_mod(FieldOrder q, const Poly& a, const Poly& b);

/// Monic gcd. Throws std::invalid_argument when both inputs are zero.
Poly poly_gcd(FieldOrder q, const Poly& a, const Poly& b);

Poly make_monic(FieldOrder q, const Poly& a);
Poly derivative(FieldOrder q, const Poly& a);

/// base^e mod m by square-and-multiply. Throws std::invalid_argument when
/// m is zero or constant.
Poly poly_powmod(FieldOrder q, const Poly& base, const Integer& e, const Poly& m);

/// |f| = q^deg f, with |0| = 0.
Integer norm(FieldOrder q, const Poly& f);

// ---- predicates -------------------------------------------------------------

/// gcd(f, f') constant; f' = 0 with deg f >= 1 means f is a p-th power.
bool is_squarefree(FieldOrder q, const Poly& f);

/// Rabin's test. Requires f monic of degree >= 1.
bool is_irreducible(FieldOrder q, const Poly& f);

// ---- enumeration ------------------------------------------------------------

/// q^n, the number of monic polynomials of degree n.
std::uint64_t monic_count(FieldOrder q, int n);

/// The index-th monic polynomial of degree n in enumeration order
/// (constant term fastest).
Poly monic_at(FieldOrder q, int n, std::uint64_t index);

/// Position of a monic polynomial in enumeration order.
std::uint64_t monic_index(FieldOrder q, const Poly& f);

void for_each_monic(FieldOrder q, int n, const std::function<void(const Poly&)>& fn);

std::vector<Poly> enumerate_monic(FieldOrder q, int n);

/// Monic irreducibles grouped by degree, each group sorted canonically.
/// Immutable after construction; safe to share across threads.
class IrreducibleTable {
 public:
  /// Builds degrees 1..max_deg by sieving products of lower-degree primes.
  IrreducibleTable(FieldOrder q, int max_deg);
  IrreducibleTable(FieldOrder q, std::vector<std::vector<Poly>> by_degree);

  FieldOrder field() const noexcept { return q_; }
  int max_degree() const noexcept { return static_cast<int>(by_degree_.size()); }
  /// Irreducibles of degree d (1 <= d <= max_degree()).
  const std::vector<Poly>& of_degree(int d) const;
  std::size_t count_up_to(int d) const;

 private:
  FieldOrder q_;
  std::vector<std::vector<Poly>> by_degree_;
};

IrreducibleTable enumerate_irreducibles(FieldOrder q, int max_deg);

/// Canonical factorization by trial division against the table, which must
/// cover degrees up to deg f / 2. Throws std::invalid_argument for f = 0.
FactoredPoly factor(FieldOrder q, const Poly& f, const IrreducibleTable& table);
FactoredPoly factor(FieldOrder q, const Poly& f);

Poly expand(FieldOrder q, const FactoredPoly& f);

/// Number of monic irreducibles of degree n via the Moebius/Gauss formula.
Integer pi_q_exact(std::uint64_t q, int n);
int moebius(int n);

// ---- text formats -----------------------------------------------------------

/// "1,3,1" for t^2+3t+1; the zero polynomial renders as "0".
std::string format_poly(const Poly& f);
/// Accepts comma-separated residues; throws std::invalid_argument on bad input.
Poly parse_poly(FieldOrder q, std::string_view text);
/// Human-readable form, e.g. "t^2 + 3t + 1".
std::string pretty_poly(const Poly& f);

inline constexpr std::string_view kPtableHeader = "#hyperell-l1 ptable v1";

void write_ptable(std::ostream& out, const IrreducibleTable& table);
/// Returns std::nullopt if the version line or field does not match.
std::optional<IrreducibleTable> read_ptable(std::istream& in, FieldOrder q);

}  // namespace hyperell
