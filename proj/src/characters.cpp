#include "hyperell/characters.hpp"

#include <stdexcept>
#include <utility>

namespace hyperell {

Sign legendre_constant(FieldOrder q, std::uint32_t a) {
  a %= q.value();
  if (a == 0) return Sign::zero;
  return q.pow(a, (q.value() - 1) / 2) == 1 ? Sign::positive : Sign::negative;
}

Sign legendre_symbol_euler(FieldOrder q, const Poly& f, const Poly& P) {
  if (!P.is_monic() || P.degree() < 1 || !is_irreducible(q, P)) {
    throw std::invalid_argument("legendre_symbol_euler: modulus must be monic irreducible");
  }
  const Integer exponent = (norm(q, P) - 1) / 2;
  const Poly r = poly_powmod(q, f, exponent, P);
  if (r.is_zero()) return Sign::zero;
  if (r.degree() != 0) throw std::logic_error("Euler criterion produced a non-constant residue");
  if (r.coeffs[0] == 1) return Sign::positive;
  if (r.coeffs[0] == q.value() - 1) return Sign::negative;
  throw std::logic_error("Euler criterion produced a residue other than 0, 1, q-1");
}

namespace {

// In-place a <- a mod b for b of degree >= 0, b monic.
void reduce_mod_monic(FieldOrder q, std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  const int db = static_cast<int>(b.size()) - 1;
  for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
    const std::uint32_t c = a[i];
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) a[i - db + j] = q.sub(a[i - db + j], q.mul(c, b[j]));
  }
  if (static_cast<int>(a.size()) > db) a.resize(static_cast<std::size_t>(db));
  while (!a.empty() && a.back() == 0) a.pop_back();
}

}  // namespace

Sign jacobi_symbol(FieldOrder q, const Poly& f, const Poly& D) {
  if (D.is_zero()) throw std::invalid_argument("jacobi_symbol: zero modulus");
  if (!D.is_monic()) throw std::invalid_argument("jacobi_symbol: modulus must be monic");
  const bool odd_half = ((q.value() - 1) / 2) % 2 == 1;
  std::vector<std::uint32_t> a = f.coeffs;  // numerator
  std::vector<std::uint32_t> b = D.coeffs;  // monic modulus
  int sign = 1;
  while (true) {
    const int db = static_cast<int>(b.size()) - 1;
    if (db == 0) return sign_of(sign);
    reduce_mod_monic(q, a, b);
    if (a.empty()) return Sign::zero;
    const int da = static_cast<int>(a.size()) - 1;
    const std::uint32_t lead = a.back();
    if (lead != 1) {
      // (c g / B) = legendre(c)^deg B * (g / B)
      if (db % 2 == 1 && legendre_constant(q, lead) == Sign::negative) sign = -sign;
      const std::uint32_t inv = q.inv(lead);
      for (auto& c : a) c = q.mul(c, inv);
    }
    if (da == 0) return sign_of(sign);
    if (odd_half && (da % 2 == 1) && (db % 2 == 1)) sign = -sign;
    std::swap(a, b);
  }
}

Sign jacobi_symbol_by_factoring(FieldOrder q, const Poly& f, const Poly& D) {
  if (D.is_zero()) throw std::invalid_argument("jacobi_symbol: zero modulus");
  if (!D.is_monic()) throw std::invalid_argument("jacobi_symbol: modulus must be monic");
  if (D.degree() == 0) return Sign::positive;
  Sign s = Sign::positive;
  for (const auto& pp : factor(q, D).factors) {
    const Sign local = legendre_symbol_euler(q, f, pp.prime);
    for (int i = 0; i < pp.multiplicity; ++i) s = s * local;
  }
  return s;
}

std::int64_t char_sum_over_Mn(FieldOrder q, const Poly& D, int n) {
  std::int64_t total = 0;
  for_each_monic(q, n, [&](const Poly& f) { total += to_int(jacobi_symbol(q, f, D)); });
  return total;
}

}  // namespace hyperell
