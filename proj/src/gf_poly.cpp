#include "hyperell/gf_poly.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hyperell {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

FieldOrder::FieldOrder(std::uint32_t q) : q_(q) {
  if (q < 3 || q % 2 == 0 || q >= (1u << 31) || !is_prime(q)) {
    throw std::invalid_argument("q must be an odd prime (got " + std::to_string(q) + ")");
  }
}

std::uint32_t FieldOrder::pow(std::uint32_t a, std::uint64_t e) const noexcept {
  std::uint64_t result = 1 % q_;
  std::uint64_t b = a % q_;
  while (e > 0) {
    if (e & 1) result = result * b % q_;
    b = b * b % q_;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

std::uint32_t FieldOrder::inv(std::uint32_t a) const {
  if (a % q_ == 0) throw std::domain_error("inverse of zero in F_q");
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = q_, new_r = a % q_;
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - quot * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - quot * new_r);
  }
  return reduce(t);
}

std::uint32_t FieldOrder::reduce(std::int64_t a) const noexcept {
  std::int64_t m = a % static_cast<std::int64_t>(q_);
  if (m < 0) m += q_;
  return static_cast<std::uint32_t>(m);
}

Poly Poly::monomial(int k) {
  std::vector<std::uint32_t> c(static_cast<std::size_t>(k) + 1, 0);
  c.back() = 1;
  return Poly(std::move(c));
}

std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  for (std::size_t i = a.coeffs.size(); i-- > 0;) {
    if (auto c = a.coeffs[i] <=> b.coeffs[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::size_t PolyHash::operator()(const Poly& p) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (auto c : p.coeffs) {
    h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

bool FactoredPoly::all_multiplicities_even() const {
  return std::all_of(factors.begin(), factors.end(),
                     [](const PrimePower& pp) { return pp.multiplicity % 2 == 0; });
}

// ---- arithmetic -------------------------------------------------------------

Poly poly_add(FieldOrder q, const Poly& a, const Poly& b) {
  const auto& longer = a.coeffs.size() >= b.coeffs.size() ? a : b;
  const auto& shorter = a.coeffs.size() >= b.coeffs.size() ? b : a;
  std::vector<std::uint32_t> c = longer.coeffs;
  for (std::size_t i = 0; i < shorter.coeffs.size(); ++i) c[i] = q.add(c[i], shorter.coeffs[i]);
  return Poly(std::move(c));
}

Poly poly_sub(FieldOrder q, const Poly& a, const Poly& b) {
  std::vector<std::uint32_t> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] = a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] = q.sub(c[i], b.coeffs[i]);
  return Poly(std::move(c));
}

Poly poly_scale(FieldOrder q, const Poly& a, std::uint32_t s) {
  std::vector<std::uint32_t> c(a.coeffs.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = q.mul(a.coeffs[i], s);
  return Poly(std::move(c));
}

Poly poly_mul(FieldOrder q, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly{};
  std::vector<std::uint64_t> acc(a.coeffs.size() + b.coeffs.size() - 1, 0);
  const std::uint64_t m = q.q64();
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) {
      acc[i + j] = (acc[i + j] + static_cast<std::uint64_t>(a.coeffs[i]) * b.coeffs[j]) % m;
    }
  }
  std::vector<std::uint32_t> c(acc.begin(), acc.end());
  return Poly(std::move(c));
}

std::pair<Poly, Poly> poly_divmod(FieldOrder q, const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::invalid_argument("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly{}, a};
  std::vector<std::uint32_t> r = a.coeffs;
  const int db = b.degree();
  std::vector<std::uint32_t> quot(static_cast<std::size_t>(a.degree() - db) + 1, 0);
  const std::uint32_t lead_inv = q.inv(b.leading());
  for (int i = a.degree(); i >= db; --i) {
    const std::uint32_t c = q.mul(r[i], lead_inv);
    quot[i - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) r[i - db + j] = q.sub(r[i - db + j], q.mul(c, b.coeffs[j]));
  }
  r.resize(static_cast<std::size_t>(db));
  return {Poly(std::move(quot)), Poly(std::move(r))};
}

Poly poly_mod(FieldOrder q, const Poly& a, const Poly& b) { return poly_divmod(q, a, b).second; }

Poly make_monic(FieldOrder q, const Poly& a) {
  if (a.is_zero() || a.is_monic()) return a;
  return poly_scale(q, a, q.inv(a.leading()));
}

Poly poly_gcd(FieldOrder q, const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) throw std::invalid_argument("gcd(0, 0) is undefined");
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = poly_mod(q, x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return make_monic(q, x);
}

Poly derivative(FieldOrder q, const Poly& a) {
  if (a.coeffs.size() <= 1) return Poly{};
  std::vector<std::uint32_t> c(a.coeffs.size() - 1);
  for (std::size_t i = 1; i < a.coeffs.size(); ++i) {
    c[i - 1] = q.mul(a.coeffs[i], static_cast<std::uint32_t>(i % q.value()));
  }
  return Poly(std::move(c));
}

Poly poly_powmod(FieldOrder q, const Poly& base, const Integer& e, const Poly& m) {
  if (m.is_zero() || m.degree() < 1) throw std::invalid_argument("powmod needs a modulus of degree >= 1");
  if (e < 0) throw std::invalid_argument("powmod exponent must be nonnegative");
  Poly result = Poly::one();
  Poly b = poly_mod(q, base, m);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (e == 0) return result;
  for (std::size_t i = bits; i-- > 0;) {
    result = poly_mod(q, poly_mul(q, result, result), m);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = poly_mod(q, poly_mul(q, result, b), m);
  }
  return result;
}

Integer norm(FieldOrder q, const Poly& f) {
  if (f.is_zero()) return 0;
  return int_pow(q.q64(), static_cast<std::uint64_t>(f.degree()));
}

// ---- predicates ---------------------------------------------------------------

bool is_squarefree(FieldOrder q, const Poly& f) {
  if (f.is_zero()) throw std::invalid_argument("is_squarefree: zero polynomial");
  if (f.degree() == 0) return true;
  const Poly d = derivative(q, f);
  if (d.is_zero()) return false;
  return poly_gcd(q, f, d).degree() == 0;
}

namespace {

std::vector<int> prime_divisors(int n) {
  std::vector<int> ps;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

// t^(q^k) mod f, computed by k successive q-th powers.
Poly frobenius_power(FieldOrder q, const Poly& f, int k) {
  Poly x = poly_mod(q, Poly::monomial(1), f);
  const Integer qq = q.value();
  for (int i = 0; i < k; ++i) x = poly_powmod(q, x, qq, f);
  return x;
}

}  // namespace

bool is_irreducible(FieldOrder q, const Poly& f) {
  if (!f.is_monic() || f.degree() < 1) {
    throw std::invalid_argument("is_irreducible expects a monic polynomial of degree >= 1");
  }
  const int n = f.degree();
  if (n == 1) return true;
  const Poly t = Poly::monomial(1);
  if (poly_sub(q, frobenius_power(q, f, n), poly_mod(q, t, f)).degree() >= 0) return false;
  for (int ell : prime_divisors(n)) {
    const Poly h = poly_sub(q, frobenius_power(q, f, n / ell), t);
    if (poly_gcd(q, f, h).degree() != 0) return false;
  }
  return true;
}

// ---- enumeration --------------------------------------------------------------

std::uint64_t monic_count(FieldOrder q, int n) {
  if (n < 0) throw std::invalid_argument("degree must be nonnegative");
  std::uint64_t c = 1;
  for (int i = 0; i < n; ++i) {
    if (c > (std::uint64_t{1} << 62) / q.q64()) throw std::overflow_error("q^n exceeds 2^62");
    c *= q.q64();
  }
  return c;
}

Poly monic_at(FieldOrder q, int n, std::uint64_t index) {
  std::vector<std::uint32_t> c(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) {
    c[i] = static_cast<std::uint32_t>(index % q.q64());
    index /= q.q64();
  }
  c[n] = 1;
  return Poly(std::move(c));
}

std::uint64_t monic_index(FieldOrder q, const Poly& f) {
  std::uint64_t idx = 0;
  for (int i = f.degree() - 1; i >= 0; --i) idx = idx * q.q64() + f.coeffs[i];
  return idx;
}

void for_each_monic(FieldOrder q, int n, const std::function<void(const Poly&)>& fn) {
  if (n < 0) throw std::invalid_argument("degree must be nonnegative");
  Poly f;
  f.coeffs.assign(static_cast<std::size_t>(n) + 1, 0);
  f.coeffs[n] = 1;
  while (true) {
    fn(f);
    int i = 0;
    while (i < n && f.coeffs[i] == q.value() - 1) f.coeffs[i++] = 0;
    if (i == n) return;
    ++f.coeffs[i];
  }
}

std::vector<Poly> enumerate_monic(FieldOrder q, int n) {
  std::vector<Poly> out;
  out.reserve(monic_count(q, n));
  for_each_monic(q, n, [&](const Poly& f) { out.push_back(f); });
  return out;
}

IrreducibleTable::IrreducibleTable(FieldOrder q, int max_deg) : q_(q) {
  if (max_deg < 1) throw std::invalid_argument("irreducible table needs max_deg >= 1");
  by_degree_.resize(static_cast<std::size_t>(max_deg));
  for (int d = 1; d <= max_deg; ++d) {
    const std::uint64_t count = monic_count(q, d);
    std::vector<char> composite(count, 0);
    for (int e = 1; 2 * e <= d; ++e) {
      for (const Poly& p : by_degree_[e - 1]) {
        for_each_monic(q, d - e, [&](const Poly& g) {
          composite[monic_index(q, poly_mul(q, p, g))] = 1;
        });
      }
    }
    auto& out = by_degree_[d - 1];
    for (std::uint64_t i = 0; i < count; ++i) {
      if (!composite[i]) out.push_back(monic_at(q, d, i));
    }
  }
}

IrreducibleTable::IrreducibleTable(FieldOrder q, std::vector<std::vector<Poly>> by_degree)
    : q_(q), by_degree_(std::move(by_degree)) {
  for (auto& group : by_degree_) std::sort(group.begin(), group.end());
}

const std::vector<Poly>& IrreducibleTable::of_degree(int d) const {
  if (d < 1 || d > max_degree()) throw std::out_of_range("irreducible table degree out of range");
  return by_degree_[d - 1];
}

std::size_t IrreducibleTable::count_up_to(int d) const {
  std::size_t total = 0;
  for (int e = 1; e <= std::min(d, max_degree()); ++e) total += by_degree_[e - 1].size();
  return total;
}

IrreducibleTable enumerate_irreducibles(FieldOrder q, int max_deg) {
  return IrreducibleTable(q, max_deg);
}

FactoredPoly factor(FieldOrder q, const Poly& f, const IrreducibleTable& table) {
  if (f.is_zero()) throw std::invalid_argument("factor: zero polynomial");
  FactoredPoly out;
  out.unit = f.leading();
  Poly rest = make_monic(q, f);
  if (table.max_degree() < rest.degree() / 2) {
    throw std::invalid_argument("factor: irreducible table too small for degree " +
                                std::to_string(rest.degree()));
  }
  for (int d = 1; 2 * d <= rest.degree(); ++d) {
    for (const Poly& p : table.of_degree(d)) {
      if (2 * d > rest.degree()) break;
      int mult = 0;
      while (rest.degree() >= d) {
        auto [quot, rem] = poly_divmod(q, rest, p);
        if (!rem.is_zero()) break;
        rest = std::move(quot);
        ++mult;
      }
      if (mult > 0) out.factors.push_back({p, mult});
    }
  }
  if (rest.degree() >= 1) {
    // Remaining cofactor has no factor of degree <= deg/2, so it is prime.
    auto it = std::find_if(out.factors.begin(), out.factors.end(),
                           [&](const PrimePower& pp) { return pp.prime == rest; });
    if (it != out.factors.end()) {
      ++it->multiplicity;
    } else {
      out.factors.push_back({rest, 1});
    }
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
  return out;
}

FactoredPoly factor(FieldOrder q, const Poly& f) {
  if (f.is_zero()) throw std::invalid_argument("factor: zero polynomial");
  const IrreducibleTable table(q, std::max(1, f.degree() / 2));
  return factor(q, f, table);
}

Poly expand(FieldOrder q, const FactoredPoly& f) {
  Poly r = Poly::constant(f.unit);
  for (const auto& pp : f.factors) {
    for (int i = 0; i < pp.multiplicity; ++i) r = poly_mul(q, r, pp.prime);
  }
  return r;
}

int moebius(int n) {
  if (n < 1) throw std::invalid_argument("moebius: n must be positive");
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      result = -result;
    }
  }
  if (n > 1) result = -result;
  return result;
}

Integer pi_q_exact(std::uint64_t q, int n) {
  if (n < 1) throw std::invalid_argument("pi_q_exact: n must be >= 1");
  Integer sum = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const int mu = moebius(d);
    if (mu == 0) continue;
    Integer term = int_pow(q, static_cast<std::uint64_t>(n / d));
    if (mu > 0) sum += term; else sum -= term;
  }
  return sum / n;
}

// ---- text formats -------------------------------------------------------------

std::string format_poly(const Poly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(f.coeffs[i]);
  }
  return out;
}

Poly parse_poly(FieldOrder q, std::string_view text) {
  std::vector<std::uint32_t> c;
  std::size_t pos = 0;
  if (text.empty()) throw std::invalid_argument("empty polynomial text");
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view tok = text.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw std::invalid_argument("bad polynomial coefficient '" + std::string(tok) + "'");
    }
    if (v >= q.q64()) {
      throw std::invalid_argument("coefficient " + std::to_string(v) + " is not a residue mod " +
                                  std::to_string(q.value()));
    }
    c.push_back(static_cast<std::uint32_t>(v));
    pos = comma + 1;
  }
  return Poly(std::move(c));
}

std::string pretty_poly(const Poly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = f.degree(); i >= 0; --i) {
    const auto c = f.coeffs[i];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (c != 1 || i == 0) os << c;
    if (i >= 1) os << 't';
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

void write_ptable(std::ostream& out, const IrreducibleTable& table) {
  out << kPtableHeader << '\n' << "q,deg,coeffs\n";
  for (int d = 1; d <= table.max_degree(); ++d) {
    for (const Poly& p : table.of_degree(d)) {
      out << table.field().value() << ',' << d << ",\"" << format_poly(p) << "\"\n";
    }
  }
}

std::optional<IrreducibleTable> read_ptable(std::istream& in, FieldOrder q) {
  std::string line;
  if (!std::getline(in, line) || line != kPtableHeader) return std::nullopt;
  if (!std::getline(in, line) || line != "q,deg,coeffs") return std::nullopt;
  std::vector<std::vector<Poly>> groups;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) return std::nullopt;
    if (std::stoul(line.substr(0, c1)) != q.value()) return std::nullopt;
    const int d = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
    std::string coeffs = line.substr(c2 + 1);
    if (coeffs.size() >= 2 && coeffs.front() == '"') coeffs = coeffs.substr(1, coeffs.size() - 2);
    Poly p = parse_poly(q, coeffs);
    if (p.degree() != d || d < 1) return std::nullopt;
    if (static_cast<int>(groups.size()) < d) groups.resize(static_cast<std::size_t>(d));
    groups[d - 1].push_back(std::move(p));
  }
  if (groups.empty()) return std::nullopt;
  for (int d = 1; d <= static_cast<int>(groups.size()); ++d) {
    if (Integer(static_cast<unsigned long>(groups[d - 1].size())) != pi_q_exact(q.value(), d)) {
      return std::nullopt;
    }
  }
  return IrreducibleTable(q, std::move(groups));
}

}  // namespace hyperell
