#include "hyperell/lfunctions.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hyperell {

std::vector<std::int8_t> prime_characters(FieldOrder q, const Poly& D,
                                          const IrreducibleTable& table, int max_deg) {
  if (max_deg > table.max_degree()) throw std::invalid_argument("prime_characters: table too small");
  std::vector<std::int8_t> out;
  out.reserve(table.count_up_to(max_deg));
  for (int d = 1; d <= max_deg; ++d) {
    for (const Poly& P : table.of_degree(d)) out.push_back(static_cast<std::int8_t>(to_int(jacobi_symbol(q, P, D))));
  }
  return out;
}

namespace {

void require_squarefree_monic(FieldOrder q, const Poly& D) {
  if (!D.is_monic() || D.degree() < 1) throw std::invalid_argument("L-function needs monic D of degree >= 1");
  if (!is_squarefree(q, D)) throw std::invalid_argument("L-function needs squarefree D");
}

// Truncated expansion of prod_{deg P <= max_deg} (1 - chi(P) u^deg P)^-1 to length len.
std::vector<std::int64_t> euler_series(FieldOrder q, const Poly& D, const IrreducibleTable& table,
                                       int max_deg, int len) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(len), 0);
  c[0] = 1;
  for (int e = 1; e <= max_deg; ++e) {
    for (const Poly& P : table.of_degree(e)) {
      const int chi = to_int(jacobi_symbol(q, P, D));
      if (chi == 0) continue;
      for (int i = e; i < len; ++i) c[i] += chi * c[i - e];
    }
  }
  return c;
}

std::vector<std::int64_t> divide_out_trivial_zero(const std::vector<std::int64_t>& c) {
  // c = (1 - u) * a, exact synthetic division.
  std::vector<std::int64_t> a(c.size() - 1);
  std::int64_t carry = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    carry += c[i];
    a[i] = carry;
  }
  if (carry + c.back() != 0) throw std::logic_error("L(u) is not divisible by (1 - u)");
  return a;
}

}  // namespace

std::vector<std::int64_t> l_coefficients(FieldOrder q, const Poly& D, const IrreducibleTable& table) {
  require_squarefree_monic(q, D);
  const int d = D.degree();
  if (d - 1 > table.max_degree()) throw std::invalid_argument("l_coefficients: table too small");
  return euler_series(q, D, table, d - 1, d);
}

LData completed_l(FieldOrder q, const Poly& D, const IrreducibleTable& table, LMethod method) {
  require_squarefree_monic(q, D);
  LData L;
  L.D = D;
  const int d = D.degree();
  L.lambda = d % 2 == 0 ? 1 : 0;
  L.genus = (d - 1 - L.lambda) / 2;
  const int g = L.genus;
  if (method == LMethod::euler_product) {
    L.coeffs = l_coefficients(q, D, table);
    L.star_coeffs = L.lambda ? divide_out_trivial_zero(L.coeffs) : L.coeffs;
  } else {
    if (g > table.max_degree()) throw std::invalid_argument("completed_l: table too small");
    const auto head = euler_series(q, D, table, g, g + 1);
    std::vector<std::int64_t> a(static_cast<std::size_t>(2 * g + 1), 0);
    std::int64_t run = 0;
    for (int i = 0; i <= g; ++i) {
      run = L.lambda ? run + head[i] : head[i];
      a[i] = run;
    }
    std::int64_t qpow = 1;
    for (int i = g; i >= 0; --i) {
      a[2 * g - i] = qpow * a[i];
      qpow *= static_cast<std::int64_t>(q.value());
    }
    L.star_coeffs = a;
    if (L.lambda) {
      L.coeffs.assign(a.size() + 1, 0);
      for (std::size_t i = 0; i < a.size(); ++i) {
        L.coeffs[i] += a[i];
        L.coeffs[i + 1] -= a[i];
      }
    } else {
      L.coeffs = a;
    }
  }
  L.value_at_one = l_value_one(q, L.coeffs);
  return L;
}

bool verify_functional_equation(FieldOrder q, const LData& L) {
  const int g = L.genus;
  if (static_cast<int>(L.star_coeffs.size()) != 2 * g + 1) return false;
  Integer qpow = 1;
  for (int i = g; i >= 0; --i) {
    if (Integer(static_cast<long>(L.star_coeffs[2 * g - i])) != qpow * static_cast<long>(L.star_coeffs[i])) return false;
    qpow *= q.value();
  }
  return true;
}

namespace {

using QPoly = std::vector<Rational>;

void qtrim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly qmod(QPoly a, const QPoly& b) {
  qtrim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const Rational c = a.back() / b.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t j = 0; j <= db; ++j) a[shift + j] -= c * b[j];
    a.pop_back();
    qtrim(a);
  }
  return a;
}

QPoly qdiv(QPoly a, const QPoly& b) {
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) return {};
  QPoly quot(a.size() - db, 0);
  for (std::size_t i = a.size(); i-- > db;) {
    const Rational c = a[i] / b.back();
    quot[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  return quot;
}

// Squarefree part p / gcd(p, p') over Q.
QPoly squarefree_part(const QPoly& p) {
  QPoly dp;
  for (std::size_t i = 1; i < p.size(); ++i) dp.push_back(p[i] * static_cast<long>(i));
  qtrim(dp);
  if (dp.empty()) return p;
  QPoly x = p, y = dp;
  while (!y.empty()) {
    QPoly r = qmod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  if (x.size() <= 1) return p;
  return qdiv(p, x);
}

}  // namespace

RhStatus verify_rh_zeros(FieldOrder q, std::span<const std::int64_t> star_coeffs, double tol) {
  QPoly p;
  for (auto c : star_coeffs) p.emplace_back(static_cast<long>(c));
  qtrim(p);
  if (p.size() <= 1) return RhStatus::holds;
  const QPoly s = squarefree_part(p);
  const int m = static_cast<int>(s.size()) - 1;
  if (m < 1) return RhStatus::holds;
  // u = z / sqrt(q): zeros on |u| = q^-1/2 become zeros on |z| = 1.
  const double sq = std::sqrt(static_cast<double>(q.value()));
  std::vector<double> z(s.size());
  for (int i = 0; i <= m; ++i) z[i] = s[i].get_d() / std::pow(sq, i);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) companion(i, m - 1) = -z[i] / z[m];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) return RhStatus::no_convergence;
  const auto roots = solver.eigenvalues();
  for (int k = 0; k < m; ++k) {
    std::complex<double> r = roots[k];
    // Newton polish on the squarefree polynomial.
    for (int it = 0; it < 3; ++it) {
      std::complex<double> val = z[m], der = 0.0;
      for (int i = m - 1; i >= 0; --i) {
        der = der * r + val;
        val = val * r + z[i];
      }
      if (std::abs(der) == 0.0) break;
      r -= val / der;
    }
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) return RhStatus::no_convergence;
    if (std::abs(std::abs(r) - 1.0) / sq > tol) return RhStatus::violated;
  }
  return RhStatus::holds;
}

RhStatus verify_rh_zeros(FieldOrder q, const LData& L, double tol) {
  return verify_rh_zeros(q, std::span<const std::int64_t>(L.star_coeffs), tol);
}

Rational l_value_one(FieldOrder q, std::span<const std::int64_t> coeffs) {
  if (coeffs.empty()) return 0;
  const std::size_t top = coeffs.size() - 1;
  Integer num = 0;
  Integer qpow = 1;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    num += qpow * static_cast<long>(coeffs[i]);
    qpow *= q.value();
  }
  Rational r(num, int_pow(q.q64(), top));
  r.canonicalize();
  return r;
}

Rational short_euler_from_counts(FieldOrder q, std::span<const int> plus, std::span<const int> minus) {
  Integer num = 1, den = 1;
  for (std::size_t i = 0; i < plus.size(); ++i) {
    const Integer pd = int_pow(q.q64(), i + 1);
    Integer t;
    mpz_pow_ui(t.get_mpz_t(), pd.get_mpz_t(), static_cast<unsigned long>(plus[i] + minus[i]));
    num *= t;
    const Integer lo = pd - 1, hi = pd + 1;
    mpz_pow_ui(t.get_mpz_t(), lo.get_mpz_t(), static_cast<unsigned long>(plus[i]));
    den *= t;
    mpz_pow_ui(t.get_mpz_t(), hi.get_mpz_t(), static_cast<unsigned long>(minus[i]));
    den *= t;
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational short_euler_l(FieldOrder q, const Poly& D, int y, const IrreducibleTable& table) {
  if (y <= 0) return 1;
  if (y > table.max_degree()) throw std::invalid_argument("short_euler_l: table too small");
  std::vector<int> plus(static_cast<std::size_t>(y), 0), minus(static_cast<std::size_t>(y), 0);
  for (int d = 1; d <= y; ++d) {
    for (const Poly& P : table.of_degree(d)) {
      const Sign s = jacobi_symbol(q, P, D);
      if (s == Sign::positive) ++plus[d - 1];
      if (s == Sign::negative) ++minus[d - 1];
    }
  }
  return short_euler_from_counts(q, plus, minus);
}

Integer class_number_odd(FieldOrder q, const LData& L) {
  if (L.D.degree() % 2 == 0) throw std::invalid_argument("class_number_odd needs odd deg D");
  const Rational h = L.value_at_one * int_pow(q.q64(), static_cast<std::uint64_t>(L.genus));
  if (!is_integer(h) || h < 1) {
    throw std::logic_error("Artin integrality failed: q^g L(1) = " + to_string(h));
  }
  return h.get_num();
}

Integer class_number_regulator_even(FieldOrder q, const LData& L) {
  if (L.D.degree() % 2 != 0) throw std::invalid_argument("class_number_regulator_even needs even deg D");
  Rational hr = L.value_at_one * int_pow(q.q64(), static_cast<std::uint64_t>(L.genus + 1));
  hr /= q.value() - 1;
  if (!is_integer(hr) || hr < 1) {
    throw std::logic_error("Artin integrality failed: q^(g+1) L(1)/(q-1) = " + to_string(hr));
  }
  return hr.get_num();
}

namespace {

Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace

Integer divisor_fn_exact(unsigned k, const FactoredPoly& f) {
  Integer r = 1;
  for (const auto& pp : f.factors) {
    const auto a = static_cast<unsigned long>(pp.multiplicity);
    if (k == 0) return a == 0 ? r : Integer(0);
    r *= binomial(k + a - 1, a);
  }
  return r;
}

double divisor_fn(double r, const FactoredPoly& f) {
  if (r < 0) throw std::invalid_argument("divisor_fn needs r >= 0");
  if (r == std::floor(r) && r < 1e6) return divisor_fn_exact(static_cast<unsigned>(r), f).get_d();
  double log_total = 0.0;
  for (const auto& pp : f.factors) {
    const double a = pp.multiplicity;
    log_total += std::lgamma(r + a) - std::lgamma(r) - std::lgamma(a + 1.0);
  }
  return std::exp(log_total);
}

Rational h_fn(FieldOrder q, const FactoredPoly& f) {
  Rational h = 1;
  for (const auto& pp : f.factors) {
    const Integer p = norm(q, pp.prime);
    h *= Rational(p, p + 1);
  }
  h.canonicalize();
  return h;
}

// ---- cache --------------------------------------------------------------------

namespace {

std::string join_ints(std::span<const std::int64_t> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

void write_lcache(std::ostream& out, FieldOrder q, int n, std::span<const LData> rows) {
  out << kLcacheHeader << '\n' << "q,n,D,lambda,genus,coeffs,L1_num,L1_den\n";
  for (const auto& L : rows) {
    out << q.value() << ',' << n << ",\"" << format_poly(L.D) << "\"," << L.lambda << ',' << L.genus
        << ",\"" << join_ints(L.coeffs) << "\"," << L.value_at_one.get_num().get_str() << ','
        << L.value_at_one.get_den().get_str() << '\n';
  }
}

std::optional<std::vector<LData>> read_lcache(std::istream& in, FieldOrder q, int n) {
  std::string line;
  if (!std::getline(in, line) || line != kLcacheHeader) return std::nullopt;
  if (!std::getline(in, line) || line != "q,n,D,lambda,genus,coeffs,L1_num,L1_den") return std::nullopt;
  std::vector<LData> rows;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_csv_line(line);
      if (f.size() != 8) return std::nullopt;
      if (std::stoul(f[0]) != q.value() || std::stoi(f[1]) != n) return std::nullopt;
      LData L;
      L.D = parse_poly(q, f[2]);
      L.lambda = std::stoi(f[3]);
      L.genus = std::stoi(f[4]);
      std::stringstream cs(f[5]);
      std::string tok;
      while (std::getline(cs, tok, ',')) L.coeffs.push_back(std::stoll(tok));
      L.value_at_one = Rational(Integer(f[6]), Integer(f[7]));
      L.value_at_one.canonicalize();
      if (L.D.degree() != n || static_cast<int>(L.coeffs.size()) != n) return std::nullopt;
      L.star_coeffs = L.lambda ? divide_out_trivial_zero(L.coeffs) : L.coeffs;
      if (l_value_one(q, L.coeffs) != L.value_at_one) return std::nullopt;
      rows.push_back(std::move(L));
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return rows;
}

std::filesystem::path lcache_path(const std::filesystem::path& dir, FieldOrder q, int n) {
  return dir / ("lcache_q" + std::to_string(q.value()) + "_n" + std::to_string(n) + ".csv");
}

MonicFactorSieve::MonicFactorSieve(const IrreducibleTable& table, int max_deg)
    : table_(&table), max_deg_(max_deg), links_(static_cast<std::size_t>(max_deg) + 1) {
  if (max_deg < 0 || table.max_degree() < max_deg) throw std::invalid_argument("sieve needs a table covering max_deg");
  const FieldOrder q = table.field();
  std::vector<std::vector<char>> seen(links_.size());
  for (int m = 1; m <= max_deg; ++m) {
    links_[m].resize(monic_count(q, m));
    seen[m].assign(links_[m].size(), 0);
  }
  std::uint32_t global = 0;
  for (int e = 1; e <= max_deg; ++e) {
    for (const Poly& P : table.of_degree(e)) {
      for (int m = e; m <= max_deg; ++m) {
        const std::uint64_t cof_count = monic_count(q, m - e);
        for (std::uint64_t j = 0; j < cof_count; ++j) {
          const std::uint64_t idx = monic_index(q, poly_mul(q, P, monic_at(q, m - e, j)));
          if (seen[m][idx]) continue;
          seen[m][idx] = 1;
          links_[m][idx] = Link{global, static_cast<std::uint32_t>(j), static_cast<std::uint8_t>(m - e)};
        }
      }
      ++global;
    }
  }
}

std::vector<std::int64_t> MonicFactorSieve::character_sums(const Poly& D) const {
  const FieldOrder q = table_->field();
  std::vector<std::int8_t> prime_chi;
  for (int e = 1; e <= max_deg_; ++e) {
    for (const Poly& P : table_->of_degree(e)) prime_chi.push_back(static_cast<std::int8_t>(to_int(jacobi_symbol(q, P, D))));
  }
  std::vector<std::vector<std::int8_t>> chi(links_.size());
  chi[0] = {1};
  std::vector<std::int64_t> sums(links_.size(), 0);
  sums[0] = 1;
  for (int m = 1; m <= max_deg_; ++m) {
    chi[m].resize(links_[m].size());
    for (std::size_t i = 0; i < links_[m].size(); ++i) {
      const Link& l = links_[m][i];
      chi[m][i] = static_cast<std::int8_t>(prime_chi[l.prime] * chi[l.cofactor_degree][l.cofactor]);
      sums[m] += chi[m][i];
    }
  }
  return sums;
}

}  // namespace hyperell
