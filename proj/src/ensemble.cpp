#include "hyperell/ensemble.hpp"

#include "hyperell/characters.hpp"
#include "hyperell/parallel.hpp"
#include "hyperell/random_model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

namespace hyperell {

std::uint64_t ensemble_size(FieldOrder q, int n) {
  if (n < 1) throw std::invalid_argument("ensemble degree must be >= 1");
  if (n == 1) return q.q64();
  return monic_count(q, n) - monic_count(q, n - 1);
}

std::vector<Poly> enumerate_H_n(FieldOrder q, int n, unsigned threads) {
  if (n < 1) throw std::invalid_argument("enumerate_H_n needs n >= 1");
  const std::uint64_t total = monic_count(q, n);
  std::vector<char> keep(total);
  parallel_for(total, threads, [&](std::size_t i) { keep[i] = is_squarefree(q, monic_at(q, n, i)); });
  std::vector<Poly> out;
  out.reserve(ensemble_size(q, n));
  for (std::uint64_t i = 0; i < total; ++i) {
    if (keep[i]) out.push_back(monic_at(q, n, i));
  }
  return out;
}

LMethod default_method(int n) { return n <= 6 ? LMethod::euler_product : LMethod::functional_equation; }

int required_table_degree(int n, LMethod method) {
  if (method == LMethod::euler_product) return std::max(1, n - 1);
  const int lambda = n % 2 == 0 ? 1 : 0;
  return std::max(1, (n - 1 - lambda) / 2);
}

std::vector<LData> ensemble_l_data(FieldOrder q, const std::vector<Poly>& ensemble,
                                   const IrreducibleTable& table, LMethod method, unsigned threads) {
  std::vector<LData> rows(ensemble.size());
  parallel_for(ensemble.size(), threads,
               [&](std::size_t i) { rows[i] = completed_l(q, ensemble[i], table, method); });
  return rows;
}

CachedLData load_or_compute_l_data(FieldOrder q, int n, const std::vector<Poly>& ensemble,
                                   const IrreducibleTable& table, unsigned threads,
                                   const std::optional<std::filesystem::path>& cache_dir) {
  CachedLData out;
  if (cache_dir) {
    const auto path = lcache_path(*cache_dir, q, n);
    std::ifstream in(path);
    if (in) {
      auto rows = read_lcache(in, q, n);
      bool ok = rows && rows->size() == ensemble.size();
      for (std::size_t i = 0; ok && i < ensemble.size(); ++i) ok = (*rows)[i].D == ensemble[i];
      if (ok) {
        out.rows = std::move(*rows);
        out.from_cache = true;
        return out;
      }
      out.notice = "cache file " + path.string() + " rejected (version or content mismatch); rebuilt";
    }
  }
  out.rows = ensemble_l_data(q, ensemble, table, default_method(n), threads);
  if (cache_dir) {
    std::filesystem::create_directories(*cache_dir);
    const auto path = lcache_path(*cache_dir, q, n);
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream os(tmp);
      if (!os) throw std::runtime_error("cannot write cache file " + tmp);
      write_lcache(os, q, n, out.rows);
    }
    std::filesystem::rename(tmp, path);
  }
  return out;
}

std::vector<CharacterProfile> character_profiles(FieldOrder q, const std::vector<Poly>& ensemble,
                                                 const IrreducibleTable& table, int max_deg, unsigned threads) {
  if (table.max_degree() < max_deg) throw std::invalid_argument("irreducible table too small for profile");
  std::vector<CharacterProfile> out(ensemble.size());
  parallel_for(ensemble.size(), threads, [&](std::size_t i) {
    CharacterProfile p;
    p.plus.assign(max_deg, 0);
    p.minus.assign(max_deg, 0);
    const auto chars = prime_characters(q, ensemble[i], table, max_deg);
    std::size_t idx = 0;
    for (int d = 1; d <= max_deg; ++d) {
      for (std::size_t j = 0; j < table.of_degree(d).size(); ++j, ++idx) {
        if (chars[idx] > 0) ++p.plus[d - 1];
        if (chars[idx] < 0) ++p.minus[d - 1];
      }
    }
    out[i] = std::move(p);
  });
  return out;
}

Rational short_l_from_profile(FieldOrder q, const CharacterProfile& profile, int y) {
  if (y < 0 || static_cast<std::size_t>(y) > profile.plus.size()) {
    throw std::invalid_argument("profile does not cover the requested degree");
  }
  return short_euler_from_counts(q, std::span<const int>(profile.plus).first(y),
                                 std::span<const int>(profile.minus).first(y));
}

// ---- tail distribution ----------------------------------------------------------

std::vector<TailRecord> tail_distribution(FieldOrder q, const std::vector<LData>& rows,
                                          const std::vector<double>& tau_grid, int model_y) {
  std::vector<TailRecord> out;
  const auto size = static_cast<std::uint64_t>(rows.size());
  ModelParams params{q, model_y, 1, 1};
  for (double tau : tau_grid) {
    TailRecord rec;
    rec.tau = tau;
    const double threshold = std::exp(kEulerGamma) * tau;
    const Rational t_exact(threshold);
    for (const auto& r : rows) {
      if (r.value_at_one >= t_exact) ++rec.count;
    }
    rec.phi = size == 0 ? Rational(0) : Rational(Integer(rec.count), Integer(size));
    rec.phi.canonicalize();
    if (tau > 0) {
      const auto est = chernoff_tail(params, tau);
      rec.model_bound = std::exp(est.chernoff_exponent);
      rec.model_flag = est.flag == TailFlag::interior        ? "interior"
                       : est.flag == TailFlag::lower_boundary ? "lower_boundary"
                                                              : "upper_boundary";
    } else {
      rec.model_bound = 1;
      rec.model_flag = "nonpositive_tau";
    }
    out.push_back(std::move(rec));
  }
  return out;
}

// ---- moments --------------------------------------------------------------------

std::vector<std::pair<CharacterProfile, std::uint64_t>> profile_histogram(
    const std::vector<CharacterProfile>& profiles) {
  std::map<CharacterProfile, std::uint64_t> counts;
  for (const auto& p : profiles) ++counts[p];
  return {counts.begin(), counts.end()};
}

namespace {

std::uint64_t total_count(const std::vector<std::pair<CharacterProfile, std::uint64_t>>& hist) {
  std::uint64_t s = 0;
  for (const auto& [p, c] : hist) s += c;
  if (s == 0) throw std::invalid_argument("empty ensemble");
  return s;
}

}  // namespace

Rational empirical_moment_exact(FieldOrder q, const std::vector<std::pair<CharacterProfile, std::uint64_t>>& hist,
                                int y, unsigned k) {
  const std::uint64_t size = total_count(hist);
  Rational sum = 0;
  for (const auto& [p, c] : hist) sum += Integer(c) * rational_pow(short_l_from_profile(q, p, y), k);
  sum /= Integer(size);
  sum.canonicalize();
  return sum;
}

double empirical_moment(FieldOrder q, const std::vector<std::pair<CharacterProfile, std::uint64_t>>& hist,
                        int y, double k) {
  if (k < 0) throw std::invalid_argument("moment order must be >= 0");
  const std::uint64_t size = total_count(hist);
  double sum = 0;
  for (const auto& [p, c] : hist) sum += static_cast<double>(c) * std::pow(to_double(short_l_from_profile(q, p, y)), k);
  return sum / static_cast<double>(size);
}

MomentRecord moment_record(FieldOrder q, const std::vector<std::pair<CharacterProfile, std::uint64_t>>& hist,
                           int y, double k) {
  MomentRecord rec;
  rec.k = k;
  rec.y = y;
  if (k >= 0 && k == std::floor(k) && k <= 64) {
    rec.empirical_exact = empirical_moment_exact(q, hist, y, static_cast<unsigned>(k));
    rec.empirical = to_double(*rec.empirical_exact);
  } else {
    rec.empirical = empirical_moment(q, hist, y, k);
  }
  rec.model = model_moment(ModelParams{q, y, 1, 1}, k);
  rec.ratio = rec.empirical / rec.model;
  return rec;
}

// ---- character-sum lemmas ---------------------------------------------------------

std::vector<OrthogonalityRecord> square_orthogonality_check(FieldOrder q, const std::vector<Poly>& ensemble,
                                                            const std::vector<Poly>& f_list) {
  if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
  std::vector<OrthogonalityRecord> out;
  for (const auto& f : f_list) {
    if (!f.is_monic()) throw std::invalid_argument("orthogonality check needs monic f");
    const Poly f2 = poly_mul(q, f, f);
    std::int64_t sum = 0;
    for (const auto& D : ensemble) sum += to_int(jacobi_symbol(q, f2, D));
    OrthogonalityRecord rec;
    rec.f = f;
    rec.observed = Rational(Integer(static_cast<long>(sum)), Integer(static_cast<unsigned long>(ensemble.size())));
    rec.observed.canonicalize();
    rec.predicted = 1;
    for (const auto& pp : factor(q, f).factors) {
      const Integer p = norm(q, pp.prime);
      rec.predicted *= Rational(p, p + 1);
    }
    rec.predicted.canonicalize();
    rec.abs_err = abs(rec.observed - rec.predicted);
    out.push_back(std::move(rec));
  }
  return out;
}

bool is_perfect_square(FieldOrder q, const Poly& f) {
  if (f.is_zero()) return true;
  if (legendre_constant(q, f.leading()) == Sign::negative) return false;
  return factor(q, f).all_multiplicities_even();
}

std::vector<NonsquareRecord> nonsquare_cancellation_check(FieldOrder q, int n, const std::vector<Poly>& ensemble,
                                                          const std::vector<Poly>& ell_list) {
  std::vector<NonsquareRecord> out;
  for (const auto& ell : ell_list) {
    if (!ell.is_monic()) throw std::invalid_argument("nonsquare check needs monic ell");
    if (is_perfect_square(q, ell)) {
      throw std::invalid_argument("nonsquare check rejects perfect square " + format_poly(ell));
    }
    NonsquareRecord rec;
    rec.ell = ell;
    for (const auto& D : ensemble) rec.sum += to_int(jacobi_symbol(q, ell, D));
    rec.normalized = std::abs(static_cast<double>(rec.sum)) / std::pow(static_cast<double>(q.q64()), 0.6 * n);
    out.push_back(std::move(rec));
  }
  return out;
}

// ---- truncation -----------------------------------------------------------------

int round_degree(double x) {
  const double r = std::ceil(x - 0.5);
  return r < 1 ? 1 : static_cast<int>(r);
}

int truncation_length(FieldOrder q, int n, double f_param) {
  if (n < 2) throw std::invalid_argument("truncation experiment needs n >= 2");
  if (!(f_param > 0)) throw std::invalid_argument("f_param must be > 0");
  const double ln = log_q(q.q64(), n);
  return round_degree(ln + log_q(q.q64(), ln) + 3.0 * log_q(q.q64(), f_param));
}

std::vector<TruncationRecord> truncation_experiment(FieldOrder q, int n, const std::vector<LData>& rows,
                                                    const std::vector<CharacterProfile>& profiles,
                                                    double f_param, int extra) {
  if (rows.size() != profiles.size() || rows.empty()) throw std::invalid_argument("rows and profiles differ");
  const int N0 = truncation_length(q, n, f_param);
  const double threshold = 1.0 / (f_param * log_q(q.q64(), n));
  const Rational t_exact(threshold);
  const auto size = static_cast<std::uint64_t>(rows.size());
  std::vector<TruncationRecord> out;
  for (int N = N0; N <= N0 + extra; ++N) {
    TruncationRecord rec;
    rec.f_param = f_param;
    rec.N = N;
    rec.threshold = threshold;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Rational dev = abs(rows[i].value_at_one / short_l_from_profile(q, profiles[i], N) - 1);
      if (dev > t_exact) ++rec.exceed_count;
    }
    rec.exceed_fraction = Rational(Integer(rec.exceed_count), Integer(size));
    rec.exceed_fraction.canonicalize();
    rec.budget = std::pow(static_cast<double>(q.q64()), 0.7 * n) / static_cast<double>(size);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace hyperell
