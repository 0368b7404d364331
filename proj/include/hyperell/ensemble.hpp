#pragma once

// Exhaustive scans over the hyperelliptic ensemble H_n: all monic squarefree
// D of degree n over F_q, in canonical order.

#include "hyperell/gf_poly.hpp"
#include "hyperell/lfunctions.hpp"
#include "hyperell/rational.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hyperell {

/// Largest ensemble scanned without an explicit override (4 * 5^7 curves).
inline constexpr std::uint64_t kDeskScaleCap = 312500;

/// |H_n| = q^n - q^(n-1) for n >= 2, q for n = 1.
std::uint64_t ensemble_size(FieldOrder q, int n);

std::vector<Poly> enumerate_H_n(FieldOrder q, int n, unsigned threads = 1);

/// euler_product up to n = 6, functional_equation beyond.
LMethod default_method(int n);

/// Smallest table degree completed_l needs for this n and method.
int required_table_degree(int n, LMethod method);

/// L-data for every D in `ensemble`, in order.
std::vector<LData> ensemble_l_data(FieldOrder q, const std::vector<Poly>& ensemble,
                                   const IrreducibleTable& table, LMethod method, unsigned threads = 1);

struct CachedLData {
  std::vector<LData> rows;
  bool from_cache = false;
  std::string notice;  // set when an existing cache file was rejected
};

/// Reads dir/lcache_q{q}_n{n}.csv when present and valid, otherwise computes
/// and (when a directory is given) writes it.
CachedLData load_or_compute_l_data(FieldOrder q, int n, const std::vector<Poly>& ensemble,
                                   const IrreducibleTable& table, unsigned threads,
                                   const std::optional<std::filesystem::path>& cache_dir);

/// Per-degree counts of chi_D(P) = +1 and -1 over irreducibles of degree
/// 1..max_deg. Index d-1 holds degree d.
struct CharacterProfile {
  std::vector<int> plus;
  std::vector<int> minus;
  auto operator<=>(const CharacterProfile&) const = default;
};

std::vector<CharacterProfile> character_profiles(FieldOrder q, const std::vector<Poly>& ensemble,
                                                 const IrreducibleTable& table, int max_deg,
                                                 unsigned threads = 1);

/// L(1, chi_D; y) from a profile that covers at least degree y.
Rational short_l_from_profile(FieldOrder q, const CharacterProfile& profile, int y);

// ---- tail distribution ---------------------------------------------------------

struct TailRecord {
  double tau = 0;
  Rational phi;                 // #{D : L(1, chi_D) >= e^gamma tau} / |H_n|
  std::uint64_t count = 0;
  double model_bound = 1;       // exp of the Chernoff exponent; 1 where degenerate
  std::string model_flag;
};

/// e^gamma tau is converted to an exact binary rational before comparison,
/// so the count is reproducible bit for bit.
std::vector<TailRecord> tail_distribution(FieldOrder q, const std::vector<LData>& rows,
                                          const std::vector<double>& tau_grid, int model_y);

// ---- moments -------------------------------------------------------------------

struct MomentRecord {
  double k = 1;
  int y = 1;
  std::optional<Rational> empirical_exact;  // integer k only
  double empirical = 0;
  double model = 0;
  double ratio = 0;
};

/// Number of D sharing each distinct profile, in profile order.
std::vector<std::pair<CharacterProfile, std::uint64_t>> profile_histogram(
    const std::vector<CharacterProfile>& profiles);

/// (1/|H_n|) sum_D L(1, chi_D; y)^k exactly; k = 0 gives 1.
Rational empirical_moment_exact(FieldOrder q, const std::vector<std::pair<CharacterProfile, std::uint64_t>>& hist,
                                int y, unsigned k);
double empirical_moment(FieldOrder q, const std::vector<std::pair<CharacterProfile, std::uint64_t>>& hist,
                        int y, double k);

MomentRecord moment_record(FieldOrder q, const std::vector<std::pair<CharacterProfile, std::uint64_t>>& hist,
                           int y, double k);

// ---- character-sum lemmas ------------------------------------------------------

struct OrthogonalityRecord {
  Poly f;
  Rational observed;   // (1/|H_n|) sum_D chi_D(f^2)
  Rational predicted;  // prod_{P | f} (1 + 1/|P|)^-1
  Rational abs_err;
};

std::vector<OrthogonalityRecord> square_orthogonality_check(FieldOrder q, const std::vector<Poly>& ensemble,
                                                            const std::vector<Poly>& f_list);

struct NonsquareRecord {
  Poly ell;
  std::int64_t sum = 0;  // sum_D chi_D(ell)
  double normalized = 0; // |sum| / q^(0.6 n)
};

/// Throws std::invalid_argument for a perfect square or non-monic ell.
std::vector<NonsquareRecord> nonsquare_cancellation_check(FieldOrder q, int n, const std::vector<Poly>& ensemble,
                                                          const std::vector<Poly>& ell_list);

bool is_perfect_square(FieldOrder q, const Poly& f);

// ---- truncation ----------------------------------------------------------------

/// Nearest integer with ties rounded down, clamped below at 1.
int round_degree(double x);

/// round(log_q n + log_q log_q n + 3 log_q f). Requires n >= 2, f > 0.
int truncation_length(FieldOrder q, int n, double f_param);

struct TruncationRecord {
  double f_param = 0;
  int N = 1;
  double threshold = 0;   // 1 / (f log_q n)
  std::uint64_t exceed_count = 0;
  Rational exceed_fraction;
  double budget = 0;      // q^(7n/10) / |H_n|
};

/// Records for N, N+1, ..., N+extra, where N = truncation_length(q, n, f).
/// `profiles` must cover degree N+extra.
std::vector<TruncationRecord> truncation_experiment(FieldOrder q, int n, const std::vector<LData>& rows,
                                                    const std::vector<CharacterProfile>& profiles,
                                                    double f_param, int extra = 2);

struct EnsembleReport {
  std::uint64_t q = 0;
  int n = 0;
  std::uint64_t ensemble_size = 0;
  std::vector<TailRecord> tail;
  std::vector<MomentRecord> moments;
  std::vector<OrthogonalityRecord> orthogonality;
  std::vector<NonsquareRecord> nonsquare;
  std::vector<TruncationRecord> truncation;
};

}  // namespace hyperell
