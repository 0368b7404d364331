#include "hyperell/cli.hpp"

#include "hyperell/characters.hpp"
#include "hyperell/ensemble.hpp"
#include "hyperell/gf_poly.hpp"
#include "hyperell/lfunctions.hpp"
#include "hyperell/parallel.hpp"
#include "hyperell/random_model.hpp"
#include "hyperell/resonator.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace hyperell {

namespace {

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> table{
      {"enumerate", Command::enumerate},   {"lfun", Command::lfun},
      {"dist", Command::dist},             {"moments", Command::moments},
      {"orthogonality", Command::orthogonality}, {"truncation", Command::truncation},
      {"resonate", Command::resonate},     {"constants", Command::constants},
      {"verify", Command::verify},
  };
  return table;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    if constexpr (std::is_floating_point_v<T>) {
      out += format_real(v[i]);
    } else if constexpr (std::is_same_v<T, std::string>) {
      out += v[i];
    } else {
      out += std::to_string(v[i]);
    }
  }
  return out;
}

Cell integer_cell(const Integer& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

Cell opt_real(double x) { return std::isnan(x) ? Cell{} : Cell{x}; }

}  // namespace

std::string command_name(Command c) {
  for (const auto& [name, cmd] : command_table()) {
    if (cmd == c) return name;
  }
  return "unknown";
}

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Exact experiments on quadratic L-functions over F_q[t]", kToolName};
  app.set_version_flag("--version", kToolVersion);

  std::string command;
  std::uint32_t q = cfg.q;
  int n = cfg.n;
  std::vector<double> tau, k_list, c_sweep, f_params;
  std::vector<int> y_list;
  double c = 0, beta = 0;
  int M = 0;
  std::string f_text, ell_text, D_text, format = "json", cache_dir;
  std::uint64_t seed = cfg.seed, mc = cfg.mc_samples;
  unsigned threads = cfg.threads;

  std::string names;
  for (const auto& [name, cmd] : command_table()) names += (names.empty() ? "" : ", ") + name;
  app.add_option("command", command, "One of: " + names)->required();
  app.add_option("--q", q, "Field order, an odd prime (default 5)");
  app.add_option("--n", n, "Ensemble degree (default 4); upper degree for verify");
  auto* tau_opt = app.add_option("--tau", tau, "Comma-separated tau grid for dist")->delimiter(',');
  auto* k_opt = app.add_option("--k", k_list, "Comma-separated moment orders")->delimiter(',');
  auto* y_opt = app.add_option("--y", y_list, "Comma-separated short Euler product lengths (default round(3 log_q n))")
                    ->delimiter(',');
  auto* c_opt = app.add_option("--c", c, "Resonator constant (default 0.9 times the admissible cap)");
  auto* beta_opt = app.add_option("--beta", beta, "Derive c from beta: log c = log c* - beta");
  app.add_flag("--refine-c", cfg.refine_c, "Add 1/sqrt(log n) to log c when --beta is given");
  app.add_option("--c-sweep", c_sweep, "Comma-separated list of c values for resonate")->delimiter(',');
  auto* M_opt = app.add_option("--M", M, "Euler product length in the resonated average");
  auto* f_opt = app.add_option("--f", f_text, "Semicolon-separated polynomials (constant term first) for the square check");
  auto* ell_opt = app.add_option("--ell", ell_text, "Semicolon-separated polynomials for the nonsquare check");
  auto* fp_opt = app.add_option("--f-param", f_params, "Comma-separated truncation parameters")->delimiter(',');
  auto* D_opt = app.add_option("--D", D_text, "Single polynomial for lfun (constant term first)");
  app.add_option("--seed", seed, "Monte Carlo seed");
  app.add_option("--mc-samples", mc, "Monte Carlo sample count");
  app.add_flag("--monte-carlo", cfg.monte_carlo, "Add Monte Carlo rows to moments");
  app.add_option("--threads", threads, "Worker threads (default 1)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  auto* cache_opt = app.add_option("--cache-dir", cache_dir, "Directory for L-data caches (env HYPERELL_CACHE_DIR)");
  app.add_flag("--force", cfg.force, "Allow scans beyond the desk-scale cap");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested(std::string(kToolName) + " " + kToolVersion + "\n");
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what(), app.help());
  }

  auto fail = [&](const std::string& msg) { throw UsageError(msg, app.help()); };
  const auto it = command_table().find(command);
  if (it == command_table().end()) fail("unknown command '" + command + "'; expected one of: " + names);
  cfg.command = it->second;
  if (q < 3 || q % 2 == 0 || q >= (1u << 31) || !is_prime(q)) fail("--q must be an odd prime, got " + std::to_string(q));
  cfg.q = q;
  if (n < 1) fail("--n must be >= 1");
  cfg.n = n;
  if (tau_opt->count()) cfg.tau_grid = tau;
  if (k_opt->count()) {
    for (double k : k_list) {
      if (!(k >= 0)) fail("--k values must be >= 0");
    }
    cfg.k_list = k_list;
  }
  if (y_opt->count()) {
    for (int y : y_list) {
      if (y < 1) fail("--y values must be >= 1");
    }
    cfg.y_list = y_list;
  }
  if (c_opt->count()) {
    if (!(c > 0)) fail("--c must be > 0");
    cfg.c = c;
  }
  if (beta_opt->count()) cfg.beta = beta;
  if (cfg.c && cfg.beta) fail("--c and --beta are mutually exclusive");
  if (cfg.refine_c && !cfg.beta) fail("--refine-c needs --beta");
  for (double v : c_sweep) {
    if (!(v > 0)) fail("--c-sweep values must be > 0");
  }
  cfg.c_sweep = c_sweep;
  if (M_opt->count()) {
    if (M < 1) fail("--M must be >= 1");
    cfg.M = M;
  }
  const FieldOrder field(q);
  auto parse_list = [&](const std::string& text, const char* flag) {
    std::vector<std::string> out;
    for (const auto& item : split(text, ';')) {
      try {
        const Poly p = parse_poly(field, item);
        if (!p.is_monic()) fail(std::string(flag) + " polynomials must be monic: " + item);
        out.push_back(format_poly(p));
      } catch (const std::invalid_argument& e) {
        fail(std::string(flag) + ": " + e.what());
      }
    }
    if (out.empty()) fail(std::string(flag) + " needs at least one polynomial");
    return out;
  };
  if (f_opt->count()) cfg.f_list = parse_list(f_text, "--f");
  if (ell_opt->count()) cfg.ell_list = parse_list(ell_text, "--ell");
  if (fp_opt->count()) {
    for (double v : f_params) {
      if (!(v > 0)) fail("--f-param values must be > 0");
    }
    cfg.f_params = f_params;
  }
  if (D_opt->count()) {
    try {
      const Poly p = parse_poly(field, D_text);
      if (!p.is_monic() || p.degree() < 1 || !is_squarefree(field, p)) fail("--D must be monic squarefree of degree >= 1");
      cfg.D = format_poly(p);
    } catch (const std::invalid_argument& e) {
      fail(std::string("--D: ") + e.what());
    }
  }
  cfg.seed = seed;
  if (mc < 1) fail("--mc-samples must be >= 1");
  cfg.mc_samples = mc;
  if (threads < 1) fail("--threads must be >= 1");
  cfg.threads = threads;
  cfg.format = format == "csv" ? ReportFormat::csv : ReportFormat::json;
  if (cache_opt->count()) {
    cfg.cache_dir = cache_dir;
  } else if (const char* env = std::getenv("HYPERELL_CACHE_DIR"); env && *env) {
    cfg.cache_dir = env;
  }
  return cfg;
}

std::string config_echo(const RunConfig& cfg) {
  std::string s = command_name(cfg.command) + " --q " + std::to_string(cfg.q) + " --n " + std::to_string(cfg.n);
  switch (cfg.command) {
    case Command::dist:
      s += " --tau " + join(cfg.tau_grid, ",");
      if (!cfg.y_list.empty()) s += " --y " + join(cfg.y_list, ",");
      break;
    case Command::moments:
      s += " --k " + join(cfg.k_list, ",");
      if (!cfg.y_list.empty()) s += " --y " + join(cfg.y_list, ",");
      if (cfg.monte_carlo) s += " --monte-carlo --seed " + std::to_string(cfg.seed) + " --mc-samples " + std::to_string(cfg.mc_samples);
      break;
    case Command::orthogonality:
      s += " --f " + join(cfg.f_list, ";") + " --ell " + join(cfg.ell_list, ";");
      break;
    case Command::truncation:
      s += " --f-param " + join(cfg.f_params, ",");
      break;
    case Command::resonate:
      if (cfg.c) s += " --c " + format_real(*cfg.c);
      if (cfg.beta) s += " --beta " + format_real(*cfg.beta) + (cfg.refine_c ? " --refine-c" : "");
      if (!cfg.c_sweep.empty()) s += " --c-sweep " + join(cfg.c_sweep, ",");
      if (cfg.M) s += " --M " + std::to_string(*cfg.M);
      break;
    case Command::lfun:
      if (cfg.D) s += " --D " + *cfg.D;
      break;
    case Command::verify:
      s += " --seed " + std::to_string(cfg.seed);
      break;
    default:
      break;
  }
  if (cfg.force) s += " --force";
  return s;
}

namespace {

struct Context {
  const RunConfig& cfg;
  FieldOrder q;
  RunResult& result;
};

void require_desk_scale(const Context& ctx, int n) {
  const std::uint64_t size = ensemble_size(ctx.q, n);
  if (size > kDeskScaleCap && !ctx.cfg.force) {
    throw ResourceRefusal("scan of |H_" + std::to_string(n) + "| = " + std::to_string(size) +
                          " curves exceeds the desk-scale cap of " + std::to_string(kDeskScaleCap) +
                          " (about " + std::to_string(size / kDeskScaleCap + 1) +
                          "x the largest routine scan); rerun with --force to proceed");
  }
}

std::vector<LData> l_data(Context& ctx, const std::vector<Poly>& ensemble) {
  const int n = ctx.cfg.n;
  const IrreducibleTable table(ctx.q, required_table_degree(n, default_method(n)));
  auto cached = load_or_compute_l_data(ctx.q, n, ensemble, table, ctx.cfg.threads, ctx.cfg.cache_dir);
  if (!cached.notice.empty()) ctx.result.notices.push_back(cached.notice);
  return std::move(cached.rows);
}

int default_y(const Context& ctx) { return ctx.cfg.n >= 2 ? default_M(ctx.q, ctx.cfg.n) : 1; }

std::string join_coeffs(const std::vector<std::int64_t>& v) { return join(v, ";"); }

void run_enumerate(Context& ctx) {
  require_desk_scale(ctx, ctx.cfg.n);
  Table t{"H_n", {{"index", ColumnKind::integer}, {"D", ColumnKind::text}, {"pretty", ColumnKind::text}}, {}};
  const auto ensemble = enumerate_H_n(ctx.q, ctx.cfg.n, ctx.cfg.threads);
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    t.add_row({static_cast<std::int64_t>(i), format_poly(ensemble[i]), pretty_poly(ensemble[i])});
  }
  ctx.result.report.tables.push_back(std::move(t));
}

void run_lfun(Context& ctx) {
  Table t{"lfun",
          {{"D", ColumnKind::text},
           {"lambda", ColumnKind::integer},
           {"genus", ColumnKind::integer},
           {"coeffs", ColumnKind::text},
           {"star_coeffs", ColumnKind::text},
           {"L1", ColumnKind::rational},
           {"invariant", ColumnKind::text},
           {"invariant_value", ColumnKind::text},
           {"functional_equation", ColumnKind::boolean},
           {"rh", ColumnKind::text}},
          {}};
  std::vector<LData> rows;
  if (ctx.cfg.D) {
    const Poly D = parse_poly(ctx.q, *ctx.cfg.D);
    const IrreducibleTable table(ctx.q, std::max(1, D.degree() - 1));
    rows.push_back(completed_l(ctx.q, D, table, LMethod::euler_product));
  } else {
    require_desk_scale(ctx, ctx.cfg.n);
    rows = l_data(ctx, enumerate_H_n(ctx.q, ctx.cfg.n, ctx.cfg.threads));
  }
  std::vector<RhStatus> rh(rows.size());
  parallel_for(rows.size(), ctx.cfg.threads, [&](std::size_t i) { rh[i] = verify_rh_zeros(ctx.q, rows[i]); });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& L = rows[i];
    const bool odd = L.lambda == 0;
    const Integer inv = odd ? class_number_odd(ctx.q, L) : class_number_regulator_even(ctx.q, L);
    t.add_row({format_poly(L.D), static_cast<std::int64_t>(L.lambda), static_cast<std::int64_t>(L.genus),
               join_coeffs(L.coeffs), join_coeffs(L.star_coeffs), L.value_at_one, std::string(odd ? "h" : "hR"),
               inv.get_str(), verify_functional_equation(ctx.q, L),
               std::string(rh[i] == RhStatus::holds ? "holds" : rh[i] == RhStatus::violated ? "violated" : "no_convergence")});
  }
  ctx.result.report.tables.push_back(std::move(t));
}

void run_dist(Context& ctx) {
  require_desk_scale(ctx, ctx.cfg.n);
  const auto rows = l_data(ctx, enumerate_H_n(ctx.q, ctx.cfg.n, ctx.cfg.threads));
  const int y = ctx.cfg.y_list.empty() ? default_y(ctx) : ctx.cfg.y_list.front();
  Table t{"tail",
          {{"tau", ColumnKind::real},
           {"threshold", ColumnKind::real},
           {"count", ColumnKind::integer},
           {"phi", ColumnKind::rational},
           {"model_y", ColumnKind::integer},
           {"model_bound", ColumnKind::real},
           {"model_flag", ColumnKind::text}},
          {}};
  for (const auto& rec : tail_distribution(ctx.q, rows, ctx.cfg.tau_grid, y)) {
    t.add_row({rec.tau, std::exp(kEulerGamma) * rec.tau, static_cast<std::int64_t>(rec.count), rec.phi,
               static_cast<std::int64_t>(y), rec.model_bound, rec.model_flag});
  }
  ctx.result.report.tables.push_back(std::move(t));
}

void run_moments(Context& ctx) {
  require_desk_scale(ctx, ctx.cfg.n);
  std::vector<int> ys = ctx.cfg.y_list.empty() ? std::vector<int>{default_y(ctx)} : ctx.cfg.y_list;
  const int ymax = *std::max_element(ys.begin(), ys.end());
  const auto ensemble = enumerate_H_n(ctx.q, ctx.cfg.n, ctx.cfg.threads);
  const IrreducibleTable table(ctx.q, ymax);
  const auto hist = profile_histogram(character_profiles(ctx.q, ensemble, table, ymax, ctx.cfg.threads));
  Table t{"moment",
          {{"k", ColumnKind::real},
           {"y", ColumnKind::integer},
           {"empirical", ColumnKind::rational},
           {"empirical_real", ColumnKind::real},
           {"model", ColumnKind::real},
           {"ratio", ColumnKind::real}},
          {}};
  for (int y : ys) {
    for (double k : ctx.cfg.k_list) {
      const auto rec = moment_record(ctx.q, hist, y, k);
      t.add_row({rec.k, static_cast<std::int64_t>(rec.y),
                 rec.empirical_exact ? Cell{*rec.empirical_exact} : Cell{}, rec.empirical, rec.model, rec.ratio});
    }
  }
  ctx.result.report.tables.push_back(std::move(t));
  if (!ctx.cfg.monte_carlo) return;
  Table mc{"monte_carlo",
           {{"k", ColumnKind::real},
            {"y", ColumnKind::integer},
            {"seed", ColumnKind::integer},
            {"samples", ColumnKind::integer},
            {"mean", ColumnKind::real},
            {"std_error", ColumnKind::real},
            {"closed_form", ColumnKind::real},
            {"within_3se", ColumnKind::boolean}},
           {}};
  for (int y : ys) {
    const ModelParams params{ctx.q, y, ctx.cfg.seed, ctx.cfg.mc_samples};
    for (double k : ctx.cfg.k_list) {
      const auto m = monte_carlo_moment(params, k, ctx.cfg.threads);
      mc.add_row({k, static_cast<std::int64_t>(y), static_cast<std::int64_t>(ctx.cfg.seed),
                  static_cast<std::int64_t>(ctx.cfg.mc_samples), m.mean, m.std_error, m.closed_form, m.within_3se});
    }
  }
  ctx.result.report.tables.push_back(std::move(mc));
}

std::vector<Poly> parse_polys(FieldOrder q, const std::vector<std::string>& texts) {
  std::vector<Poly> out;
  for (const auto& s : texts) out.push_back(parse_poly(q, s));
  return out;
}

void run_orthogonality(Context& ctx) {
  require_desk_scale(ctx, ctx.cfg.n);
  const auto ensemble = enumerate_H_n(ctx.q, ctx.cfg.n, ctx.cfg.threads);
  const double size = static_cast<double>(ensemble.size());
  Table sq{"square",
           {{"f", ColumnKind::text},
            {"observed", ColumnKind::rational},
            {"predicted", ColumnKind::rational},
            {"abs_err", ColumnKind::rational},
            {"abs_err_times_size", ColumnKind::real}},
           {}};
  for (const auto& rec : square_orthogonality_check(ctx.q, ensemble, parse_polys(ctx.q, ctx.cfg.f_list))) {
    sq.add_row({format_poly(rec.f), rec.observed, rec.predicted, rec.abs_err, to_double(rec.abs_err) * size});
  }
  Table ns{"nonsquare",
           {{"ell", ColumnKind::text}, {"sum", ColumnKind::integer}, {"normalized", ColumnKind::real}},
           {}};
  for (const auto& rec : nonsquare_cancellation_check(ctx.q, ctx.cfg.n, ensemble, parse_polys(ctx.q, ctx.cfg.ell_list))) {
    ns.add_row({format_poly(rec.ell), rec.sum, rec.normalized});
  }
  ctx.result.report.tables.push_back(std::move(sq));
  ctx.result.report.tables.push_back(std::move(ns));
}

void run_truncation(Context& ctx) {
  require_desk_scale(ctx, ctx.cfg.n);
  const auto ensemble = enumerate_H_n(ctx.q, ctx.cfg.n, ctx.cfg.threads);
  const auto rows = l_data(ctx, ensemble);
  int top = 1;
  for (double f : ctx.cfg.f_params) top = std::max(top, truncation_length(ctx.q, ctx.cfg.n, f) + 2);
  const IrreducibleTable table(ctx.q, top);
  const auto profiles = character_profiles(ctx.q, ensemble, table, top, ctx.cfg.threads);
  Table t{"truncation",
          {{"f_param", ColumnKind::real},
           {"N", ColumnKind::integer},
           {"threshold", ColumnKind::real},
           {"exceed_count", ColumnKind::integer},
           {"exceed_fraction", ColumnKind::rational},
           {"budget", ColumnKind::real}},
          {}};
  for (double f : ctx.cfg.f_params) {
    for (const auto& rec : truncation_experiment(ctx.q, ctx.cfg.n, rows, profiles, f)) {
      t.add_row({rec.f_param, static_cast<std::int64_t>(rec.N), rec.threshold,
                 static_cast<std::int64_t>(rec.exceed_count), rec.exceed_fraction, rec.budget});
    }
  }
  ctx.result.report.tables.push_back(std::move(t));
}

void run_resonate(Context& ctx) {
  const int n = ctx.cfg.n;
  if (n < 2) throw std::invalid_argument("resonate needs n >= 2");
  require_desk_scale(ctx, n);
  const auto ensemble = enumerate_H_n(ctx.q, n, ctx.cfg.threads);
  const auto rows = l_data(ctx, ensemble);
  std::vector<double> cs = ctx.cfg.c_sweep;
  if (cs.empty()) {
    cs.push_back(ctx.cfg.c ? *ctx.cfg.c
                 : ctx.cfg.beta ? constant_c(ctx.q, n, *ctx.cfg.beta, ctx.cfg.refine_c)
                                : default_c(ctx.q));
  }
  const int M = ctx.cfg.M ? *ctx.cfg.M : default_M(ctx.q, n);
  Table t{"resonator",
          {{"c", ColumnKind::real},
           {"N", ColumnKind::integer},
           {"M", ColumnKind::integer},
           {"s1", ColumnKind::rational},
           {"s2", ColumnKind::rational},
           {"ratio", ColumnKind::rational},
           {"min_L_short", ColumnKind::rational},
           {"mean_L_short", ColumnKind::rational},
           {"max_L_short", ColumnKind::rational},
           {"argmax_D", ColumnKind::text},
           {"sandwich_holds", ColumnKind::boolean},
           {"ratio_ge_mean", ColumnKind::boolean},
           {"ratio_full_L", ColumnKind::rational},
           {"log_rd_bound", ColumnKind::integer},
           {"rd_bound_holds", ColumnKind::boolean},
           {"main_term_M", ColumnKind::rational},
           {"main_term_N", ColumnKind::rational},
           {"main_term_positivity", ColumnKind::boolean},
           {"main_ratio", ColumnKind::rational},
           {"s1_N_smooth", ColumnKind::rational},
           {"theory_bound", ColumnKind::real},
           {"c_cap", ColumnKind::real},
           {"c_warning", ColumnKind::text}},
          {}};
  std::vector<int> Ns;
  for (double c : cs) {
    const auto run = run_resonance(ctx.q, n, c, M, ensemble, &rows, ctx.cfg.threads);
    Ns.push_back(run.N);
    t.add_row({run.c, static_cast<std::int64_t>(run.N), static_cast<std::int64_t>(run.M), run.s1, run.s2, run.ratio,
               run.min_L_short, run.mean_L_short, run.max_L_short, format_poly(run.argmax_D), run.sandwich_holds,
               run.ratio_ge_mean, run.ratio_full_L ? Cell{*run.ratio_full_L} : Cell{}, integer_cell(run.log_rd_bound),
               run.rd_bound_holds, run.main_term_M, run.main_term_N, run.main_term_positivity, run.main_ratio,
               run.s1_N_smooth, opt_real(run.theory_bound), run.c_cap,
               run.c_warning ? Cell{*run.c_warning} : Cell{}});
  }
  ctx.result.report.tables.push_back(std::move(t));
  Table e{"euler_products",
          {{"N", ColumnKind::integer},
           {"E", ColumnKind::real},
           {"E1", ColumnKind::real},
           {"E2", ColumnKind::real},
           {"ln_E", ColumnKind::real},
           {"normalized_ln_E", ColumnKind::real},
           {"asymptotic_constant", ColumnKind::real}},
          {}};
  const int top = std::max(8, *std::max_element(Ns.begin(), Ns.end()));
  for (int N = 1; N <= top; ++N) {
    const auto ep = euler_E_products(ctx.q, N);
    e.add_row({static_cast<std::int64_t>(N), ep.E, ep.E1, ep.E2, ep.ln_E, ep.normalized_ln_E, ep.asymptotic_constant});
  }
  ctx.result.report.tables.push_back(std::move(e));
}

void run_constants(Context& ctx) {
  const std::uint64_t q = ctx.q.q64();
  const auto cmp = compare_C2(q);
  Table t{"constants",
          {{"q", ColumnKind::integer},
           {"C2", ColumnKind::real},
           {"c_star", ColumnKind::real},
           {"e_gamma", ColumnKind::real},
           {"zeta_A2", ColumnKind::real},
           {"C2_published", ColumnKind::real},
           {"C2_window_lo", ColumnKind::real},
           {"C2_window_hi", ColumnKind::real},
           {"C2_discrepancy", ColumnKind::boolean}},
          {}};
  t.add_row({static_cast<std::int64_t>(q), cmp.computed, c_star(q), std::exp(kEulerGamma), zeta_A2(q),
             cmp.published ? Cell{*cmp.published} : Cell{}, cmp.window_lo, cmp.window_hi, cmp.discrepancy});
  ctx.result.report.tables.push_back(std::move(t));
  Table alt{"C2_alternative", {{"reading", ColumnKind::text}, {"value", ColumnKind::real}}, {}};
  for (const auto& [label, value] : cmp.alternatives) alt.add_row({label, value});
  ctx.result.report.tables.push_back(std::move(alt));
  if (ctx.cfg.n >= static_cast<int>(q)) {
    const double beta = ctx.cfg.beta.value_or(0.0);
    const auto tau = tau_beta_n(q, ctx.cfg.n, beta);
    Table th{"threshold",
             {{"n", ColumnKind::integer},
              {"beta", ColumnKind::real},
              {"tau_beta_n", ColumnKind::real},
              {"useful", ColumnKind::boolean},
              {"tail_target", ColumnKind::real}},
             {}};
    th.add_row({static_cast<std::int64_t>(ctx.cfg.n), beta, tau.value, tau.useful, tail_probability_target(q, beta)});
    ctx.result.report.tables.push_back(std::move(th));
  }
}

struct Tally {
  std::int64_t passed = 0;
  std::int64_t failed = 0;
  void add(bool ok) { ok ? ++passed : ++failed; }
};

void run_verify(Context& ctx) {
  const int n = ctx.cfg.n;
  if (n > 6 && !ctx.cfg.force) {
    throw ResourceRefusal("verify expands full Euler products; degree " + std::to_string(n) +
                          " needs every irreducible of degree " + std::to_string(n - 1) +
                          " for each of " + std::to_string(ensemble_size(ctx.q, n)) +
                          " curves; rerun with --force to proceed");
  }
  const FieldOrder q = ctx.q;
  const unsigned threads = ctx.cfg.threads;
  Table t{"verify",
          {{"check", ColumnKind::text},
           {"degree", ColumnKind::integer},
           {"passed", ColumnKind::integer},
           {"failed", ColumnKind::integer}},
          {}};
  Tally total;
  auto emit = [&](const std::string& name, int degree, const Tally& tally) {
    t.add_row({name, static_cast<std::int64_t>(degree), tally.passed, tally.failed});
    total.passed += tally.passed;
    total.failed += tally.failed;
  };

  const IrreducibleTable big(q, std::max(1, n));
  {
    Tally tab;
    for (int d = 1; d <= big.max_degree(); ++d) {
      tab.add(Integer(static_cast<unsigned long>(big.of_degree(d).size())) == pi_q_exact(q.q64(), d));
      for (const auto& P : big.of_degree(d)) tab.add(is_irreducible(q, P));
    }
    emit("irreducible_table", big.max_degree(), tab);
  }

  for (int m = 1; m <= n; ++m) {
    require_desk_scale(ctx, m);
    const auto ensemble = enumerate_H_n(q, m, threads);
    const auto rows = ensemble_l_data(q, ensemble, big, LMethod::euler_product, threads);
    const int sieve_deg = std::min(m + 1, n);
    const MonicFactorSieve sieve(big, std::max(sieve_deg, m));
    std::vector<char> artin(rows.size()), fe(rows.size()), rh(rows.size()), orth(rows.size()), coeff(rows.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
      const auto& L = rows[i];
      try {
        if (L.lambda == 0) class_number_odd(q, L);
        else class_number_regulator_even(q, L);
        artin[i] = 1;
      } catch (const std::logic_error&) {
        artin[i] = 0;
      }
      fe[i] = verify_functional_equation(q, L);
      rh[i] = verify_rh_zeros(q, L) == RhStatus::holds;
      const auto sums = sieve.character_sums(L.D);
      bool zero = true;
      for (int j = m; j < static_cast<int>(sums.size()); ++j) zero = zero && sums[j] == 0;
      orth[i] = zero;
      bool match = true;
      for (int j = 0; j < m; ++j) match = match && sums[j] == L.coeffs[j];
      coeff[i] = match;
    });
    Tally a, f, r, o, c;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      a.add(artin[i]);
      f.add(fe[i]);
      r.add(rh[i]);
      o.add(orth[i]);
      c.add(coeff[i]);
    }
    emit(m % 2 ? "artin_class_number" : "artin_class_number_regulator", m, a);
    emit("functional_equation", m, f);
    emit("riemann_hypothesis", m, r);
    emit("orthogonality", m, o);
    emit("coefficients_vs_direct_sums", m, c);

    if (m <= 3) {
      Tally sym;
      for (int e = 0; e <= 3; ++e) {
        for (const auto& f_poly : enumerate_monic(q, e)) {
          for (const auto& D : ensemble) sym.add(jacobi_symbol(q, f_poly, D) == jacobi_symbol_by_factoring(q, f_poly, D));
        }
      }
      emit("symbol_oracle", m, sym);
    }
  }

  {
    std::mt19937_64 rng(ctx.cfg.seed);
    const Rational tolerance(1, Integer("1000000000000000000"));
    Tally s_id, r_id;
    for (int i = 0; i < 200; ++i) {
      const Integer p = 3 + static_cast<long>(rng() % 60);
      const unsigned long den = 1 + rng() % 1000;
      const unsigned long num = rng() % (den * 95 / 100 + 1);
      const auto lf = make_local_factors(p, Rational(num, den));
      s_id.add(local_factor_S_identity(lf).equal);
      const auto rc = local_factor_R_identity(lf, tolerance);
      r_id.add(rc.equal && rc.within_certificate);
    }
    emit("local_factor_S_identity", 0, s_id);
    emit("local_factor_R_identity", 0, r_id);
  }

  t.add_row({std::string("total"), std::int64_t{0}, total.passed, total.failed});
  ctx.result.report.tables.push_back(std::move(t));
  ctx.result.report.meta.emplace_back("verdict", std::string(total.failed == 0 ? "pass" : "fail"));
  if (total.failed != 0) ctx.result.exit_code = ExitCode::verification_failure;
}

}  // namespace

RunResult run_experiment(const RunConfig& cfg) {
  RunResult result;
  Context ctx{cfg, FieldOrder(cfg.q), result};
  auto& meta = result.report.meta;
  meta.emplace_back("tool", std::string(kToolName));
  meta.emplace_back("version", std::string(kToolVersion));
  meta.emplace_back("command", command_name(cfg.command));
  meta.emplace_back("q", static_cast<std::int64_t>(cfg.q));
  meta.emplace_back("n", static_cast<std::int64_t>(cfg.n));
  meta.emplace_back("config", config_echo(cfg));
  switch (cfg.command) {
    case Command::enumerate: run_enumerate(ctx); break;
    case Command::lfun: run_lfun(ctx); break;
    case Command::dist: run_dist(ctx); break;
    case Command::moments: run_moments(ctx); break;
    case Command::orthogonality: run_orthogonality(ctx); break;
    case Command::truncation: run_truncation(ctx); break;
    case Command::resonate: run_resonate(ctx); break;
    case Command::constants: run_constants(ctx); break;
    case Command::verify: run_verify(ctx); break;
  }
  return result;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const HelpRequested& h) {
    out << h.help;
    return static_cast<int>(ExitCode::success);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << e.usage;
    return static_cast<int>(ExitCode::usage);
  }
  try {
    const RunResult result = run_experiment(cfg);
    for (const auto& note : result.notices) err << "notice: " << note << "\n";
    out << emit_report(result.report, cfg.format);
    out.flush();
    if (result.exit_code == ExitCode::verification_failure) err << "verification failed; see the verify table\n";
    return static_cast<int>(result.exit_code);
  } catch (const ResourceRefusal& e) {
    err << "refused: " << e.what() << "\n";
    return static_cast<int>(ExitCode::resource_refusal);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::usage);
  }
}

}  // namespace hyperell
