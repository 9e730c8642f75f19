#include "rvprd/verification.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <deque>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include "rvprd/diagnostics.hpp"
#include "rvprd/envelope.hpp"
#include "rvprd/errors.hpp"
#include "rvprd/output.hpp"
#include "rvprd/parallel.hpp"
#include "rvprd/picard.hpp"
#include "rvprd/singular_operator.hpp"

namespace rvprd::verify {

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
void for_nodes(const GridSpec& g, F&& f) {
  for (int k = 0; k < g.nodes; ++k)
    for (int j = 0; j < g.nodes; ++j)
      for (int i = 0; i < g.nodes; ++i) f(g.index(i, j, k), g.position(i, j, k));
}

// 5-point Gauss-Legendre on [a, b] split into `panels` pieces.
template <class F>
double gauss5(F f, double a, double b, int panels) {
  static constexpr std::array<double, 5> xs = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                               0.9061798459386640};
  static constexpr std::array<double, 5> ws = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                               0.4786286704993665, 0.2369268850561891};
  double h = (b - a) / panels, sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h;
    for (int q = 0; q < 5; ++q) sum += ws[q] * f(mid + 0.5 * h * xs[q]);
  }
  return 0.5 * h * sum;
}

double profile_bump(double s) { return s >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - s * s)); }

}  // namespace

double bump_derivative(double s) {
  if (s >= 1.0) return 0.0;
  double q = 1.0 - s * s;
  return profile_bump(s) * (-2.0 * s / (q * q));
}

ScalarField radial_bump(const GridSpec& g, double R) {
  ScalarField f(g);
  for_nodes(g, [&](std::size_t idx, const Vec3& x) { f.values[idx] = profile_bump(norm(x) / R); });
  return f;
}

VectorField radial_bump_gradient(const GridSpec& g, double R) {
  VectorField f(g);
  for_nodes(g, [&](std::size_t idx, const Vec3& x) {
    double r = norm(x);
    if (r > 0.0) f.set(idx, (bump_derivative(r / R) / (R * r)) * x);
  });
  return f;
}

VectorField radial_bump_curl(const GridSpec& g, double R) {
  VectorField f(g);
  for_nodes(g, [&](std::size_t idx, const Vec3& x) {
    double r = norm(x);
    if (r == 0.0) return;
    double c = bump_derivative(r / R) / (R * r);
    f.set(idx, {c * x.y, -c * x.x, 0.0});
  });
  return f;
}

VectorField random_smooth_current(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double L = g.extent;
  struct Lobe {
    Vec3 c;
    double r;
    Vec3 a;
    std::array<Vec3, 3> B;
  };
  std::vector<Lobe> lobes(3);
  for (auto& lobe : lobes) {
    lobe.r = L * (0.1 + 0.15 * (0.5 + 0.5 * unit(rng)));
    double room = 0.5 * L - lobe.r;
    lobe.c = {room * unit(rng), room * unit(rng), room * unit(rng)};
    lobe.a = {unit(rng), unit(rng), unit(rng)};
    for (auto& row : lobe.B) row = {unit(rng) / lobe.r, unit(rng) / lobe.r, unit(rng) / lobe.r};
  }
  VectorField f(g);
  for_nodes(g, [&](std::size_t idx, const Vec3& x) {
    Vec3 sum{};
    for (const auto& lobe : lobes) {
      Vec3 d = x - lobe.c;
      double w = profile_bump(norm(d) / lobe.r);
      if (w == 0.0) continue;
      Vec3 v = lobe.a + Vec3{dot(lobe.B[0], d), dot(lobe.B[1], d), dot(lobe.B[2], d)};
      sum = sum + w * v;
    }
    f.set(idx, sum);
  });
  return f;
}

double enclosed_charge(const std::function<double(double)>& profile, double r, double support) {
  double top = std::min(r, support);
  if (top <= 0.0) return 0.0;
  return 4.0 * kPi * gauss5([&](double s) { return s * s * profile(s); }, 0.0, top, 400);
}

VectorField shell_theorem_field(const GridSpec& g, const std::function<double(double)>& profile, double support) {
  std::vector<double> radii;
  radii.reserve(g.size());
  for_nodes(g, [&](std::size_t, const Vec3& x) { radii.push_back(norm(x)); });
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::unordered_map<double, double> charge;
  charge.reserve(sorted.size());
  auto integrand = [&](double s) { return 4.0 * kPi * s * s * profile(s); };
  double q = 0.0, prev = 0.0;
  for (double r : sorted) {
    double top = std::min(r, support);
    if (top > prev) {
      q += gauss5(integrand, prev, top, 4);
      prev = top;
    }
    charge[r] = q;
  }

  VectorField f(g);
  for_nodes(g, [&](std::size_t idx, const Vec3& x) {
    double r = radii[idx];
    if (r > 0.0) f.set(idx, (charge[r] / (r * r * r)) * x);
  });
  return f;
}

double relative_l2(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid, "relative_l2");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    Vec3 d = a.at(i) - b.at(i);
    num += dot(d, d);
    den += dot(b.at(i), b.at(i));
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double relative_linf(const VectorField& a, const VectorField& b, double r_min) {
  require_same_grid(a.grid, b.grid, "relative_linf");
  double err = 0.0, ref = 0.0;
  for_nodes(a.grid, [&](std::size_t idx, const Vec3& x) {
    if (norm(x) < r_min) return;
    err = std::max(err, max_abs(a.at(idx) - b.at(idx)));
    ref = std::max(ref, max_abs(b.at(idx)));
  });
  return ref > 0.0 ? err / ref : err;
}

double min_ratio(const std::vector<double>& residuals) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i) best = std::min(best, residuals[i] / residuals[i + 1]);
  return best;
}

// ---- acceptance ------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::string join(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// One dt ladder: the same configuration at dt0, dt0/2, dt0/4, ...
struct Ladder {
  double epsilon = 0.0;
  std::vector<RunResult> levels;
  double seconds = 0.0;
};

class Context {
 public:
  explicit Context(const AcceptanceOptions& o) : opt_(o) {}

  const AcceptanceOptions& options() const { return opt_; }

  RunConfig base(double eps) const {
    RunConfig c;
    c.epsilon = eps;
    c.nodes = opt_.nodes;
    c.sampling = opt_.sampling;
    c.cadence = 2;
    return c;
  }

  RunConfig at_level(RunConfig c, int level) const {
    RunSetup s = resolve_setup(c);
    c.dt = s.horizon / (static_cast<double>(opt_.ladder_steps) * (1 << level));
    return c;
  }

  const Ladder& ladder(double eps) {
    for (const auto& l : ladders_)
      if (l.epsilon == eps) return l;
    Ladder l;
    l.epsilon = eps;
    auto t0 = Clock::now();
    for (int lev = 0; lev < opt_.ladder_levels; ++lev) l.levels.push_back(run(at_level(base(eps), lev)));
    l.seconds = seconds_since(t0);
    ladders_.push_back(std::move(l));
    return ladders_.back();
  }

  // Every dynamics run made so far.
  std::vector<const RunResult*> all_runs() const {
    std::vector<const RunResult*> out;
    for (const auto& l : ladders_)
      for (const auto& r : l.levels) out.push_back(&r);
    return out;
  }

  std::filesystem::path scratch() {
    if (scratch_.empty()) {
      std::random_device rd;
      scratch_ = std::filesystem::temp_directory_path() / ("rvprd-acceptance-" + std::to_string(rd()));
      std::filesystem::create_directories(scratch_);
    }
    return scratch_;
  }

  ~Context() {
    std::error_code ec;
    if (!scratch_.empty()) std::filesystem::remove_all(scratch_, ec);
  }

 private:
  AcceptanceOptions opt_;
  std::deque<Ladder> ladders_;
  std::filesystem::path scratch_;
};

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void criterion_h_eigen(CriterionResult& c) {
  auto t0 = Clock::now();
  GridSpec g{1.0, 64};
  VectorField grad = radial_bump_gradient(g, 0.5);
  VectorField expected = axpby(4.0 * kPi, grad, 0.0, grad);
  double spectral = relative_l2(apply_H_spectral(grad), expected);

  GridSpec q{1.0, 48};
  VectorField grad48 = radial_bump_gradient(q, 0.5);
  double cross = relative_l2(apply_H_quadrature(grad48, 4.0 * q.spacing()), apply_H_spectral(grad48));
  c.seconds = seconds_since(t0);
  c.max_residual = spectral;
  c.pass = spectral <= 1e-4 && cross <= 3e-2 && c.seconds <= 30.0;
  c.detail = "spectral rel L2 " + fmt(spectral) + " (<= 1e-4), quadrature vs spectral at n=48 " + fmt(cross) +
             " (<= 3e-2), " + fmt(c.seconds) + " s (<= 30)";
}

void criterion_l2_bound(CriterionResult& c) {
  auto t0 = Clock::now();
  GridSpec g{1.0, 64};
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    VectorField j = random_smooth_current(g, seed);
    double ratio = l2_norm(apply_H_spectral(j)) / (kCalderonZygmund * l2_norm(j));
    worst = std::max(worst, ratio);
  }
  c.seconds = seconds_since(t0);
  c.max_residual = worst;
  c.pass = worst <= 1.0 + 1e-10;
  c.detail = "max ||Hj|| / (4 pi ||j||) over 10 fields = " + fmt(worst);
}

void criterion_shell(CriterionResult& c) {
  auto t0 = Clock::now();
  GridSpec g{1.0, 64};
  const double R = 0.5;
  auto profile = [R](double s) { return profile_bump(s / R); };
  VectorField spectral = solve_field_spectral(radial_bump(g, R));
  double shell = relative_linf(spectral, shell_theorem_field(g, profile, R), 2.0 * g.spacing());

  GridSpec d{1.0, 32};
  ScalarField rho = radial_bump(d, R);
  VectorField coarse = solve_field_spectral(rho);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(1, d.nodes - 2);
  std::vector<Vec3> queries;
  std::vector<std::size_t> index;
  for (int q = 0; q < 20; ++q) {
    int i = pick(rng), j = pick(rng), k = pick(rng);
    queries.push_back(d.position(i, j, k));
    index.push_back(d.index(i, j, k));
  }
  std::vector<Vec3> direct = field_direct_oracle(rho, queries);
  double err = 0.0, ref = 0.0;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    err = std::max(err, max_abs(coarse.at(index[q]) - direct[q]));
    ref = std::max(ref, max_abs(direct[q]));
  }
  double direct_rel = err / ref;
  c.seconds = seconds_since(t0);
  c.max_residual = shell;
  c.pass = shell <= 1e-4 && direct_rel <= 1e-2;
  c.detail = "radial oracle rel Linf at n=64 " + fmt(shell) + " (<= 1e-4), direct sum at n=32 " + fmt(direct_rel) +
             " (<= 1e-2)";
}

const std::vector<double> kSweep = {0.0, 0.1, 0.5, 1.0};

void criterion_field_bound(CriterionResult& c, Context& ctx) {
  auto t0 = Clock::now();
  for (double eps : kSweep) ctx.ladder(eps);
  double worst = 0.0;
  auto runs = ctx.all_runs();
  for (const RunResult* r : runs) worst = std::max(worst, r->max_field_ratio);
  c.seconds = seconds_since(t0);
  c.max_residual = worst;
  c.pass = worst <= 1.01;
  c.detail = "max |E| / bound = " + fmt(worst) + " over " + std::to_string(runs.size()) + " runs";
}

void criterion_mass(CriterionResult& c, Context& ctx) {
  double worst = 0.0;
  for (const RunResult* r : ctx.all_runs())
    for (const auto& rec : r->records) worst = std::max(worst, std::fabs(rec.M / r->records.front().M - 1.0));
  c.max_residual = worst;
  c.pass = worst <= 1e-14;
  c.detail = "max |M/M0 - 1| = " + fmt(worst);
}

void criterion_dissipation(CriterionResult& c, Context& ctx) {
  bool ok = true;
  double seconds = 0.0, worst_order = std::numeric_limits<double>::infinity();
  std::string detail;
  for (double eps : {0.1, 0.5, 1.0}) {
    const Ladder& l = ctx.ladder(eps);
    seconds += l.seconds;
    std::vector<double> maxima;
    std::size_t violations = 0;
    for (const auto& r : l.levels) {
      maxima.push_back(max_of(dissipation_residual(r.records, eps)));
      violations += monotonicity_violations(r.records, eps).size();
    }
    double ratio = min_ratio(maxima);
    worst_order = std::min(worst_order, order_estimate(maxima));
    c.max_residual = std::max(c.max_residual, maxima.back());
    ok = ok && ratio >= 3.5 && violations == 0;
    detail += "eps=" + fmt(eps) + ": max|r| " + join(maxima) + " min ratio " + fmt(ratio) + ", " +
              std::to_string(violations) + " monotonicity violations; ";
  }
  c.seconds = seconds;
  c.order_estimate = worst_order;
  c.pass = ok && seconds <= 300.0;
  c.detail = detail + "runs " + fmt(seconds) + " s (<= 300)";
}

void criterion_chain(CriterionResult& c, Context& ctx) {
  const Ladder& l = ctx.ladder(0.0);
  std::array<std::vector<double>, 3> maxima;
  for (const auto& r : l.levels) {
    ChainResiduals ch = chain_residuals(r.records, 0.0, r.records.front().M);
    maxima[0].push_back(max_of(ch.dipole));
    maxima[1].push_back(max_of(ch.current));
    maxima[2].push_back(max_of(ch.field));
  }
  const char* names[3] = {"dD/dt=D1", "dD1/dt=D2+eps M D3", "dD2/dt=D3"};
  bool ok = true;
  double worst_order = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    double ratio = min_ratio(maxima[i]);
    ok = ok && ratio >= 3.5;
    worst_order = std::min(worst_order, order_estimate(maxima[i]));
    c.max_residual = std::max(c.max_residual, maxima[i].back());
    c.detail += std::string(names[i]) + ": " + join(maxima[i]) + " min ratio " + fmt(ratio) + "; ";
  }
  c.order_estimate = worst_order;
  c.seconds = l.seconds;
  c.pass = ok;
}

void criterion_envelope(CriterionResult& c, Context& ctx) {
  auto t0 = Clock::now();
  bool ok = true;
  double min_margin = std::numeric_limits<double>::infinity();
  for (double eps : kSweep) {
    const RunResult& r = ctx.ladder(eps).levels.back();
    EnvelopeCheck e = envelope_check(r.records, r.setup.envelope);
    ok = ok && e.pass;
    min_margin = std::min({min_margin, e.min_margin_p, e.min_margin_x});
  }
  const SupportEnvelope env = support_envelope(make_datum(DatumConfig{}));
  EnvelopeOdeResult ode = integrate_envelope_ode(env, 2.0 * env.a);
  double rel = std::fabs(ode.blowup - env.a) / env.a;
  c.seconds = seconds_since(t0);
  c.max_residual = rel;
  c.pass = ok && rel <= 1e-6;
  c.detail = "min envelope margin " + fmt(min_margin) + " over " + std::to_string(kSweep.size()) +
             " runs; closed-form a " + fmt(env.a) + " vs ODE rel diff " + fmt(rel) + " (<= 1e-6)";
}

void criterion_picard(CriterionResult& c) {
  auto t0 = Clock::now();
  RunConfig cfg;
  PicardReport rep = picard_solve(cfg, 9);
  const auto& a = rep.alpha;  // a[n-1] = alpha_n
  const double floor = alpha_floor(rep);
  bool decreasing = true;
  for (std::size_t n = 2; n <= 8; ++n) decreasing = decreasing && (a[n] < a[n - 1] || a[n] <= floor);
  ConvergenceSummary sum = convergence_report(rep);

  RunConfig sym;
  sym.datum.minus = sym.datum.plus;
  PicardReport srep = picard_solve(sym, 4);
  bool exact = std::all_of(srep.alpha.begin() + 1, srep.alpha.end(), [](double v) { return v == 0.0; });

  c.seconds = seconds_since(t0);
  c.max_residual = a.back();
  c.pass = decreasing && !sum.super_envelope && !rep.diverging && exact;
  c.detail = "alpha " + join(a) + " (floor " + fmt(floor) + "), C-hat " + fmt(sum.ratio_constant) +
             (sum.super_envelope ? ", ratio above C/n envelope" : "") + "; symmetric data alpha " + join(srep.alpha);
}

void criterion_modes(CriterionResult& c, Context& ctx) {
  auto t0 = Clock::now();
  const int level = std::min(1, ctx.options().ladder_levels - 1);
  auto dir = ctx.scratch();
  std::vector<std::string> bytes;
  for (Mode m : {Mode::rvprd, Mode::reduction21, Mode::vlasov_poisson}) {
    RunConfig cfg = ctx.at_level(ctx.base(0.0), level);
    cfg.mode = m;
    auto path = dir / (std::string("modes-") + mode_name(m) + ".csv");
    write_moments_csv(path, m == Mode::rvprd ? ctx.ladder(0.0).levels[level].records : run(cfg).records);
    bytes.push_back(read_bytes(path));
  }
  bool identical = bytes[0] == bytes[1] && bytes[0] == bytes[2];

  RunConfig damped = ctx.at_level(ctx.base(1.0), level);
  damped.mode = Mode::reduction21;
  RunResult r = run(damped);
  std::size_t violations = monotonicity_violations(r.records, 1.0).size();
  c.seconds = seconds_since(t0);
  c.max_residual = max_of(dissipation_residual(r.records, 1.0));
  c.pass = identical && violations == 0;
  c.detail = std::string(identical ? "moments.csv identical" : "moments.csv differ") +
             " across rvprd/reduction21/vlasov_poisson; reduction21 eps=1: " + std::to_string(violations) +
             " energy increases beyond residual scale";
}

void criterion_threads(CriterionResult& c, Context& ctx) {
  auto t0 = Clock::now();
  const int saved = thread_count();
  RunConfig cfg = ctx.at_level(ctx.base(0.5), 0);
  RunSetup setup = resolve_setup(cfg);
  cfg.horizon = 4.0 * setup.dt;
  cfg.dt = setup.dt;
  auto dir = ctx.scratch();
  std::vector<std::string> bytes;
  for (int threads : {1, 2, 8}) {
    set_thread_count(threads);
    auto path = dir / ("threads-" + std::to_string(threads) + ".csv");
    write_moments_csv(path, run(cfg).records);
    bytes.push_back(read_bytes(path));
  }
  set_thread_count(saved);
  c.seconds = seconds_since(t0);
  c.pass = bytes[0] == bytes[1] && bytes[0] == bytes[2];
  c.detail = c.pass ? "moments.csv identical for 1, 2 and 8 workers" : "moments.csv differs between worker counts";
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  Context ctx(options);
  std::vector<CriterionResult> out;
  auto guarded = [&](int id, const char* key, const char* title, const std::function<void(CriterionResult&)>& f) {
    CriterionResult r;
    r.id = id;
    r.key = key;
    r.title = title;
    try {
      f(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    if (options.on_result) options.on_result(r);
    out.push_back(std::move(r));
  };
  guarded(1, "h_eigenrelation", "H eigenrelation on gradient fields", criterion_h_eigen);
  guarded(2, "h_l2_bound", "L2 bound of H", criterion_l2_bound);
  guarded(3, "shell_theorem", "Shell theorem and direct-sum oracle", criterion_shell);
  guarded(4, "field_sup_bound", "Field sup bound on every step", [&](CriterionResult& c) { criterion_field_bound(c, ctx); });
  guarded(5, "mass_conservation", "Bare mass conservation", [&](CriterionResult& c) { criterion_mass(c, ctx); });
  guarded(6, "dissipation_law", "Dissipation law", [&](CriterionResult& c) { criterion_dissipation(c, ctx); });
  guarded(7, "dipole_chain", "Dipole chain", [&](CriterionResult& c) { criterion_chain(c, ctx); });
  guarded(8, "envelope_domination", "Support envelope domination", [&](CriterionResult& c) { criterion_envelope(c, ctx); });
  guarded(9, "picard_contraction", "Picard contraction", criterion_picard);
  guarded(10, "mode_coincidence", "Mode coincidence at eps = 0", [&](CriterionResult& c) { criterion_modes(c, ctx); });
  guarded(11, "thread_determinism", "Determinism across worker counts", [&](CriterionResult& c) { criterion_threads(c, ctx); });
  return out;
}

}  // namespace rvprd::verify
