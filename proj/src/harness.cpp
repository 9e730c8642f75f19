#include "rvprd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "rvprd/envelope.hpp"
#include "rvprd/errors.hpp"
#include "rvprd/output.hpp"
#include "rvprd/picard.hpp"
#include "rvprd/verification.hpp"

namespace rvprd {

namespace fs = std::filesystem;

const char* command_name(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::picard: return "picard";
    case Command::envelope: return "envelope";
    case Command::selftest: return "selftest";
    case Command::sweep: return "sweep";
  }
  return "?";
}

Command parse_command(const std::string& s) {
  for (Command c : {Command::solve, Command::picard, Command::envelope, Command::selftest, Command::sweep})
    if (s == command_name(c)) return c;
  throw ConfigError("command", "unknown command '" + s + "' (solve, picard, envelope, selftest, sweep)");
}

namespace {

double max_abs_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CheckResult named(const char* check) {
  CheckResult c;
  c.check = check;
  return c;
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

void report(std::ostream& log, const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    log << (c.pass ? "pass " : "FAIL ") << c.check << "  max_residual=" << c.max_residual
        << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
}

struct SolveOutcome {
  RunResult result;
  std::vector<CheckResult> checks;
};

SolveOutcome solve_into(const RunConfig& config, const fs::path& out) {
  RunSetup setup = resolve_setup(config);
  RecordObserver observer;
  int snapshot = 0;
  if (config.snapshots) {
    fs::create_directories(out / "snapshots");
    observer = [&](const MomentRecord& rec, const SimState& s) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "%05d", snapshot++);
      write_snapshot(out / "snapshots" / (std::string("E_") + stem), s.E, rec.t);
      write_snapshot(out / "snapshots" / (std::string("rho_") + stem), axpby(1.0, s.rho_plus, -1.0, s.rho_minus),
                     rec.t);
    };
  }
  SolveOutcome o{run(config, setup, observer), {}};
  o.checks = solve_checks(o.result, config);
  write_moments_csv(out / "moments.csv", o.result.records);
  write_checks_ndjson(out / "checks.ndjson", o.checks);
  return o;
}

int do_solve(const RunConfig& config, const fs::path& out, std::ostream& log) {
  SolveOutcome o = solve_into(config, out);
  log << "solve: " << mode_name(config.mode) << " eps=" << config.epsilon << " T=" << o.result.setup.horizon
      << " steps=" << o.result.steps << " L=" << o.result.setup.grid.extent << "\n";
  report(log, o.checks);
  return all_pass(o.checks) ? 0 : 1;
}

int do_sweep(const RunConfig& config, const fs::path& out, std::ostream& log) {
  std::ostringstream table;
  table << "epsilon,T,steps,Eschott_0,Eschott_T,max_abs_residual,max_abs_D3,maxp,P_T,maxx,X_T,checks\n";
  std::vector<CheckResult> combined;
  for (double eps : config.sweep_epsilons) {
    RunConfig c = config;
    c.epsilon = eps;
    std::string tag = num(eps);
    SolveOutcome o = solve_into(c, out / ("eps_" + tag));
    const auto& recs = o.result.records;
    const auto& env = o.result.setup.envelope;
    double d3 = 0.0, maxp = 0.0, maxx = 0.0;
    for (const auto& r : recs) {
      d3 = std::max(d3, norm(r.dip.D3));
      maxp = std::max(maxp, r.maxp);
      maxx = std::max(maxx, r.maxx);
    }
    double T = o.result.setup.horizon;
    table << tag << "," << num(T) << "," << o.result.steps << "," << num(recs.front().eschott) << ","
          << num(recs.back().eschott) << "," << num(max_abs_of(dissipation_residual(recs, eps))) << "," << num(d3)
          << "," << num(maxp) << "," << num(env.P(T)) << "," << num(maxx) << "," << num(env.X(T)) << ","
          << (all_pass(o.checks) ? "pass" : "fail") << "\n";
    for (auto c2 : o.checks) {
      c2.check = "eps_" + tag + "/" + c2.check;
      combined.push_back(c2);
    }
    log << "sweep eps=" << tag << ": " << (all_pass(o.checks) ? "pass" : "FAIL") << "\n";
  }
  write_text(out / "comparison.csv", table.str());
  write_checks_ndjson(out / "checks.ndjson", combined);
  report(log, combined);
  return all_pass(combined) ? 0 : 1;
}

int do_picard(const RunConfig& config, const fs::path& out, std::ostream& log) {
  PicardReport rep = picard_solve(config, config.picard.iterations);
  write_picard_csv(out / "picard.csv", rep);
  ConvergenceSummary sum = convergence_report(rep);
  const auto& a = rep.alpha;
  const double floor = alpha_floor(rep);
  bool decreasing = true;
  for (std::size_t n = 2; n < a.size(); ++n) decreasing = decreasing && (a[n] < a[n - 1] || a[n] <= floor);
  std::vector<CheckResult> checks;
  CheckResult c;
  c.check = "picard_contraction";
  c.pass = decreasing && !sum.super_envelope && !rep.diverging;
  c.max_residual = a.back();
  c.detail = "C-hat=" + num(sum.ratio_constant) + " last_resolved=" + std::to_string(sum.last_resolved);
  checks.push_back(c);
  write_checks_ndjson(out / "checks.ndjson", checks);
  log << "picard: T=" << rep.horizon << " n=" << rep.grid.nodes << "\n";
  for (std::size_t n = 0; n < a.size(); ++n) log << "  alpha_" << n + 1 << " = " << a[n] << "\n";
  report(log, checks);
  return all_pass(checks) ? 0 : 1;
}

int do_envelope(const RunConfig& config, const fs::path& out, std::ostream& log) {
  SupportEnvelope env = support_envelope(make_datum(config.datum));
  double t_end = config.horizon.value_or(0.99 * env.a);
  if (t_end >= env.a) throw HorizonError(t_end, env.a);
  write_envelope_csv(out / "envelope.csv", env, t_end, 200);
  EnvelopeOdeResult ode = integrate_envelope_ode(env, 2.0 * env.a);
  CheckResult c;
  c.check = "blowup_time_vs_ode";
  c.max_residual = std::fabs(ode.blowup - env.a) / env.a;
  c.pass = c.max_residual <= 1e-6;
  write_checks_ndjson(out / "checks.ndjson", {c});
  log << "envelope: R0=" << env.R0 << " C1=" << env.C1 << " C2=" << env.C2 << " C3=" << env.C3 << " a=" << env.a
      << "\n";
  report(log, {c});
  return c.pass ? 0 : 1;
}

int do_selftest(const RunConfig& config, const fs::path& out, std::ostream& log) {
  verify::AcceptanceOptions opt;
  opt.nodes = config.nodes;
  opt.sampling = config.sampling;
  opt.on_result = [&](const verify::CriterionResult& r) {
    log << (r.pass ? "pass " : "FAIL ") << r.id << " " << r.title << ": " << r.detail << "\n" << std::flush;
  };
  std::vector<CheckResult> checks;
  for (const auto& r : verify::run_acceptance(opt))
    checks.push_back({r.key, r.pass, r.max_residual, r.order_estimate, r.detail});
  write_checks_ndjson(out / "checks.ndjson", checks);
  return all_pass(checks) ? 0 : 1;
}

}  // namespace

std::vector<CheckResult> solve_checks(const RunResult& result, const RunConfig& config) {
  const auto& recs = result.records;
  std::vector<CheckResult> out;

  CheckResult mass = named("mass_conservation");
  for (const auto& r : recs) mass.max_residual = std::max(mass.max_residual, std::fabs(r.M / recs.front().M - 1.0));
  mass.pass = mass.max_residual <= 1e-14;
  out.push_back(mass);

  CheckResult field = named("field_sup_bound");
  field.max_residual = result.max_field_ratio;
  field.pass = result.max_field_ratio <= 1.01;
  field.detail = "max |E| / bound";
  out.push_back(field);

  CheckResult env = named("envelope_domination");
  EnvelopeCheck e = envelope_check(recs, result.setup.envelope);
  env.pass = e.pass;
  env.max_residual = std::min(e.min_margin_p, e.min_margin_x);
  env.detail = "smallest margin to P(t), X(t)";
  out.push_back(env);

  if (recs.size() >= 3) {
    CheckResult mono = named("energy_monotone");
    mono.max_residual = max_abs_of(dissipation_residual(recs, config.epsilon));
    auto bad = monotonicity_violations(recs, config.epsilon);
    mono.pass = bad.empty();
    mono.detail = std::to_string(bad.size()) + " increases beyond |r_k| dt";
    out.push_back(mono);
  }
  return out;
}

int execute(const RunConfig& config, Command command, const fs::path& out, std::ostream& log) {
  fs::create_directories(out);
  switch (command) {
    case Command::solve: return do_solve(config, out, log);
    case Command::picard: return do_picard(config, out, log);
    case Command::envelope: return do_envelope(config, out, log);
    case Command::selftest: return do_selftest(config, out, log);
    case Command::sweep: return do_sweep(config, out, log);
  }
  return 1;
}

}  // namespace rvprd
