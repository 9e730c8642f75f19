#include "rvprd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "rvprd/errors.hpp"
#include "rvprd/picard.hpp"

namespace rvprd {

double schott_energy(double ekin, double efield, const Vec3& D1, const Vec3& D2, double eps, double M) {
  return ekin + efield - eps * dot(D1, D2) + 0.5 * eps * eps * M * dot(D2, D2);
}

double mode_energy(Mode mode, double ekin, double efield, const Vec3& D1, const Vec3& D2, double eps, double M) {
  if (mode == Mode::rvprd && eps != 0.0) return schott_energy(ekin, efield, D1, D2, eps, M);
  return ekin + efield;
}

double uniform_spacing(const std::vector<MomentRecord>& series) {
  if (series.size() < 3) throw CadenceError("need at least 3 records, got " + std::to_string(series.size()));
  double dt = series[1].t - series[0].t;
  if (!(dt > 0.0)) throw CadenceError("non-increasing record times");
  for (std::size_t k = 1; k + 1 < series.size(); ++k) {
    double d = series[k + 1].t - series[k].t;
    if (std::fabs(d - dt) > 1e-9 * dt)
      throw CadenceError("non-uniform cadence at record " + std::to_string(k) + ": " + std::to_string(d) +
                         " vs " + std::to_string(dt));
  }
  return dt;
}

std::vector<double> dissipation_residual(const std::vector<MomentRecord>& series, double eps) {
  double dt = uniform_spacing(series);
  std::vector<double> r(series.size() - 1);
  for (std::size_t k = 0; k + 1 < series.size(); ++k) {
    Vec3 mid = 0.5 * (series[k].dip.D2 + series[k + 1].dip.D2);
    r[k] = (series[k + 1].eschott - series[k].eschott) / dt + eps * dot(mid, mid);
  }
  return r;
}

std::vector<std::size_t> monotonicity_violations(const std::vector<MomentRecord>& series, double eps) {
  double dt = uniform_spacing(series);
  auto r = dissipation_residual(series, eps);
  std::vector<std::size_t> bad;
  for (std::size_t k = 0; k + 1 < series.size(); ++k)
    if (series[k + 1].eschott > series[k].eschott + std::fabs(r[k]) * dt) bad.push_back(k);
  return bad;
}

ChainResiduals chain_residuals(const std::vector<MomentRecord>& series, double eps, double M) {
  double dt = uniform_spacing(series);
  ChainResiduals c;
  for (std::size_t k = 1; k + 1 < series.size(); ++k) {
    const DipoleSet& a = series[k - 1].dip;
    const DipoleSet& m = series[k].dip;
    const DipoleSet& b = series[k + 1].dip;
    double inv = 1.0 / (2.0 * dt);
    c.dipole.push_back(max_abs(inv * (b.D - a.D) - m.D1));
    c.current.push_back(max_abs(inv * (b.D1 - a.D1) - (m.D2 + (eps * M) * m.D3)));
    c.field.push_back(max_abs(inv * (b.D2 - a.D2) - m.D3));
  }
  return c;
}

EnvelopeCheck envelope_check(const std::vector<MomentRecord>& series, const SupportEnvelope& env) {
  EnvelopeCheck out;
  for (std::size_t k = 0; k < series.size(); ++k) {
    double mp = env.P(series[k].t) - series[k].maxp;
    double mx = env.X(series[k].t) - series[k].maxx;
    out.min_margin_p = std::min(out.min_margin_p, mp);
    out.min_margin_x = std::min(out.min_margin_x, mx);
    if ((mp < 0.0 || mx < 0.0) && out.pass) {
      out.pass = false;
      out.first_failure = k;
    }
  }
  return out;
}

double alpha_floor(const PicardReport& report) { return 1e-13 * (1.0 + report.grid.extent); }

ConvergenceSummary convergence_report(const PicardReport& report) {
  if (report.alpha.size() < 4) throw ConvergenceError("convergence report needs at least 4 iterations");
  ConvergenceSummary s;
  const auto& a = report.alpha;  // a[n-1] = alpha_n
  s.exact = std::all_of(a.begin() + 1, a.end(), [](double v) { return v == 0.0; });
  if (s.exact) return s;

  // Below this the iterates agree to rounding of the phase-space coordinates.
  const double floor = alpha_floor(report);
  auto resolved = [&](std::size_t n) { return n >= 1 && n <= a.size() && a[n - 1] > floor; };
  for (std::size_t n = 1; n <= a.size(); ++n)
    if (resolved(n)) s.last_resolved = n;

  for (std::size_t n = 1; n <= 2; ++n)
    if (resolved(n) && resolved(n + 1)) s.ratio_constant = std::max(s.ratio_constant, n * a[n] / a[n - 1]);
  for (std::size_t n = 3; n + 1 <= a.size(); ++n)
    if (resolved(n) && resolved(n + 1) && a[n] / a[n - 1] > 1.5 * s.ratio_constant / n) s.super_envelope = true;

  std::vector<double> xs, ys;
  for (std::size_t n = 1; n <= a.size(); ++n)
    if (resolved(n)) {
      xs.push_back(static_cast<double>(n - 1));
      ys.push_back(std::log(a[n - 1]) + std::lgamma(static_cast<double>(n)));
    }
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= xs.size();
    my /= xs.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double slope = sxy / sxx;
    double c0 = my - slope * mx;
    double lift = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) lift = std::max(lift, ys[i] - (c0 + slope * xs[i]));
    c0 += lift;
    s.fitted_c3t = std::exp(slope);
    s.log_constant = c0;
    for (std::size_t i = 0; i < xs.size(); ++i) s.residuals.push_back(c0 + slope * xs[i] - ys[i]);
  }
  return s;
}

std::string to_ndjson(const CheckResult& c) {
  nlohmann::json j;
  j["check"] = c.check;
  j["status"] = c.pass ? "pass" : "fail";
  j["max_residual"] = c.max_residual;
  if (c.order_estimate) j["order_estimate"] = *c.order_estimate; else j["order_estimate"] = nullptr;
  return j.dump();
}

double order_estimate(const std::vector<double>& r) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < r.size(); ++i) best = std::min(best, std::log2(r[i] / r[i + 1]));
  return best;
}

}  // namespace rvprd
