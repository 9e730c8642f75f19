#include "rvprd/phase_space.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "rvprd/cic.hpp"
#include "rvprd/errors.hpp"
#include "rvprd/parallel.hpp"

namespace rvprd {

double bump(double s) {
  s = std::fabs(s);
  if (s >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

namespace {

double bump_derivative(double s) {
  if (s >= 1.0) return 0.0;
  double q = 1.0 - s * s;
  return bump(s) * (-2.0 * s / (q * q));
}

// Composite 5-point Gauss-Legendre on [a, b].
template <class F>
double gauss_legendre(F f, double a, double b, int panels) {
  static constexpr std::array<double, 5> xs = {0.0, -0.5384693101056831, 0.5384693101056831,
                                               -0.9061798459386640, 0.9061798459386640};
  static constexpr std::array<double, 5> ws = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                               0.2369268850561891, 0.2369268850561891};
  double h = (b - a) / panels, sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    double mid = a + (k + 0.5) * h;
    for (int q = 0; q < 5; ++q) sum += ws[q] * f(mid + 0.5 * h * xs[q]);
  }
  return 0.5 * h * sum;
}

DatumNorms compute_norms(const SpeciesProfile& s, double rx, double rp) {
  DatumNorms n;
  double ball = bump_ball_integral();
  n.sup = s.amplitude;
  n.l1 = s.amplitude * (rx * rx * rx * ball) * (rp * rp * rp * ball);
  double dmax = 0.0;
  for (int i = 0; i < 20000; ++i) dmax = std::max(dmax, std::fabs(bump_derivative(i / 20000.0)));
  n.sobolev = s.amplitude * std::max({1.0, dmax / rx, dmax / rp});
  return n;
}

}  // namespace

double bump_ball_integral() {
  static const double value =
      4.0 * std::numbers::pi * gauss_legendre([](double s) { return s * s * bump(s); }, 0.0, 1.0, 400);
  return value;
}

InitialDatum::InitialDatum(double spatial_radius, double momentum_radius, SpeciesProfile plus,
                           SpeciesProfile minus)
    : rx_(spatial_radius), rp_(momentum_radius), plus_(plus), minus_(minus) {
  if (!(rx_ > 0.0) || !(rp_ > 0.0)) throw Error("datum radii must be positive");
  if (plus_.amplitude < 0.0 || minus_.amplitude < 0.0) throw Error("datum amplitudes must be non-negative");
  norms_[0] = compute_norms(plus_, rx_, rp_);
  norms_[1] = compute_norms(minus_, rx_, rp_);
}

InitialDatum InitialDatum::symmetric(double amplitude, double radius) {
  SpeciesProfile s{amplitude, {}, {}};
  return InitialDatum(radius, radius, s, s);
}

double InitialDatum::evaluate(Species s, const Vec3& x, const Vec3& p) const {
  const auto& sp = profile(s);
  double bx = bump(norm(x - sp.center_x) / rx_);
  if (bx == 0.0) return 0.0;
  return sp.amplitude * bx * bump(norm(p - sp.center_p) / rp_);
}

double InitialDatum::support_radius() const {
  double r = 0.0;
  for (const auto* sp : {&plus_, &minus_})
    r = std::max({r, norm(sp->center_x) + rx_, norm(sp->center_p) + rp_});
  return r;
}

InitialDatum InitialDatum::scaled(double factor) const {
  auto a = plus_, b = minus_;
  a.amplitude *= factor;
  b.amplitude *= factor;
  return InitialDatum(rx_, rp_, a, b);
}

InitialDatum InitialDatum::translated(const Vec3& shift) const {
  auto a = plus_, b = minus_;
  a.center_x += shift;
  b.center_x += shift;
  return InitialDatum(rx_, rp_, a, b);
}

ParticleEnsemble sample_particles(const InitialDatum& datum, Species s, int m, double budget) {
  if (m < 4) throw Error("sample_particles: nodes per dimension must be at least 4, got " + std::to_string(m));
  double lattice = std::pow(static_cast<double>(m), 6);
  if (lattice > budget)
    throw ResourceError("sample_particles: m^6 = " + std::to_string(lattice) + " exceeds particle budget " +
                        std::to_string(budget));

  const auto& sp = datum.profile(s);
  ParticleEnsemble e;
  e.sign = charge_sign(s);
  double rx = datum.spatial_radius(), rp = datum.momentum_radius();
  double dx = 2.0 * rx / m, dp = 2.0 * rp / m;
  e.cell_volume = dx * dx * dx * dp * dp * dp;
  if (sp.amplitude == 0.0) return e;

  auto offsets = [m](double r, double d) {
    std::vector<double> o(m);
    for (int i = 0; i < m; ++i) o[i] = -r + (i + 0.5) * d;
    return o;
  };
  auto ox = offsets(rx, dx), op = offsets(rp, dp);

  // Separable profile: tabulate both factors on their 3D lattices.
  std::size_t m3 = static_cast<std::size_t>(m) * m * m;
  std::vector<double> bx(m3), bp(m3);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        std::size_t idx = (static_cast<std::size_t>(a) * m + b) * m + c;
        bx[idx] = bump(std::sqrt(ox[a] * ox[a] + ox[b] * ox[b] + ox[c] * ox[c]) / rx);
        bp[idx] = bump(std::sqrt(op[a] * op[a] + op[b] * op[b] + op[c] * op[c]) / rp);
      }

  for (std::size_t ix = 0; ix < m3; ++ix) {
    if (bx[ix] == 0.0) continue;
    std::size_t a = ix / (m * m), b = (ix / m) % m, c = ix % m;
    Vec3 x = sp.center_x + Vec3{ox[a], ox[b], ox[c]};
    for (std::size_t ip = 0; ip < m3; ++ip) {
      double shape = bx[ix] * bp[ip];
      if (!(shape >= kInclusionThreshold)) continue;
      std::size_t d = ip / (m * m), f = (ip / m) % m, g = ip % m;
      e.x.push_back(x);
      e.p.push_back(sp.center_p + Vec3{op[d], op[f], op[g]});
      e.w.push_back(sp.amplitude * shape * e.cell_volume);
    }
  }
  return e;
}

DepositPlan make_deposit_plan(const ParticleEnsemble& e, const GridSpec& grid, double time) {
  DepositPlan plan;
  plan.grid = grid;
  const int n = grid.nodes;
  const std::size_t np = e.size();
  plan.stencil.resize(np);
  for (std::size_t q = 0; q < np; ++q) {
    const Vec3& x = e.x[q];
    if (!in_safe_domain(grid, x.x, x.y, x.z))
      throw DomainOverflowError(q, time, "position (" + std::to_string(x.x) + ", " + std::to_string(x.y) +
                                             ", " + std::to_string(x.z) + ") outside [-L+2h, L-2h]^3");
    plan.stencil[q] = cic_stencil(grid, x.x, x.y, x.z);
  }
  // Stable counting sort by z layer. Layers of equal parity touch disjoint
  // node planes, so each parity pass can run in parallel while every node
  // still receives its contributions in a fixed order.
  plan.start.assign(n + 1, 0);
  for (const auto& s : plan.stencil) ++plan.start[s.k + 1];
  for (int k = 0; k < n; ++k) plan.start[k + 1] += plan.start[k];
  plan.order.resize(np);
  auto fill = plan.start;
  for (std::size_t q = 0; q < np; ++q) plan.order[fill[plan.stencil[q].k]++] = q;
  return plan;
}

namespace {

template <class Body>
void for_each_layer(const DepositPlan& plan, Body&& body) {
  const int n = plan.grid.nodes;
  for (int parity = 0; parity < 2; ++parity) {
    std::size_t layers = static_cast<std::size_t>((n - parity + 1) / 2);
    parallel_for(layers, [&](std::size_t li) {
      int k = static_cast<int>(2 * li) + parity;
      for (std::size_t o = plan.start[k]; o < plan.start[k + 1]; ++o) body(plan.order[o]);
    });
  }
}

}  // namespace

ScalarField deposit_density(const DepositPlan& plan, const ParticleEnsemble& e) {
  ScalarField rho(plan.grid);
  const GridSpec& grid = plan.grid;
  auto& r = rho.values;
  const double inv_vol = 1.0 / grid.cell_volume();
  for_each_layer(plan, [&](std::size_t q) {
    const auto& s = plan.stencil[q];
    double w = e.w[q] * inv_vol;
    for (int c = 0; c < 2; ++c)
      for (int b = 0; b < 2; ++b) {
        double wyz = w * s.wy[b] * s.wz[c];
        std::size_t row = grid.index(s.i, s.j + b, s.k + c);
        r[row] += s.wx[0] * wyz;
        r[row + 1] += s.wx[1] * wyz;
      }
  });
  return rho;
}

VectorField deposit_current(const DepositPlan& plan, const ParticleEnsemble& e) {
  VectorField j(plan.grid);
  const GridSpec& grid = plan.grid;
  auto& jx = j.comp[0];
  auto& jy = j.comp[1];
  auto& jz = j.comp[2];
  const double inv_vol = 1.0 / grid.cell_volume();
  for_each_layer(plan, [&](std::size_t q) {
    const auto& s = plan.stencil[q];
    double w = e.w[q] * inv_vol;
    const Vec3& p = e.p[q];
    for (int c = 0; c < 2; ++c)
      for (int b = 0; b < 2; ++b) {
        double wyz = w * s.wy[b] * s.wz[c];
        std::size_t row = grid.index(s.i, s.j + b, s.k + c);
        for (int a = 0; a < 2; ++a) {
          double ww = s.wx[a] * wyz;
          jx[row + a] += ww * p.x;
          jy[row + a] += ww * p.y;
          jz[row + a] += ww * p.z;
        }
      }
  });
  return j;
}

void gather(const DepositPlan& plan, const VectorField& field, std::vector<Vec3>& out) {
  const GridSpec& grid = plan.grid;
  out.resize(plan.stencil.size());
  parallel_for(plan.stencil.size(), [&](std::size_t q) {
    const auto& s = plan.stencil[q];
    double acc[3] = {0.0, 0.0, 0.0};
    for (int c = 0; c < 2; ++c)
      for (int b = 0; b < 2; ++b) {
        double wyz = s.wy[b] * s.wz[c];
        std::size_t row = grid.index(s.i, s.j + b, s.k + c);
        for (int a = 0; a < 2; ++a) {
          double ww = s.wx[a] * wyz;
          for (int d = 0; d < 3; ++d) acc[d] += ww * field.comp[d][row + a];
        }
      }
    out[q] = {acc[0], acc[1], acc[2]};
  });
}

Moments deposit_moments(const ParticleEnsemble& e, const GridSpec& grid, double time) {
  DepositPlan plan = make_deposit_plan(e, grid, time);
  return {deposit_density(plan, e), deposit_current(plan, e)};
}

double bare_mass(const ParticleEnsemble& plus, const ParticleEnsemble& minus) {
  double a = reproducible_sum(plus.size(), [&](std::size_t i) { return plus.w[i]; });
  double b = reproducible_sum(minus.size(), [&](std::size_t i) { return minus.w[i]; });
  return a + b;
}

}  // namespace rvprd
