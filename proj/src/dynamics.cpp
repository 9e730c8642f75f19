#include "rvprd/dynamics.hpp"

#include <cmath>

#include "rvprd/errors.hpp"
#include "rvprd/field_solver.hpp"
#include "rvprd/parallel.hpp"

namespace rvprd {

namespace {

Spectrum difference(const Spectrum& a, const Spectrum& b) {
  Spectrum out(a.size());
  parallel_ranges(a.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t m = lo; m < hi; ++m) out[m] = a[m] - b[m];
  });
  return out;
}

double field_ratio(const SimState& s) {
  ScalarField net = axpby(1.0, s.rho_plus, -1.0, s.rho_minus);
  double bound = field_sup_bound(net);
  double emax = max_norm(s.E);
  if (bound == 0.0) return emax == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return emax / bound;
}

// Positions changed: rebuild plans, densities, their spectra and E.
void refresh_density(SimState& s) {
  const auto& solver = solver_for(s.grid);
  s.plan_plus = make_deposit_plan(s.plus, s.grid, s.t);
  s.plan_minus = make_deposit_plan(s.minus, s.grid, s.t);
  s.rho_plus = deposit_density(s.plan_plus, s.plus);
  s.rho_minus = deposit_density(s.plan_minus, s.minus);
  require_half_domain(s.rho_plus, "positive-species density");
  require_half_domain(s.rho_minus, "negative-species density");
  s.rho_plus_hat = solver.transform(s.rho_plus);
  s.rho_minus_hat = solver.transform(s.rho_minus);
  s.rho_hat = difference(s.rho_plus_hat, s.rho_minus_hat);
  s.E = solver.field(s.rho_hat);
  s.field_ratio = field_ratio(s);
}

// Momenta changed: currents, their spectra and D3.
void refresh_current(SimState& s) {
  const auto& solver = solver_for(s.grid);
  s.j_plus = deposit_current(s.plan_plus, s.plus);
  s.j_minus = deposit_current(s.plan_minus, s.minus);
  s.j_plus_hat = solver.transform(s.j_plus);
  s.j_minus_hat = solver.transform(s.j_minus);
  s.dipoles.D3 = d3_from_spectra(solver, s.rho_plus_hat, s.rho_minus_hat, s.j_plus_hat, s.j_minus_hat);
}

void kick(ParticleEnsemble& e, const std::vector<Vec3>& field, const Vec3& uniform, double tau) {
  const double c = tau * e.sign;
  parallel_for(e.size(), [&](std::size_t i) { e.p[i] += c * (field[i] + uniform); });
}

void drift(ParticleEnsemble& e, double dt, const Vec3& shift) {
  parallel_for(e.size(), [&](std::size_t i) { e.x[i] += dt * (e.p[i] + shift); });
}

void drift(ParticleEnsemble& e, double dt) {
  parallel_for(e.size(), [&](std::size_t i) { e.x[i] += dt * e.p[i]; });
}

Vec3 solve3(const Mat3& A, const Vec3& b) {
  double det = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
               A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
               A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
  if (!(std::fabs(det) > 0.0)) throw Error("singular damping system in implicit half-kick");
  auto col = [&](int c) {
    Mat3 M = A;
    for (int r = 0; r < 3; ++r) M[r][c] = b[r];
    return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
           M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  };
  return {col(0) / det, col(1) / det, col(2) / det};
}

// D2 = h^3 sum E (rho+ + rho-) for trial positions (reduction21 predictor).
Vec3 trial_d2(const SimState& s, const ParticleEnsemble& plus, const ParticleEnsemble& minus) {
  const auto& solver = solver_for(s.grid);
  auto pp = make_deposit_plan(plus, s.grid, s.t);
  auto pm = make_deposit_plan(minus, s.grid, s.t);
  ScalarField rp = deposit_density(pp, plus);
  ScalarField rm = deposit_density(pm, minus);
  require_half_domain(rp, "positive-species density");
  require_half_domain(rm, "negative-species density");
  Spectrum net = difference(solver.transform(rp), solver.transform(rm));
  VectorField E = solver.field(net);
  auto acc = reproducible_sums(s.grid.size(), 3, [&](std::size_t i, std::span<double> out) {
    double m = rp.values[i] + rm.values[i];
    for (int a = 0; a < 3; ++a) out[a] += E.comp[a][i] * m;
  });
  double h3 = s.grid.cell_volume();
  return {h3 * acc[0], h3 * acc[1], h3 * acc[2]};
}

}  // namespace

SimState make_state(ParticleEnsemble plus, ParticleEnsemble minus, const GridSpec& grid, Mode mode, double eps,
                    double t) {
  SimState s;
  s.t = t;
  s.mode = mode;
  s.epsilon = mode == Mode::vlasov_poisson ? 0.0 : eps;
  s.grid = grid;
  s.plus = std::move(plus);
  s.minus = std::move(minus);
  s.mass = bare_mass(s.plus, s.minus);
  refresh_density(s);
  refresh_current(s);
  DipoleSet d = grid_moments(s.rho_plus, s.rho_minus, s.j_plus, s.j_minus, s.E);
  d.D3 = s.dipoles.D3;
  d.t = t;
  s.dipoles = d;
  return s;
}

SimState initial_state(const RunConfig& config, const RunSetup& setup) {
  ParticleEnsemble plus = sample_particles(setup.datum, Species::plus, config.sampling);
  ParticleEnsemble minus = sample_particles(setup.datum, Species::minus, config.sampling);
  return make_state(std::move(plus), std::move(minus), setup.grid, config.mode, config.epsilon);
}

void step(SimState& s, double dt) {
  const double half = 0.5 * dt;
  const double eps = s.epsilon;
  const bool damped = eps != 0.0;
  std::vector<Vec3> ep, em;

  // opening half-kick
  Vec3 uniform{};
  if (damped && s.mode == Mode::rvprd) uniform = eps * s.dipoles.D3;
  gather(s.plan_plus, s.E, ep);
  gather(s.plan_minus, s.E, em);
  kick(s.plus, ep, uniform, half);
  kick(s.minus, em, uniform, half);

  // drift
  if (damped && s.mode == Mode::reduction21) {
    const Vec3 d2_old = s.dipoles.D2;
    ParticleEnsemble pp = s.plus, pm = s.minus;
    drift(pp, dt, eps * d2_old);
    drift(pm, dt, -eps * d2_old);
    Vec3 d2_trial = trial_d2(s, pp, pm);
    Vec3 avg = 0.5 * (d2_old + d2_trial);
    drift(s.plus, dt, eps * avg);
    drift(s.minus, dt, -eps * avg);
  } else {
    drift(s.plus, dt);
    drift(s.minus, dt);
  }
  s.t += dt;
  refresh_density(s);

  // closing half-kick with the new field
  gather(s.plan_plus, s.E, ep);
  gather(s.plan_minus, s.E, em);
  kick(s.plus, ep, Vec3{}, half);
  kick(s.minus, em, Vec3{}, half);
  refresh_current(s);

  if (damped && s.mode == Mode::rvprd) {
    // p <- p + (dt/2) s eps D3 with D3 evaluated at the updated momenta:
    // (I + 2 eps dt M) D3 = D3(p), M[r][c] = h^3 sum rho+ H(rho- e_c)_r.
    const auto& solver = solver_for(s.grid);
    Mat3 M = solver.h_pairing_matrix(s.rho_plus_hat, s.rho_minus_hat);
    Mat3 A{};
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) A[r][c] = (r == c ? 1.0 : 0.0) + 2.0 * eps * dt * M[r][c];
    Vec3 d3 = solve3(A, s.dipoles.D3);
    Vec3 u = eps * d3;
    std::vector<Vec3> none(std::max(s.plus.size(), s.minus.size()));
    kick(s.plus, none, u, half);
    kick(s.minus, none, u, half);
    // currents are linear in p: j^s += (dt/2) s eps D3 rho^s
    for (int a = 0; a < 3; ++a) {
      double cp = half * u[a], cm = -half * u[a];
      auto& jp = s.j_plus.comp[a];
      auto& jm = s.j_minus.comp[a];
      parallel_ranges(jp.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          jp[i] += cp * s.rho_plus.values[i];
          jm[i] += cm * s.rho_minus.values[i];
        }
      });
      auto& hp = s.j_plus_hat[a];
      auto& hm = s.j_minus_hat[a];
      parallel_ranges(hp.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
          hp[m] += cp * s.rho_plus_hat[m];
          hm[m] += cm * s.rho_minus_hat[m];
        }
      });
    }
    s.dipoles.D3 = d3;
  }

  DipoleSet d = grid_moments(s.rho_plus, s.rho_minus, s.j_plus, s.j_minus, s.E);
  d.D3 = s.dipoles.D3;
  d.t = s.t;
  s.dipoles = d;
}

MomentRecord make_record(const SimState& s) {
  MomentRecord r;
  r.t = s.t;
  r.M = s.mass;
  r.dip = s.dipoles;
  auto kin = [](const ParticleEnsemble& e) {
    return reproducible_sum(e.size(), [&](std::size_t i) { return e.w[i] * dot(e.p[i], e.p[i]); });
  };
  r.ekin = 0.5 * (kin(s.plus) + kin(s.minus));
  r.efield = solver_for(s.grid).self_energy(s.rho_hat);
  r.eschott = mode_energy(s.mode, r.ekin, r.efield, r.dip.D1, r.dip.D2, s.epsilon, s.mass);
  double mx = 0.0, mp = 0.0;
  for (const auto* e : {&s.plus, &s.minus})
    for (std::size_t i = 0; i < e->size(); ++i) {
      mx = std::max(mx, norm(e->x[i]));
      mp = std::max(mp, norm(e->p[i]));
    }
  r.maxx = mx;
  r.maxp = mp;
  return r;
}

RunResult run(const RunConfig& config, const RecordObserver& observer) {
  return run(config, resolve_setup(config), observer);
}

RunResult run(const RunConfig& config, const RunSetup& setup, const RecordObserver& observer) {
  RunResult out{setup, {}, 0.0, 0};
  SimState s = initial_state(config, setup);
  auto emit = [&] {
    out.records.push_back(make_record(s));
    if (observer) observer(out.records.back(), s);
  };
  out.max_field_ratio = s.field_ratio;
  emit();
  for (long k = 1; k <= setup.steps; ++k) {
    step(s, setup.dt);
    s.t = static_cast<double>(k) * setup.dt;
    s.dipoles.t = s.t;
    out.max_field_ratio = std::max(out.max_field_ratio, s.field_ratio);
    if (k % config.cadence == 0 || k == setup.steps) emit();
  }
  out.steps = setup.steps;
  return out;
}

}  // namespace rvprd
