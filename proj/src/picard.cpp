#include "rvprd/picard.hpp"

#include <cmath>

#include "rvprd/dynamics.hpp"
#include "rvprd/errors.hpp"
#include "rvprd/parallel.hpp"

namespace rvprd {

namespace {

struct History {
  std::vector<VectorField> E;
  std::vector<Vec3> D3;
  std::vector<Vec3> D2;
};

// Phase-space points of the tracked markers at every grid time.
using Track = std::vector<std::array<double, 6>>;

void append_markers(Track& track, const ParticleEnsemble& e, const std::vector<std::size_t>& idx) {
  for (std::size_t i : idx)
    track.push_back({e.x[i].x, e.x[i].y, e.x[i].z, e.p[i].x, e.p[i].y, e.p[i].z});
}

std::vector<std::size_t> pick_markers(std::size_t count, int wanted) {
  std::vector<std::size_t> idx;
  if (count == 0) return idx;
  std::size_t stride = std::max<std::size_t>(1, count / static_cast<std::size_t>(wanted));
  for (std::size_t i = 0; i < count && idx.size() < static_cast<std::size_t>(wanted); i += stride) idx.push_back(i);
  return idx;
}

void record_slice(const SimState& st, History& h, std::vector<MomentRecord>& records) {
  h.E.push_back(st.E);
  h.D3.push_back(st.dipoles.D3);
  h.D2.push_back(st.dipoles.D2);
  records.push_back(make_record(st));
}

// Interpolated force on one species at time t (grid interval j, weight theta).
void force(const History& h, std::size_t j, double theta, const DepositPlan& plan, double eps, bool uniform_kick,
           std::vector<Vec3>& out) {
  std::vector<Vec3> a, b;
  gather(plan, h.E[j], a);
  if (theta != 0.0) gather(plan, h.E[j + 1], b);
  Vec3 d3 = theta == 0.0 ? h.D3[j] : (1.0 - theta) * h.D3[j] + theta * h.D3[j + 1];
  Vec3 u = uniform_kick && eps != 0.0 ? eps * d3 : Vec3{};
  out.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Vec3 e = theta == 0.0 ? a[i] : (1.0 - theta) * a[i] + theta * b[i];
    out[i] = e + u;
  }
}

Vec3 d2_at(const History& h, std::size_t j, double theta) {
  return theta == 0.0 ? h.D2[j] : (1.0 - theta) * h.D2[j] + theta * h.D2[j + 1];
}

}  // namespace

PicardReport picard_solve(const RunConfig& config, int iterations) {
  if (iterations < 2) throw ConfigError("picard.iterations", "must be at least 2");
  validate_config(config);
  const PicardConfig& pc = config.picard;
  InitialDatum datum = make_datum(config.datum);
  SupportEnvelope env = support_envelope(datum);
  const double T = pc.horizon_fraction * env.a;
  if (!(T < env.a)) throw HorizonError(T, env.a);
  const double L = config.extent ? *config.extent : 2.5 * env.X(T);
  const GridSpec grid{L, pc.nodes};
  const int K = pc.time_points;
  const int sub = pc.substeps;
  const double dtg = T / K;
  const double tau = dtg / sub;
  const Mode mode = config.mode;
  const double eps = mode == Mode::vlasov_poisson ? 0.0 : config.epsilon;
  const bool uniform_kick = mode != Mode::reduction21;
  const bool shifted_drift = mode == Mode::reduction21 && eps != 0.0;

  const ParticleEnsemble plus0 = sample_particles(datum, Species::plus, pc.sampling);
  const ParticleEnsemble minus0 = sample_particles(datum, Species::minus, pc.sampling);
  const auto mk_plus = pick_markers(plus0.size(), pc.markers);
  const auto mk_minus = pick_markers(minus0.size(), pc.markers);

  PicardReport report;
  report.horizon = T;
  report.grid = grid;
  report.time_points = K;

  // Iterate 0: the identity map, so the history is that of f0 at every time.
  History hist;
  Track track;
  {
    SimState st = make_state(plus0, minus0, grid, mode, eps, 0.0);
    std::vector<MomentRecord> unused;
    for (int j = 0; j <= K; ++j) {
      record_slice(st, hist, unused);
      append_markers(track, plus0, mk_plus);
      append_markers(track, minus0, mk_minus);
    }
  }

  int growth = 0;
  for (int n = 1; n <= iterations; ++n) {
    ParticleEnsemble a = plus0, b = minus0;
    History next;
    Track next_track;
    std::vector<MomentRecord> records;
    SimState st = make_state(a, b, grid, mode, eps, 0.0);
    record_slice(st, next, records);
    append_markers(next_track, a, mk_plus);
    append_markers(next_track, b, mk_minus);

    std::vector<Vec3> fa, fb;
    for (int j = 0; j < K; ++j) {
      for (int s = 0; s < sub; ++s) {
        double th0 = static_cast<double>(s) / sub;
        double th1 = static_cast<double>(s + 1) / sub;
        std::size_t j1 = j;
        if (s + 1 == sub) { j1 = j + 1; th1 = 0.0; }
        double t0 = j * dtg + s * tau;
        // opening half-kick
        force(hist, j, th0, make_deposit_plan(a, grid, t0), eps, uniform_kick, fa);
        force(hist, j, th0, make_deposit_plan(b, grid, t0), eps, uniform_kick, fb);
        parallel_for(a.size(), [&](std::size_t i) { a.p[i] += (0.5 * tau) * fa[i]; });
        parallel_for(b.size(), [&](std::size_t i) { b.p[i] -= (0.5 * tau) * fb[i]; });
        // drift
        if (shifted_drift) {
          Vec3 d2 = 0.5 * (d2_at(hist, j, th0) + d2_at(hist, j1, th1));
          Vec3 sh = eps * d2;
          parallel_for(a.size(), [&](std::size_t i) { a.x[i] += tau * (a.p[i] + sh); });
          parallel_for(b.size(), [&](std::size_t i) { b.x[i] += tau * (b.p[i] - sh); });
        } else {
          parallel_for(a.size(), [&](std::size_t i) { a.x[i] += tau * a.p[i]; });
          parallel_for(b.size(), [&](std::size_t i) { b.x[i] += tau * b.p[i]; });
        }
        // closing half-kick
        double t1 = t0 + tau;
        force(hist, j1, th1, make_deposit_plan(a, grid, t1), eps, uniform_kick, fa);
        force(hist, j1, th1, make_deposit_plan(b, grid, t1), eps, uniform_kick, fb);
        parallel_for(a.size(), [&](std::size_t i) { a.p[i] += (0.5 * tau) * fa[i]; });
        parallel_for(b.size(), [&](std::size_t i) { b.p[i] -= (0.5 * tau) * fb[i]; });
      }
      st = make_state(a, b, grid, mode, eps, (j + 1) * dtg);
      record_slice(st, next, records);
      append_markers(next_track, a, mk_plus);
      append_markers(next_track, b, mk_minus);
    }

    double alpha = 0.0;
    for (std::size_t q = 0; q < track.size(); ++q) {
      double s2 = 0.0;
      for (int c = 0; c < 6; ++c) {
        double d = next_track[q][c] - track[q][c];
        s2 += d * d;
      }
      alpha = std::max(alpha, std::sqrt(s2));
    }
    double fd = 0.0, dd = 0.0;
    for (int j = 0; j <= K; ++j) {
      fd = std::max(fd, max_norm(axpby(1.0, next.E[j], -1.0, hist.E[j])));
      dd = std::max(dd, norm(next.D3[j] - hist.D3[j]));
    }
    if (!report.alpha.empty() && n > 3 && alpha > report.alpha.back()) ++growth; else growth = 0;
    if (growth >= 3) report.diverging = true;
    report.alpha.push_back(alpha);
    report.field_diff.push_back(fd);
    report.d3_diff.push_back(dd);
    report.records = std::move(records);
    hist = std::move(next);
    track = std::move(next_track);
  }
  return report;
}

}  // namespace rvprd
