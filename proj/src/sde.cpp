#include "qtraj/sde.hpp"

#include <cmath>
#include <limits>

#include "qtraj/fock.hpp"

namespace qtraj::sde {

namespace {

constexpr double kRenormLow = 1e-6;
constexpr double kRenormHigh = 1e6;

Vec drift_propagator(const ModelParams& p, double dt, int dim, double scalar_shift = 0.0) {
  // exp(-(K - shift) dt), K = i omega (n + 1/2) + (mu/2) n
  Vec prop(dim);
  for (int k = 0; k < dim; ++k) {
    const double kk = static_cast<double>(k);
    prop[k] = std::exp(Complex{(-0.5 * p.mu * kk + scalar_shift) * dt,
                               -p.omega * (kk + 0.5) * dt});
  }
  return prop;
}

void apply_lower_into(const Vec& phi, Vec& out) {
  const auto d = phi.size();
  for (Eigen::Index k = 0; k + 1 < d; ++k)
    out[k] = std::sqrt(static_cast<double>(k + 1)) * phi[k + 1];
  out[d - 1] = {0, 0};
}

struct Recorder {
  Trajectory traj;
  const RunOptions* opt;
  int n_steps;

  bool due(int step, bool jumped) const {
    if (step % opt->record_every == 0 || step == n_steps) return true;
    return jumped && opt->force_jump_records;
  }

  void record(int step, double t, const Vec& phi, double log_accum, bool jumped) {
    if (!due(step, jumped)) return;
    const auto st = fock::quad_stats(phi);
    traj.times.push_back(t);
    traj.mean_x.push_back(st.mean_x);
    traj.mean_y.push_back(st.mean_y);
    traj.mean_n.push_back(st.mean_n);
    traj.dx.push_back(st.dx);
    traj.dy.push_back(st.dy);
    traj.norm2_log.push_back(log_accum + std::log(fock::norm2(phi)));
    traj.jump.push_back(jumped ? 1 : 0);
    if (opt->record_states) traj.states.push_back(phi);
  }

  void record_dead(int step, double t, bool jumped) {
    if (!due(step, jumped)) return;
    traj.times.push_back(t);
    traj.mean_x.push_back(0.0);
    traj.mean_y.push_back(0.0);
    traj.mean_n.push_back(0.0);
    traj.dx.push_back(0.0);
    traj.dy.push_back(0.0);
    traj.norm2_log.push_back(-std::numeric_limits<double>::infinity());
    traj.jump.push_back(jumped ? 1 : 0);
    if (opt->record_states) traj.states.push_back(Vec());
  }
};

void check_finite(double norm_sq, double t) {
  if (!std::isfinite(norm_sq))
    throw NumericalError("state norm became non-finite at t = " + std::to_string(t) +
                         " despite the renormalization protocol");
}

// rescale phi toward unit norm when norm^2 leaves the safe window; the
// factored-out log is accumulated so the unnormalized norm stays recoverable
void renormalize_if_needed(Vec& phi, double& norm_sq, double& log_accum) {
  if (norm_sq > kRenormLow && norm_sq < kRenormHigh) return;
  if (norm_sq <= 0.0) throw NumericalError("state norm collapsed to zero");
  phi /= std::sqrt(norm_sq);
  log_accum += std::log(norm_sq);
  norm_sq = 1.0;
}

}  // namespace

Vec step_diffusive(const Vec& phi, const ModelParams& p, Complex dw, double dt) {
  const int dim = static_cast<int>(phi.size());
  const Vec prop = drift_propagator(p, dt, dim);
  Vec lowered(dim);
  apply_lower_into(phi, lowered);
  return prop.cwiseProduct(phi) + std::sqrt(p.mu) * dw * lowered;
}

Trajectory run_diffusive(const InitialState& s, const ModelParams& p, const TimeGrid& grid,
                         const noise::NoisePath& path, const RunOptions& opt) {
  grid.validate();
  p.validate();
  if (path.grid.n_steps != grid.n_steps || path.grid.t_max != grid.t_max)
    throw ConfigError("run_diffusive: noise path generated on a different grid");
  const int dim = states::resolve_dim(s, p);
  const double dt = grid.dt();

  Vec phi = states::build_initial(s, dim);
  const Vec prop = drift_propagator(p, dt, dim);
  const double root_mu = std::sqrt(p.mu);
  Vec lowered(dim);

  Recorder rec{{}, &opt, grid.n_steps};
  rec.traj.grid = grid;
  double log_accum = 0.0;
  rec.record(0, 0.0, phi, log_accum, false);

  for (int k = 0; k < grid.n_steps; ++k) {
    apply_lower_into(phi, lowered);
    phi = prop.cwiseProduct(phi) + (root_mu * path.dw[k]) * lowered;
    double n2 = fock::norm2(phi);
    check_finite(n2, grid.time(k + 1));
    renormalize_if_needed(phi, n2, log_accum);
    rec.record(k + 1, grid.time(k + 1), phi, log_accum, false);
  }
  return rec.traj;
}

Trajectory run_counting(const InitialState& s, const ModelParams& p, const TimeGrid& grid,
                        noise::UniformStream& thresholds, const RunOptions& opt) {
  grid.validate();
  p.validate();
  const int dim = states::resolve_dim(s, p);
  const double dt = grid.dt();

  Vec phi = states::build_initial(s, dim);
  const Vec prop = drift_propagator(p, dt, dim);
  Vec lowered(dim);

  Recorder rec{{}, &opt, grid.n_steps};
  rec.traj.grid = grid;
  double log_accum = 0.0;           // log of the accumulated linear norm^2
  double log_survival_ref = 0.0;    // its value right after the last jump
  double log_u = std::log(thresholds.next());
  rec.record(0, 0.0, phi, log_accum, false);

  for (int k = 0; k < grid.n_steps; ++k) {
    phi = prop.cwiseProduct(phi);
    double n2 = fock::norm2(phi);
    check_finite(n2, grid.time(k + 1));
    bool jumped = false;
    if (log_accum + std::log(n2) - log_survival_ref < log_u) {
      apply_lower_into(phi, lowered);
      const double jump_n2 = fock::norm2(lowered);
      if (jump_n2 > 1e-280) {
        // relative norm change ||a phi||^2 / ||phi||^2 folds into the log
        log_accum += std::log(jump_n2);
        phi = lowered / std::sqrt(jump_n2);
        n2 = 1.0;
        log_survival_ref = log_accum;
        log_u = std::log(thresholds.next());
        jumped = true;
        rec.traj.jump_times.push_back(grid.time(k + 1));
      }
    }
    renormalize_if_needed(phi, n2, log_accum);
    rec.record(k + 1, grid.time(k + 1), phi, log_accum, jumped);
  }
  return rec.traj;
}

Trajectory run_counting_linear(const InitialState& s, const ModelParams& p,
                               const TimeGrid& grid, const noise::PoissonPath& path,
                               const RunOptions& opt) {
  grid.validate();
  p.validate();
  if (path.grid.n_steps != grid.n_steps || path.grid.t_max != grid.t_max)
    throw ConfigError("run_counting_linear: reference path grid mismatch");
  const int dim = states::resolve_dim(s, p);
  const double dt = grid.dt();

  Vec phi = states::build_initial(s, dim);
  // -(K - mu/2): the scalar mu/2 compensator enters the drift exactly
  const Vec prop = drift_propagator(p, dt, dim, 0.5 * p.mu);
  Vec lowered(dim);

  Recorder rec{{}, &opt, grid.n_steps};
  rec.traj.grid = grid;
  double log_accum = 0.0;
  bool dead = false;  // the jump operator annihilated the state
  rec.record(0, 0.0, phi, log_accum, false);

  for (int k = 0; k < grid.n_steps; ++k) {
    const bool jumped = path.jumps[k] != 0;
    if (!dead) {
      phi = prop.cwiseProduct(phi);
      if (jumped) {
        apply_lower_into(phi, lowered);
        phi = lowered;  // phi + (a - I) phi
        rec.traj.jump_times.push_back(grid.time(k + 1));
      }
      double n2 = fock::norm2(phi);
      check_finite(n2, grid.time(k + 1));
      if (n2 * std::exp(log_accum) <= 0.0 || n2 == 0.0) {
        dead = true;
      } else {
        renormalize_if_needed(phi, n2, log_accum);
      }
    }
    if (dead)
      rec.record_dead(k + 1, grid.time(k + 1), jumped);
    else
      rec.record(k + 1, grid.time(k + 1), phi, log_accum, jumped);
  }
  return rec.traj;
}

bool ErrorReport::pass() const {
  for (const auto& i : items)
    if (!i.pass) return false;
  return true;
}

ErrorReport compare_to_analytic(const Trajectory& numeric, const Trajectory& oracle,
                                const CompareTolerances& tol) {
  if (numeric.size() != oracle.size())
    throw ConfigError("compare_to_analytic: trajectories have different record counts");
  for (std::size_t i = 0; i < numeric.size(); ++i)
    if (std::abs(numeric.times[i] - oracle.times[i]) > 1e-12 * std::max(1.0, numeric.times[i]))
      throw ConfigError("compare_to_analytic: grid mismatch at record " + std::to_string(i));

  ErrorReport rep;
  auto add = [&rep](const std::string& name, const std::vector<double>& a,
                    const std::vector<double>& b, double tolerance) {
    ObservableDeviation d;
    d.name = name;
    d.tol = tolerance;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double dev = std::abs(a[i] - b[i]);
      d.max_dev = std::max(d.max_dev, dev);
      sum_sq += dev * dev;
    }
    d.rms_dev = a.empty() ? 0.0 : std::sqrt(sum_sq / a.size());
    d.pass = d.max_dev <= tolerance;
    rep.items.push_back(d);
  };
  add("meanX", numeric.mean_x, oracle.mean_x, tol.mean_x);
  add("meanY", numeric.mean_y, oracle.mean_y, tol.mean_y);
  add("meanN", numeric.mean_n, oracle.mean_n, tol.mean_n);
  add("dX", numeric.dx, oracle.dx, tol.dx);
  add("dY", numeric.dy, oracle.dy, tol.dy);

  if (!numeric.states.empty() && numeric.states.size() == oracle.states.size()) {
    ObservableDeviation d;
    d.name = "infidelity";
    d.tol = tol.infidelity;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < numeric.states.size(); ++i) {
      const double inf = 1.0 - fock::fidelity(numeric.states[i], oracle.states[i]);
      d.max_dev = std::max(d.max_dev, inf);
      sum_sq += inf * inf;
    }
    d.rms_dev = std::sqrt(sum_sq / numeric.states.size());
    d.pass = d.max_dev <= d.tol;
    rep.items.push_back(d);
  }
  return rep;
}

}  // namespace qtraj::sde
