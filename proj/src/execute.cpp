#include "qtraj/execute.hpp"

#include <cmath>
#include <ostream>

#include <omp.h>

#include "qtraj/analytic.hpp"
#include "qtraj/ensemble.hpp"
#include "qtraj/fock.hpp"
#include "qtraj/io.hpp"
#include "qtraj/lindblad.hpp"
#include "qtraj/noise.hpp"
#include "qtraj/sde.hpp"

namespace qtraj {

namespace {

std::string out_path(const RunConfig& c, const std::string& name) {
  return c.output + "/" + name;
}

io::RunMetadata make_metadata(const RunConfig& c, int dim, double tail, int threads,
                              bool parallel) {
  io::RunMetadata m;
  m.config = c;
  m.resolved_dim = dim;
  m.tail_mass = tail;
  m.threads = threads;
  m.exec = parallel ? "openmp" : "serial";
  return m;
}

sde::CompareTolerances compare_tolerances(const Tolerances& t) {
  sde::CompareTolerances ct;
  ct.mean_x = t.max_mean_x;
  ct.mean_y = t.max_mean_y;
  ct.mean_n = t.max_mean_n;
  ct.dx = t.max_dx;
  ct.dy = t.max_dy;
  ct.infidelity = t.max_infidelity;
  return ct;
}

int run_single(const RunConfig& c, std::ostream& log) {
  const int dim = states::resolve_dim(c.initial, c.params);
  const Vec phi0 = states::build_initial(c.initial, dim);
  RunOptions opt;
  opt.record_every = c.record_every;

  Trajectory traj;
  if (c.mode == Mode::Diffusive) {
    const auto path = noise::wiener_path(c.grid, c.seed, 0);
    traj = sde::run_diffusive(c.initial, c.params, c.grid, path, opt);
  } else if (c.mode == Mode::Counting) {
    noise::UniformStream thresholds(c.seed, 0);
    traj = sde::run_counting(c.initial, c.params, c.grid, thresholds, opt);
  } else {  // analytic
    const auto path = noise::wiener_path(c.grid, c.seed, 0);
    traj = analytic::analytic_trajectory(c.initial, c.params, c.grid, path, opt);
  }
  io::write_file(out_path(c, "trajectory.csv"), io::trajectory_csv(traj));
  io::write_file(out_path(c, "metadata.json"),
                 io::metadata_json(make_metadata(c, dim, fock::tail_mass(phi0), 1, false)));
  log << "wrote " << out_path(c, "trajectory.csv") << " (" << traj.size() << " records)\n";
  return kExitOk;
}

int run_compare(const RunConfig& c, std::ostream& log) {
  const int dim = states::resolve_dim(c.initial, c.params);
  const Vec phi0 = states::build_initial(c.initial, dim);
  RunOptions opt;
  opt.record_every = c.record_every;
  opt.record_states = true;

  const auto path = noise::wiener_path(c.grid, c.seed, 0);
  const Trajectory numeric = sde::run_diffusive(c.initial, c.params, c.grid, path, opt);
  const Trajectory oracle = analytic::analytic_trajectory(c.initial, c.params, c.grid, path, opt);
  const auto report = sde::compare_to_analytic(numeric, oracle, compare_tolerances(c.tol));

  io::write_file(out_path(c, "trajectory.csv"), io::trajectory_csv(numeric));
  io::write_file(out_path(c, "oracle.csv"), io::trajectory_csv(oracle));
  io::write_file(out_path(c, "report.json"), io::report_json(report));
  io::write_file(out_path(c, "metadata.json"),
                 io::metadata_json(make_metadata(c, dim, fock::tail_mass(phi0), 1, false)));
  for (const auto& item : report.items)
    log << (item.pass ? "  ok   " : "  FAIL ") << item.name << ": max " << item.max_dev
        << " rms " << item.rms_dev << " tol " << item.tol << "\n";
  return report.pass() ? kExitOk : kExitToleranceExceeded;
}

int run_ensemble(const RunConfig& c, std::ostream& log, int threads) {
  const int dim = states::resolve_dim(c.initial, c.params);
  const Vec phi0 = states::build_initial(c.initial, dim);
  ensemble::Options opt;
  opt.n_trajectories = c.n_trajectories;
  opt.record_every = c.record_every;
  opt.seed = c.seed;
  opt.exec = ensemble::Exec::OpenMP;

  ensemble::SeriesStats stats;
  if (c.scheme == "counting") {
    opt.weighted = false;
    stats = ensemble::run_counting_ensemble(c.initial, c.params, c.grid, opt);
  } else {
    opt.weighted = true;
    stats = ensemble::run_diffusive_ensemble(c.initial, c.params, c.grid, opt);
  }
  io::write_file(out_path(c, "ensemble.csv"), io::ensemble_csv(stats));
  io::write_file(out_path(c, "ensemble_stats.json"), io::ensemble_stats_json(stats));
  io::write_file(out_path(c, "metadata.json"),
                 io::metadata_json(make_metadata(c, dim, fock::tail_mass(phi0), threads, true)));
  log << "averaged " << stats.n_trajectories << " trajectories at " << stats.times.size()
      << " times\n";
  return kExitOk;
}

int run_survival(const RunConfig& c, std::ostream& log, int threads) {
  const int dim = states::resolve_dim(c.initial, c.params);
  const Vec phi0 = states::build_initial(c.initial, dim);
  ensemble::Options opt;
  opt.n_trajectories = c.n_trajectories;
  opt.record_every = c.record_every;
  opt.seed = c.seed;
  opt.exec = ensemble::Exec::OpenMP;

  const auto stats = ensemble::run_survival_ensemble(c.initial, c.params, c.grid, opt);
  io::write_file(out_path(c, "survival.csv"), io::survival_csv(stats));
  io::write_file(out_path(c, "metadata.json"),
                 io::metadata_json(make_metadata(c, dim, fock::tail_mass(phi0), threads, true)));

  // a frequency further than 3 binomial standard errors from the closed form
  // (at any recorded time past t=0) is a tolerance failure
  bool ok = true;
  for (std::size_t i = 0; i < stats.times.size(); ++i) {
    if (stats.times[i] <= 0.0) continue;
    const double se = std::max(stats.binom_se[i], 1e-12);
    const double z = (stats.frequency[i] - stats.closed_form[i]) / se;
    if (std::abs(z) > 3.0) {
      ok = false;
      log << "  FAIL t=" << stats.times[i] << ": freq " << stats.frequency[i] << " vs P(t) "
          << stats.closed_form[i] << " (z = " << z << ")\n";
    }
  }
  return ok ? kExitOk : kExitToleranceExceeded;
}

int run_lindblad(const RunConfig& c, std::ostream& log) {
  const int dim = states::resolve_dim(c.initial, c.params);
  const Vec phi0 = states::build_initial(c.initial, dim);
  const auto series = lindblad::integrate_master(lindblad::pure_density(phi0), c.params,
                                                 c.grid, c.record_every);
  io::write_file(out_path(c, "master.csv"), io::master_csv(series));
  io::write_file(out_path(c, "metadata.json"),
                 io::metadata_json(make_metadata(c, dim, fock::tail_mass(phi0), 1, false)));
  log << "integrated master equation, " << series.times.size() << " records\n";
  return kExitOk;
}

}  // namespace

int execute(const RunConfig& config, std::ostream& log, int threads) {
  try {
    config.validate();
    if (threads > 0) omp_set_num_threads(threads);
    const int used = (threads > 0) ? threads : omp_get_max_threads();
    switch (config.mode) {
      case Mode::Diffusive:
      case Mode::Counting:
      case Mode::Analytic: return run_single(config, log);
      case Mode::Compare: return run_compare(config, log);
      case Mode::Ensemble: return run_ensemble(config, log, used);
      case Mode::Survival: return run_survival(config, log, used);
      case Mode::Lindblad: return run_lindblad(config, log);
    }
    throw ConfigError("unhandled mode");
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
}

}  // namespace qtraj
