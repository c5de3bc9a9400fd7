#include "qtraj/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>

#include <omp.h>

#include "qtraj/analytic.hpp"
#include "qtraj/noise.hpp"
#include "qtraj/sde.hpp"

namespace qtraj::ensemble {

namespace {

// run one trajectory per stream and collect per-trajectory record rows;
// the reduction below walks trajectories in index order, so the result is
// independent of scheduling and thread count
template <typename RunOne>
std::vector<Trajectory> collect(int n_traj, Exec exec, RunOne&& run_one) {
  std::vector<Trajectory> rows(n_traj);
  std::exception_ptr error;

  if (exec == Exec::OpenMP) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n_traj; ++i) {
      try {
        rows[i] = run_one(i);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
  } else {
    for (int i = 0; i < n_traj; ++i) rows[i] = run_one(i);
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

SeriesStats reduce(const std::vector<Trajectory>& rows, bool weighted) {
  SeriesStats out;
  if (rows.empty()) return out;
  const std::size_t n_rec = rows.front().size();
  const int n_traj = static_cast<int>(rows.size());
  for (const auto& r : rows)
    if (r.size() != n_rec)
      throw NumericalError("ensemble reduce: trajectories recorded different row counts");

  out.times = rows.front().times;
  out.n_trajectories = n_traj;

  std::vector<double> x(n_traj), y(n_traj), n(n_traj), dx(n_traj), dy(n_traj), w2(n_traj);
  std::vector<double> logw(n_traj, 0.0);
  for (std::size_t j = 0; j < n_rec; ++j) {
    for (int i = 0; i < n_traj; ++i) {
      x[i] = rows[i].mean_x[j];
      y[i] = rows[i].mean_y[j];
      n[i] = rows[i].mean_n[j];
      dx[i] = rows[i].dx[j];
      dy[i] = rows[i].dy[j];
      w2[i] = std::exp(rows[i].norm2_log[j]);
      if (weighted) logw[i] = rows[i].norm2_log[j];
    }
    const auto mx = jackknife_weighted_mean(x, weighted ? logw : std::vector<double>{});
    const auto my = jackknife_weighted_mean(y, weighted ? logw : std::vector<double>{});
    const auto mn = jackknife_weighted_mean(n, weighted ? logw : std::vector<double>{});
    const auto mdx = jackknife_weighted_mean(dx, weighted ? logw : std::vector<double>{});
    const auto mdy = jackknife_weighted_mean(dy, weighted ? logw : std::vector<double>{});
    const auto mw = jackknife_weighted_mean(w2, {});
    out.mean_x.push_back(mx.value);
    out.se_x.push_back(mx.se);
    out.mean_y.push_back(my.value);
    out.se_y.push_back(my.se);
    out.mean_n.push_back(mn.value);
    out.se_n.push_back(mn.se);
    out.mean_dx.push_back(mdx.value);
    out.mean_dy.push_back(mdy.value);
    out.mean_norm2.push_back(mw.value);
    out.se_norm2.push_back(mw.se);
  }
  return out;
}

RunOptions ensemble_run_options(const Options& opt) {
  RunOptions ro;
  ro.record_every = opt.record_every;
  ro.record_states = false;
  ro.force_jump_records = false;  // rows must align across trajectories
  return ro;
}

}  // namespace

SeriesStats run_diffusive_ensemble(const InitialState& s, const ModelParams& p,
                                   const TimeGrid& grid, const Options& opt) {
  const RunOptions ro = ensemble_run_options(opt);
  auto rows = collect(opt.n_trajectories, opt.exec, [&](int i) {
    const auto path = noise::wiener_path(grid, opt.seed, static_cast<std::uint64_t>(i));
    return sde::run_diffusive(s, p, grid, path, ro);
  });
  return reduce(rows, opt.weighted);
}

SeriesStats run_counting_ensemble(const InitialState& s, const ModelParams& p,
                                  const TimeGrid& grid, const Options& opt) {
  const RunOptions ro = ensemble_run_options(opt);
  auto rows = collect(opt.n_trajectories, opt.exec, [&](int i) {
    noise::UniformStream thresholds(opt.seed, static_cast<std::uint64_t>(i));
    return sde::run_counting(s, p, grid, thresholds, ro);
  });
  return reduce(rows, false);
}

SeriesStats run_counting_linear_ensemble(const InitialState& s, const ModelParams& p,
                                         const TimeGrid& grid, double intensity,
                                         const Options& opt) {
  const RunOptions ro = ensemble_run_options(opt);
  auto rows = collect(opt.n_trajectories, opt.exec, [&](int i) {
    const auto path = noise::poisson_path(grid, opt.seed, static_cast<std::uint64_t>(i),
                                          intensity);
    return sde::run_counting_linear(s, p, grid, path, ro);
  });
  return reduce(rows, false);
}

SurvivalStats run_survival_ensemble(const InitialState& s, const ModelParams& p,
                                    const TimeGrid& grid, const Options& opt) {
  const RunOptions ro = ensemble_run_options(opt);
  auto rows = collect(opt.n_trajectories, opt.exec, [&](int i) {
    noise::UniformStream thresholds(opt.seed, static_cast<std::uint64_t>(i));
    return sde::run_counting(s, p, grid, thresholds, ro);
  });

  SurvivalStats out;
  out.times = rows.front().times;
  out.n_trajectories = opt.n_trajectories;
  const int n = opt.n_trajectories;
  for (std::size_t j = 0; j < out.times.size(); ++j) {
    const double t = out.times[j];
    int zero_jump = 0;
    double jumps = 0.0;
    for (const auto& r : rows) {
      int count = 0;
      for (double tj : r.jump_times)
        if (tj <= t + 1e-12) ++count;
      if (count == 0) ++zero_jump;
      jumps += count;
    }
    const double f = static_cast<double>(zero_jump) / n;
    out.closed_form.push_back(analytic::survival_probability(s, p, t));
    out.frequency.push_back(f);
    out.binom_se.push_back(std::sqrt(f * (1.0 - f) / n));
    out.mean_jumps.push_back(jumps / n);
  }
  return out;
}

double jackknife_se(const std::vector<double>& x) {
  return jackknife_weighted_mean(x, {}).se;
}

WeightedMean jackknife_weighted_mean(const std::vector<double>& x,
                                     const std::vector<double>& logw) {
  const std::size_t n = x.size();
  WeightedMean wm;
  if (n == 0) return wm;
  std::vector<double> w(n, 1.0);
  if (!logw.empty()) {
    if (logw.size() != n) throw NumericalError("jackknife: weight length mismatch");
    const double wmax = *std::max_element(logw.begin(), logw.end());
    for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(logw[i] - wmax);
  }
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s0 += w[i];
    s1 += w[i] * x[i];
  }
  wm.value = s1 / s0;
  if (n == 1) return wm;

  // leave-one-out means of the ratio estimator
  double loo_sum = 0.0;
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    loo[i] = (s1 - w[i] * x[i]) / (s0 - w[i]);
    loo_sum += loo[i];
  }
  const double loo_mean = loo_sum / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) ss += (loo[i] - loo_mean) * (loo[i] - loo_mean);
  wm.se = std::sqrt((static_cast<double>(n) - 1.0) / n * ss);
  return wm;
}

}  // namespace qtraj::ensemble
