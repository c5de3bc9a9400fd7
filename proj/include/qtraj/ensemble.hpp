#ifndef QTRAJ_ENSEMBLE_HPP
#define QTRAJ_ENSEMBLE_HPP

#include <cstdint>
#include <vector>

#include "qtraj/states.hpp"
#include "qtraj/types.hpp"

namespace qtraj::ensemble {

/// Execution policy for the trajectory loop. The serial path is the
/// reference implementation; the OpenMP path must produce bitwise-identical
/// results (per-trajectory streams, ordered reduction).
enum class Exec { Serial, OpenMP };

struct Options {
  int n_trajectories = 100;
  int record_every = 1;
  Exec exec = Exec::OpenMP;
  bool weighted = true;  // likelihood-weight (exp norm2_log) the posterior means;
                         // required for diffusive reference-measure ensembles,
                         // disabled for physical-measure (jump) ensembles
  std::uint64_t seed = 1;
};

/// Trajectory-averaged posterior statistics with jackknife standard errors.
/// mean_norm2 tracks E[exp(norm2_log)], the martingale diagnostic.
struct SeriesStats {
  std::vector<double> times;
  std::vector<double> mean_x, se_x;
  std::vector<double> mean_y, se_y;
  std::vector<double> mean_n, se_n;
  std::vector<double> mean_dx, mean_dy;
  std::vector<double> mean_norm2, se_norm2;
  int n_trajectories = 0;
};

SeriesStats run_diffusive_ensemble(const InitialState& s, const ModelParams& p,
                                   const TimeGrid& grid, const Options& opt);

/// Jump-simulation ensemble (physical measure, unweighted averages).
SeriesStats run_counting_ensemble(const InitialState& s, const ModelParams& p,
                                  const TimeGrid& grid, const Options& opt);

/// Literal linear counting filter under a reference Poisson process of the
/// given intensity; used for martingale checks.
SeriesStats run_counting_linear_ensemble(const InitialState& s, const ModelParams& p,
                                         const TimeGrid& grid, double intensity,
                                         const Options& opt);

/// Zero-count frequencies against the closed-form survival probability.
struct SurvivalStats {
  std::vector<double> times;
  std::vector<double> closed_form;   // P(t) per family
  std::vector<double> frequency;     // Monte-Carlo zero-jump fraction
  std::vector<double> binom_se;      // sqrt(f(1-f)/n)
  std::vector<double> mean_jumps;    // average count number up to t
  int n_trajectories = 0;
};

SurvivalStats run_survival_ensemble(const InitialState& s, const ModelParams& p,
                                    const TimeGrid& grid, const Options& opt);

/// Jackknife standard error of the sample mean.
double jackknife_se(const std::vector<double>& x);

/// Weighted mean with leave-one-out jackknife error; weights are
/// exp(logw - max logw), uniform when logw is empty.
struct WeightedMean {
  double value = 0.0;
  double se = 0.0;
};
WeightedMean jackknife_weighted_mean(const std::vector<double>& x,
                                     const std::vector<double>& logw);

}  // namespace qtraj::ensemble

#endif
