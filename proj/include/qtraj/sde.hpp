#ifndef QTRAJ_SDE_HPP
#define QTRAJ_SDE_HPP

#include <string>
#include <vector>

#include "qtraj/noise.hpp"
#include "qtraj/states.hpp"
#include "qtraj/trajectory.hpp"
#include "qtraj/types.hpp"

namespace qtraj::sde {

/// One diffusive step of the linear filtering equation: the diagonal drift
/// generator K = i omega (n + 1/2) + (mu/2) n is applied exactly over dt and
/// the measurement term sqrt(mu) a phi dW enters as the left-point (Ito)
/// increment. No normalization.
Vec step_diffusive(const Vec& phi, const ModelParams& p, Complex dw, double dt);

/// Integrate the linear diffusive equation along one noise path. Posterior
/// statistics are ratio-based, so the state is rescaled whenever its norm^2
/// leaves [1e-6, 1e6]; the accumulated log keeps norm2_log exact.
Trajectory run_diffusive(const InitialState& s, const ModelParams& p, const TimeGrid& grid,
                         const noise::NoisePath& path, const RunOptions& opt = {});

/// Jump (Monte-Carlo wave function) simulation of the counting record: exact
/// diagonal no-count propagation; when the accumulated survival probability
/// first drops below a uniform threshold, the annihilation jump is applied at
/// that grid point and a fresh threshold is drawn.
Trajectory run_counting(const InitialState& s, const ModelParams& p, const TimeGrid& grid,
                        noise::UniformStream& thresholds, const RunOptions& opt = {});

/// Literal linear counting filter driven by a supplied reference counting
/// path: d phi = -(K - mu/2) phi dt + (a - I) phi dN. Exposed for martingale
/// testing; its norm^2 is a reference-measure martingale when the path
/// intensity equals mu.
Trajectory run_counting_linear(const InitialState& s, const ModelParams& p,
                               const TimeGrid& grid, const noise::PoissonPath& path,
                               const RunOptions& opt = {});

struct ObservableDeviation {
  std::string name;
  double max_dev = 0.0;
  double rms_dev = 0.0;
  double tol = 0.0;
  bool pass = true;
};

struct ErrorReport {
  std::vector<ObservableDeviation> items;
  bool pass() const;
};

struct CompareTolerances {
  double mean_x = 1e-2;
  double mean_y = 1e-2;
  double mean_n = 1e-2;
  double dx = 1e-2;
  double dy = 1e-2;
  double infidelity = 1e-3;  // applied only when both trajectories carry states
};

/// Max/RMS deviations per observable between two trajectories recorded on the
/// identical grid and noise path.
ErrorReport compare_to_analytic(const Trajectory& numeric, const Trajectory& oracle,
                                const CompareTolerances& tol = {});

}  // namespace qtraj::sde

#endif
