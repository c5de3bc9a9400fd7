#ifndef QTRAJ_LINDBLAD_HPP
#define QTRAJ_LINDBLAD_HPP

#include <vector>

#include "qtraj/types.hpp"

namespace qtraj::lindblad {

/// Master-equation right-hand side:
/// -i[H, rho] + mu (a rho a† - (a†a rho + rho a†a)/2), H = omega (n + 1/2).
Mat lindblad_rhs(const Mat& rho, const ModelParams& p);

Mat pure_density(const Vec& phi);

struct MasterSeries {
  std::vector<double> times;
  std::vector<double> mean_x, mean_y, mean_n, dx, dy, trace_log;
};

/// Classic fixed-step 4th-order integration with per-step re-hermitization;
/// aborts if the trace drifts beyond 1e-8.
MasterSeries integrate_master(const Mat& rho0, const ModelParams& p, const TimeGrid& grid,
                              int record_every = 1);

}  // namespace qtraj::lindblad

#endif
