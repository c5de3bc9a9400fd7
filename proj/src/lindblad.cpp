#include "qtraj/lindblad.hpp"

#include <cmath>

namespace qtraj::lindblad {

namespace {

// diagonal structure of H and a†a lets every term run in O(D^2)
void rhs_into(const Mat& rho, const ModelParams& p, Mat& out) {
  const auto d = rho.rows();
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double jj = static_cast<double>(j), kk = static_cast<double>(k);
      Complex v = Complex{0.0, -p.omega * (jj - kk)} * rho(j, k) -
                  0.5 * p.mu * (jj + kk) * rho(j, k);
      if (j + 1 < d && k + 1 < d)
        v += p.mu * std::sqrt((jj + 1.0) * (kk + 1.0)) * rho(j + 1, k + 1);
      out(j, k) = v;
    }
  }
}

struct RhoStats {
  double mean_x, mean_y, mean_n, dx, dy, trace;
};

RhoStats stats(const Mat& rho) {
  const auto d = rho.rows();
  Complex ea{0, 0}, ea2{0, 0};
  double en = 0.0, tr = 0.0, en2 = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double jj = static_cast<double>(j);
    tr += rho(j, j).real();
    en += jj * rho(j, j).real();
    en2 += jj * jj * rho(j, j).real();
    if (j + 1 < d) ea += std::sqrt(jj + 1.0) * rho(j + 1, j);
    if (j + 2 < d) ea2 += std::sqrt((jj + 1.0) * (jj + 2.0)) * rho(j + 2, j);
  }
  RhoStats s;
  s.trace = tr;
  s.mean_x = ea.real() / tr;
  s.mean_y = ea.imag() / tr;
  s.mean_n = en / tr;
  const double x2 = 0.25 * (2.0 * ea2.real() / tr + 2.0 * s.mean_n + 1.0);
  const double y2 = 0.25 * (2.0 * s.mean_n + 1.0 - 2.0 * ea2.real() / tr);
  s.dx = std::sqrt(std::max(0.0, x2 - s.mean_x * s.mean_x));
  s.dy = std::sqrt(std::max(0.0, y2 - s.mean_y * s.mean_y));
  return s;
}

}  // namespace

Mat lindblad_rhs(const Mat& rho, const ModelParams& p) {
  Mat out(rho.rows(), rho.cols());
  rhs_into(rho, p, out);
  return out;
}

Mat pure_density(const Vec& phi) { return phi * phi.adjoint(); }

MasterSeries integrate_master(const Mat& rho0, const ModelParams& p, const TimeGrid& grid,
                              int record_every) {
  grid.validate();
  p.validate();
  const double dt = grid.dt();
  if (p.mu * dt > 0.01 + 1e-12)
    throw ConfigError("integrate_master: mu * dt exceeds the 0.01 accuracy guard");

  Mat rho = rho0;
  Mat k1 = rho0, k2 = rho0, k3 = rho0, k4 = rho0, tmp = rho0;

  MasterSeries out;
  auto record = [&](int step) {
    if (step % record_every != 0 && step != grid.n_steps) return;
    const auto s = stats(rho);
    if (std::abs(s.trace - 1.0) > 1e-8)
      throw NumericalError("integrate_master: trace drifted to " + std::to_string(s.trace) +
                           " at t = " + std::to_string(grid.time(step)));
    out.times.push_back(grid.time(step));
    out.mean_x.push_back(s.mean_x);
    out.mean_y.push_back(s.mean_y);
    out.mean_n.push_back(s.mean_n);
    out.dx.push_back(s.dx);
    out.dy.push_back(s.dy);
    out.trace_log.push_back(std::log(s.trace));
  };
  record(0);

  for (int step = 0; step < grid.n_steps; ++step) {
    rhs_into(rho, p, k1);
    tmp = rho + (0.5 * dt) * k1;
    rhs_into(tmp, p, k2);
    tmp = rho + (0.5 * dt) * k2;
    rhs_into(tmp, p, k3);
    tmp = rho + dt * k3;
    rhs_into(tmp, p, k4);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (rho + rho.adjoint().eval());  // suppress Hermiticity drift
    record(step + 1);
  }
  return out;
}

}  // namespace qtraj::lindblad
