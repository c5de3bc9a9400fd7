#ifndef QTRAJ_ANALYTIC_HPP
#define QTRAJ_ANALYTIC_HPP

#include <utility>
#include <vector>

#include "qtraj/noise.hpp"
#include "qtraj/states.hpp"
#include "qtraj/trajectory.hpp"
#include "qtraj/types.hpp"

namespace qtraj::analytic {

/// alpha(t) = alpha0 * exp(-(i omega + mu/2) t).
Complex alpha_decay(Complex alpha0, const ModelParams& p, double t);

/// Closed-form coefficients of the preserved-state solutions at one grid time.
struct DiffusiveCoefficients {
  double t = 0.0;
  Complex alpha_t{0.0, 0.0};
  double rho_t = 0.0;
  double theta_t = 0.0;       // unwrapped theta0 - 2 omega t
  Complex log_g{0.0, 0.0};    // log of the scalar prefactor G(t) (g(t) at rho=0)
  Complex chi_t{0.0, 0.0};    // sqrt(mu) * Ito integral of alpha(s) dW(s)
};

/// Coherent/cat coefficient series over a noise path (left-point Ito sums).
class CoherentSeries {
 public:
  CoherentSeries(Complex alpha0, const ModelParams& p, const noise::NoisePath& path);

  DiffusiveCoefficients at(int step) const;
  /// Unnormalized posterior state g(t)|alpha(t)>.
  Vec state(int step, int dim) const;
  /// Unnormalized two-branch cat state; parity +1 (even) or -1 (odd).
  Vec cat_state(int step, int parity, int dim) const;

 private:
  Complex alpha0_;
  ModelParams p_;
  TimeGrid grid_;
  std::vector<Complex> chi_;  // cumulative, chi_[k] at t = k dt
};

/// Squeezed-coherent coefficient series over a noise path.
class SqueezedSeries {
 public:
  SqueezedSeries(const SqueezeParams& xi0, Complex alpha0, const ModelParams& p,
                 const noise::NoisePath& path);

  DiffusiveCoefficients at(int step) const;
  /// Unnormalized posterior state G(t) S(xi(t)) |alpha(t)>.
  Vec state(int step, int dim) const;

 private:
  SqueezeParams xi0_;
  Complex alpha0_;
  ModelParams p_;
  TimeGrid grid_;
  std::vector<Complex> alpha_;  // alpha(t_k)
  std::vector<Complex> log_g_;  // log G(t_k)
};

/// Spec-level single-shot wrappers (t must lie on the path grid).
Vec coherent_diffusive(Complex alpha0, const ModelParams& p, const noise::NoisePath& path,
                       double t, int dim);
Vec cat_diffusive(Complex alpha0, int parity, const ModelParams& p,
                  const noise::NoisePath& path, double t, int dim);
DiffusiveCoefficients squeezed_coeffs(const SqueezeParams& xi0, Complex alpha0,
                                      const ModelParams& p, const noise::NoisePath& path,
                                      double t);
Vec squeezed_diffusive_state(const DiffusiveCoefficients& c, int dim);

/// Posterior quadrature means of the squeezed-coherent solution.
std::pair<double, double> squeezed_posterior_means(const DiffusiveCoefficients& c);

/// Posterior quadrature uncertainties of the squeezed-coherent solution;
/// noise-independent, cos(theta - 2 omega t) in both components.
std::pair<double, double> squeezed_uncertainties(const SqueezeParams& xi0,
                                                 const ModelParams& p, double t);

/// Approximate cat posterior statistics valid for |alpha| >> 1, t << 1/mu
/// (branch-overlap dropped); evaluated unconditionally.
struct CatStats {
  double mean_x, mean_y, dx, dy;
};
CatStats cat_posterior_stats(Complex alpha0, const ModelParams& p, Complex chi, double t);

/// No-count evolution: diagonal propagator
/// exp(-i omega t / 2 - (i omega + mu/2) n t) applied level by level.
Vec nocount_evolve(const Vec& phi0, const ModelParams& p, double t);
Vec nocount_evolve(const InitialState& s, const ModelParams& p, double t, int dim);

/// Probability of zero counts up to t, closed form per family.
double survival_probability(const InitialState& s, const ModelParams& p, double t);

/// Counting-mode cat statistics: <n>(t) (tanh/coth form) and the quadrature
/// uncertainties. Posterior quadrature means vanish identically for cats.
struct CountingStats {
  double mean_n, dx, dy;
};
CountingStats cat_counting_stats(Complex alpha0, int parity, const ModelParams& p, double t);

/// Normalized state right after a count: a|phi> / ||a|phi>||.
Vec postjump_state(const Vec& phi);

/// Non-selective means: <n>(t) = e^{-mu t} <n>(0) and the damped-rotated
/// quadrature means, seeded from the family's closed-form initial values.
struct AprioriMeans {
  double mean_n, mean_x, mean_y;
};
AprioriMeans initial_means(const InitialState& s);
AprioriMeans apriori_means(const InitialState& s, const ModelParams& p, double t);

/// Full closed-form trajectory on a noise path, with posterior statistics
/// read off the assembled states. Families without a preserved-form solution
/// on the diffusive record are rejected.
Trajectory analytic_trajectory(const InitialState& s, const ModelParams& p,
                               const TimeGrid& grid, const noise::NoisePath& path,
                               const RunOptions& opt = {});

}  // namespace qtraj::analytic

#endif
