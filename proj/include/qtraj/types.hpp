#ifndef QTRAJ_TYPES_HPP
#define QTRAJ_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qtraj {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;  // state amplitudes over Fock levels 0..D-1
using Mat = Eigen::MatrixXcd;  // dense operator on the truncated space

inline constexpr Complex kI{0.0, 1.0};

// hbar = 1 throughout; recorded in run metadata.
inline constexpr double kHbar = 1.0;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Oscillator frequency, damping rate and Fock truncation shared by all engines.
struct ModelParams {
  double omega = 1.0;  // angular frequency [rad / time]
  double mu = 0.5;     // damping / measurement coupling rate [1 / time], >= 0
  int dim = 0;         // Fock truncation D; 0 requests auto-sizing from the initial state

  void validate() const {
    if (!(mu >= 0.0)) throw ConfigError("params.mu must be >= 0");
    if (!std::isfinite(omega)) throw ConfigError("params.omega must be finite");
  }
};

/// Uniform integration grid on [0, t_max] with n_steps steps.
struct TimeGrid {
  double t_max = 1.0;
  int n_steps = 1000;

  double dt() const { return t_max / n_steps; }
  double time(int k) const { return k * dt(); }

  void validate() const {
    if (n_steps < 1) throw ConfigError("grid.n_steps must be >= 1");
    if (!(t_max > 0.0) || !std::isfinite(t_max))
      throw ConfigError("grid.t_max must be positive and finite");
  }

  /// Map a time to its grid index; throws if t is not (nearly) on the grid.
  int step_index(double t) const {
    const double k = t / dt();
    const int ki = static_cast<int>(std::lround(k));
    if (ki < 0 || ki > n_steps || std::abs(k - ki) > 1e-9 * std::max(1.0, std::abs(k)))
      throw ConfigError("time " + std::to_string(t) + " is not on the grid (no interpolation)");
    return ki;
  }
};

}  // namespace qtraj

#endif
