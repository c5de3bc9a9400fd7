#include "qtraj/states.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "qtraj/fock.hpp"

namespace qtraj {

SqueezeParams SqueezeParams::make(double rho, double theta) {
  if (!(rho >= 0.0)) throw ConfigError("squeeze magnitude rho must be >= 0");
  if (!std::isfinite(theta)) throw ConfigError("squeeze phase theta must be finite");
  // normalize into (-pi, pi]
  theta = std::remainder(theta, 2.0 * M_PI);
  if (theta <= -M_PI) theta += 2.0 * M_PI;
  return SqueezeParams{rho, theta};
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Vacuum: return "vacuum";
    case Family::Coherent: return "coherent";
    case Family::CatEven: return "cat_even";
    case Family::CatOdd: return "cat_odd";
    case Family::SqueezedVacuum: return "squeezed_vacuum";
    case Family::SqueezedCoherent: return "squeezed_coherent";
  }
  throw ConfigError("unknown family tag");
}

Family family_from_name(const std::string& name) {
  if (name == "vacuum") return Family::Vacuum;
  if (name == "coherent") return Family::Coherent;
  if (name == "cat_even") return Family::CatEven;
  if (name == "cat_odd") return Family::CatOdd;
  if (name == "squeezed_vacuum") return Family::SqueezedVacuum;
  if (name == "squeezed_coherent") return Family::SqueezedCoherent;
  throw ConfigError("unknown initial-state family '" + name + "'");
}

InitialState InitialState::vacuum() { return {Family::Vacuum, {0, 0}, {}}; }
InitialState InitialState::coherent(Complex a) { return {Family::Coherent, a, {}}; }
InitialState InitialState::cat_even(Complex a) { return {Family::CatEven, a, {}}; }
InitialState InitialState::cat_odd(Complex a) { return {Family::CatOdd, a, {}}; }
InitialState InitialState::squeezed_vacuum(SqueezeParams xi) {
  return {Family::SqueezedVacuum, {0, 0}, xi};
}
InitialState InitialState::squeezed_coherent(SqueezeParams xi, Complex a) {
  return {Family::SqueezedCoherent, a, xi};
}

void InitialState::validate() const {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw ConfigError("initial-state alpha must be finite");
  if (family == Family::CatOdd && std::abs(alpha) == 0.0)
    throw ConfigError("odd cat is undefined at alpha = 0 (normalization vanishes)");
  if (!(xi.rho >= 0.0)) throw ConfigError("squeeze magnitude rho must be >= 0");
}

namespace states {

namespace {

double displacement_levels(double m) { return m * m + 10.0 * m + 20.0; }

double squeeze_levels(double rho) {
  if (rho < 1e-8) return 0.0;
  const double t = std::tanh(std::max(rho, 0.02));
  return 23.0 / std::abs(std::log(t)) + 12.0;
}

void verify_tail(const Vec& v, int dim, const char* what) {
  const double tm = fock::tail_mass(v);
  if (tm > 1e-10) {
    // crude required-dim estimate: grow until the analytic heuristic clears
    throw TruncationError(std::string(what) + ": tail mass " + std::to_string(tm) +
                          " exceeds 1e-10 at dim " + std::to_string(dim) +
                          "; increase dim (auto-sizing suggests >= " +
                          std::to_string(dim + dim / 2) + ")");
  }
}

}  // namespace

int auto_dim(const InitialState& s) {
  double m = std::abs(s.alpha);
  if (s.family == Family::SqueezedCoherent)
    m = std::max(m, std::abs(alpha_to_beta(s.xi, s.alpha)));
  double levels = 16.0;
  switch (s.family) {
    case Family::Vacuum: break;
    case Family::Coherent:
    case Family::CatEven:
    case Family::CatOdd: levels = displacement_levels(m); break;
    case Family::SqueezedVacuum: levels = 16.0 + squeeze_levels(s.xi.rho); break;
    case Family::SqueezedCoherent:
      levels = displacement_levels(m) + squeeze_levels(s.xi.rho);
      break;
  }
  const int dim = static_cast<int>(std::ceil(levels));
  return std::clamp(dim, 16, 256);
}

int resolve_dim(const InitialState& s, const ModelParams& p) {
  return p.dim > 0 ? p.dim : auto_dim(s);
}

Vec coherent_state(Complex alpha, int dim) {
  if (dim < 2) throw ConfigError("coherent_state: dim must be >= 2");
  Vec v(dim);
  v[0] = std::exp(-0.5 * std::norm(alpha));
  for (int k = 1; k < dim; ++k) v[k] = v[k - 1] * alpha / std::sqrt(static_cast<double>(k));
  verify_tail(v, dim, "coherent_state");
  return v;
}

Mat displacement(Complex alpha, int dim) {
  auto [a, ad] = fock::make_ladder(dim);
  Mat gen = alpha * ad - std::conj(alpha) * a;
  return gen.exp();
}

Mat squeeze_exponential(const SqueezeParams& xi, int dim) {
  auto [a, ad] = fock::make_ladder(dim);
  const Complex z = std::polar(xi.rho, xi.theta);
  Mat gen = 0.5 * std::conj(z) * (a * a) - 0.5 * z * (ad * ad);
  return gen.exp();
}

Mat squeeze_normal_ordered(const SqueezeParams& xi, int dim) {
  auto [a, ad] = fock::make_ladder(dim);
  const Complex gamma = std::polar(std::tanh(xi.rho), xi.theta);
  const Mat a2 = a * a;
  const Mat ad2 = ad * ad;

  // exp of the nilpotent a^2 / a†^2 pieces by their (terminating) series
  auto nilpotent_exp = [dim](const Mat& m) {
    Mat acc = Mat::Identity(dim, dim);
    Mat term = Mat::Identity(dim, dim);
    for (int k = 1; k <= dim / 2 + 1; ++k) {
      term = (term * m) / static_cast<double>(k);
      acc += term;
    }
    return acc;
  };
  Mat left = nilpotent_exp(-0.5 * gamma * ad2);
  Mat right = nilpotent_exp(0.5 * std::conj(gamma) * a2);
  Vec diag(dim);
  for (int k = 0; k < dim; ++k)
    diag[k] = std::exp(-std::log(std::cosh(xi.rho)) * static_cast<double>(k));
  const double prefactor = 1.0 / std::sqrt(std::cosh(xi.rho));
  return prefactor * left * diag.asDiagonal() * right;
}

int squeeze_certified_block(const SqueezeParams& xi, int dim) {
  const Mat s_exp = squeeze_exponential(xi, dim);
  const Mat s_no = squeeze_normal_ordered(xi, dim);
  // largest square block on which the two constructions agree entrywise to
  // 1e-8; beyond it the exponential route is truncation-limited (a squeezed
  // level-k state spreads to ~ k e^{2 rho} levels)
  int h = 0;
  double running = 0.0;
  while (h < dim) {
    double edge = 0.0;
    for (int j = 0; j <= h; ++j) {
      edge = std::max(edge, std::abs(s_exp(j, h) - s_no(j, h)));
      edge = std::max(edge, std::abs(s_exp(h, j) - s_no(h, j)));
    }
    if (std::max(running, edge) > 1e-8) break;
    running = std::max(running, edge);
    ++h;
  }
  return h;
}

Mat squeeze(const SqueezeParams& xi, int dim) {
  const int certified = squeeze_certified_block(xi, dim);
  if (certified < std::min(dim, 8))
    throw TruncationError("squeeze: dual-construction agreement certified only " +
                          std::to_string(certified) + " levels at dim " + std::to_string(dim) +
                          " (rho = " + std::to_string(xi.rho) + "); increase dim");
  return squeeze_exponential(xi, dim);
}

Vec squeezed_coherent_direct(const SqueezeParams& xi, Complex alpha, int dim) {
  if (dim < 2) throw ConfigError("squeezed_coherent_direct: dim must be >= 2");
  const double ch = std::cosh(xi.rho);
  const Complex eith = std::polar(1.0, xi.theta);
  const Complex sh = eith * std::sinh(xi.rho);
  Vec v(dim);
  // <0|S(xi)|alpha> in closed form fixes normalization and global phase
  v[0] = std::exp(0.5 * std::conj(eith) * std::tanh(xi.rho) * alpha * alpha -
                  0.5 * std::norm(alpha)) /
         std::sqrt(ch);
  // (a cosh rho + a† e^{i theta} sinh rho) |v> = alpha |v>
  for (int n = 0; n + 1 < dim; ++n) {
    const Complex below = (n >= 1) ? sh * std::sqrt(static_cast<double>(n)) * v[n - 1]
                                   : Complex{0, 0};
    v[n + 1] = (alpha * v[n] - below) / (ch * std::sqrt(static_cast<double>(n + 1)));
  }
  verify_tail(v, dim, "squeezed_coherent_direct");
  return v;
}

Vec build_initial(const InitialState& s, int dim) {
  s.validate();
  switch (s.family) {
    case Family::Vacuum: return fock::fock_basis(0, dim);
    case Family::Coherent: return coherent_state(s.alpha, dim);
    case Family::CatEven:
    case Family::CatOdd: {
      const double sign = (s.family == Family::CatEven) ? 1.0 : -1.0;
      const double norm = std::sqrt(2.0 * (1.0 + sign * std::exp(-2.0 * std::norm(s.alpha))));
      Vec v = (coherent_state(s.alpha, dim) + sign * coherent_state(-s.alpha, dim)) / norm;
      return v;
    }
    case Family::SqueezedVacuum:
      // the direct recurrence is exact at every truncation; the operator
      // route exists for cross-checks (see squeeze / displacement)
      return squeezed_coherent_direct(s.xi, {0.0, 0.0}, dim);
    case Family::SqueezedCoherent: return squeezed_coherent_direct(s.xi, s.alpha, dim);
  }
  throw ConfigError("unknown family tag");
}

Complex alpha_to_beta(const SqueezeParams& xi, Complex alpha) {
  return alpha * std::cosh(xi.rho) -
         std::conj(alpha) * std::polar(std::sinh(xi.rho), xi.theta);
}

Complex beta_to_alpha(const SqueezeParams& xi, Complex beta) {
  return beta * std::cosh(xi.rho) +
         std::conj(beta) * std::polar(std::sinh(xi.rho), xi.theta);
}

}  // namespace states

}  // namespace qtraj
