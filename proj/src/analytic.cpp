#include "qtraj/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include "qtraj/fock.hpp"

namespace qtraj::analytic {

namespace {

double atanh_clamped(double x) {
  // spec'd evaluation: 0.5 log((1+x)/(1-x)) with the argument kept off 1
  const double lim = 1.0 - 1e-15;
  x = std::clamp(x, -lim, lim);
  return 0.5 * std::log((1.0 + x) / (1.0 - x));
}

// log cosh / log sinh stable for large argument
double log_cosh(double x) {
  x = std::abs(x);
  return x + std::log1p(std::exp(-2.0 * x)) - M_LN2;
}
double log_sinh(double x) {
  // x > 0
  return x + std::log1p(-std::exp(-2.0 * x)) - M_LN2;
}

double cat_norm(double alpha_sq, int parity) {
  return std::sqrt(2.0 * (1.0 + parity * std::exp(-2.0 * alpha_sq)));
}

void check_parity(int parity) {
  if (parity != 1 && parity != -1) throw ConfigError("cat parity must be +1 or -1");
}

}  // namespace

Complex alpha_decay(Complex alpha0, const ModelParams& p, double t) {
  return alpha0 * std::exp(Complex{-0.5 * p.mu * t, -p.omega * t});
}

CoherentSeries::CoherentSeries(Complex alpha0, const ModelParams& p,
                               const noise::NoisePath& path)
    : alpha0_(alpha0), p_(p), grid_(path.grid) {
  const int n = grid_.n_steps;
  const double dt = grid_.dt();
  chi_.resize(n + 1);
  chi_[0] = {0, 0};
  const double root_mu = std::sqrt(p.mu);
  for (int k = 0; k < n; ++k)
    chi_[k + 1] = chi_[k] + root_mu * alpha_decay(alpha0, p, k * dt) * path.dw[k];
}

DiffusiveCoefficients CoherentSeries::at(int step) const {
  const double t = grid_.time(step);
  DiffusiveCoefficients c;
  c.t = t;
  c.alpha_t = alpha_decay(alpha0_, p_, t);
  c.chi_t = chi_.at(step);
  c.log_g = Complex{0.5 * std::norm(alpha0_) * (std::exp(-p_.mu * t) - 1.0),
                    -0.5 * p_.omega * t} +
            c.chi_t;
  return c;
}

Vec CoherentSeries::state(int step, int dim) const {
  const auto c = at(step);
  return std::exp(c.log_g) * states::coherent_state(c.alpha_t, dim);
}

Vec CoherentSeries::cat_state(int step, int parity, int dim) const {
  check_parity(parity);
  const auto c = at(step);
  const Complex log_kappa = Complex{0.5 * std::norm(alpha0_) * (std::exp(-p_.mu * c.t) - 1.0),
                                    -0.5 * p_.omega * c.t} -
                            std::log(cat_norm(std::norm(alpha0_), parity));
  return std::exp(log_kappa + c.chi_t) * states::coherent_state(c.alpha_t, dim) +
         static_cast<double>(parity) * std::exp(log_kappa - c.chi_t) *
             states::coherent_state(-c.alpha_t, dim);
}

SqueezedSeries::SqueezedSeries(const SqueezeParams& xi0, Complex alpha0,
                               const ModelParams& p, const noise::NoisePath& path)
    : xi0_(xi0), alpha0_(alpha0), p_(p), grid_(path.grid) {
  const int n = grid_.n_steps;
  const double dt = grid_.dt();
  const double tanh0 = std::tanh(xi0.rho);
  const double cosh0 = std::cosh(xi0.rho);
  const Complex eith0 = std::polar(1.0, xi0.theta);
  const double root_mu = std::sqrt(p.mu);

  alpha_.resize(n + 1);
  log_g_.resize(n + 1);

  Complex ito_decay{0, 0};   // integral of e^{-(i omega + mu/2)s} dW
  Complex ito_gw{0, 0};      // integral of alpha(s) cosh rho(s) dW
  Complex int_gdt{0, 0};     // integral of e^{-i theta(s)} alpha^2(s) sinh rho(s) cosh rho(s) ds

  for (int k = 0; k <= n; ++k) {
    const double t = k * dt;
    const double tau = std::exp(-p.mu * t) * tanh0;
    const double cosh_t = 1.0 / std::sqrt(1.0 - tau * tau);
    const double sinh_t = tau * cosh_t;
    const Complex decay = std::exp(Complex{-0.5 * p.mu * t, -p.omega * t});

    alpha_[k] = decay * (cosh_t / cosh0) *
                (alpha0 - root_mu * eith0 * std::sinh(xi0.rho) * ito_decay);
    log_g_[k] = Complex{0.5 * std::log(cosh_t / cosh0) +
                            0.5 * (std::norm(alpha_[k]) - std::norm(alpha0)),
                        -0.5 * p.omega * t} +
                root_mu * ito_gw + p.mu * int_gdt;

    if (k < n) {
      const Complex eith_t = std::polar(1.0, xi0.theta - 2.0 * p.omega * t);
      ito_decay += decay * path.dw[k];
      ito_gw += alpha_[k] * cosh_t * path.dw[k];
      int_gdt += std::conj(eith_t) * alpha_[k] * alpha_[k] * sinh_t * cosh_t * dt;
    }
  }
}

DiffusiveCoefficients SqueezedSeries::at(int step) const {
  const double t = grid_.time(step);
  DiffusiveCoefficients c;
  c.t = t;
  c.alpha_t = alpha_.at(step);
  c.rho_t = atanh_clamped(std::exp(-p_.mu * t) * std::tanh(xi0_.rho));
  c.theta_t = xi0_.theta - 2.0 * p_.omega * t;
  c.log_g = log_g_.at(step);
  return c;
}

Vec SqueezedSeries::state(int step, int dim) const {
  return squeezed_diffusive_state(at(step), dim);
}

Vec coherent_diffusive(Complex alpha0, const ModelParams& p, const noise::NoisePath& path,
                       double t, int dim) {
  return CoherentSeries(alpha0, p, path).state(path.grid.step_index(t), dim);
}

Vec cat_diffusive(Complex alpha0, int parity, const ModelParams& p,
                  const noise::NoisePath& path, double t, int dim) {
  return CoherentSeries(alpha0, p, path).cat_state(path.grid.step_index(t), parity, dim);
}

DiffusiveCoefficients squeezed_coeffs(const SqueezeParams& xi0, Complex alpha0,
                                      const ModelParams& p, const noise::NoisePath& path,
                                      double t) {
  return SqueezedSeries(xi0, alpha0, p, path).at(path.grid.step_index(t));
}

Vec squeezed_diffusive_state(const DiffusiveCoefficients& c, int dim) {
  const auto xi_t = SqueezeParams::make(c.rho_t, c.theta_t);
  return std::exp(c.log_g) * states::squeezed_coherent_direct(xi_t, c.alpha_t, dim);
}

std::pair<double, double> squeezed_posterior_means(const DiffusiveCoefficients& c) {
  const Complex mean_a = c.alpha_t * std::cosh(c.rho_t) -
                         std::conj(c.alpha_t) * std::polar(std::sinh(c.rho_t), c.theta_t);
  return {mean_a.real(), mean_a.imag()};
}

std::pair<double, double> squeezed_uncertainties(const SqueezeParams& xi0,
                                                 const ModelParams& p, double t) {
  const double tau = std::exp(-p.mu * t) * std::tanh(xi0.rho);
  const double den = 1.0 - tau * tau;
  const double c = std::cos(xi0.theta - 2.0 * p.omega * t);
  const double dx = 0.5 * std::sqrt(1.0 + 2.0 * tau / den * (tau - c));
  const double dy = 0.5 * std::sqrt(1.0 + 2.0 * tau / den * (tau + c));
  return {dx, dy};
}

CatStats cat_posterior_stats(Complex alpha0, const ModelParams& p, Complex chi, double t) {
  const Complex a_t = alpha_decay(alpha0, p, t);
  const double th = std::tanh(2.0 * chi.real());
  CatStats s;
  s.mean_x = a_t.real() * th;
  s.mean_y = a_t.imag() * th;
  const double sech2 = 1.0 - th * th;
  s.dx = std::sqrt(0.25 + a_t.real() * a_t.real() * sech2);
  s.dy = std::sqrt(0.25 + a_t.imag() * a_t.imag() * sech2);
  return s;
}

Vec nocount_evolve(const Vec& phi0, const ModelParams& p, double t) {
  const auto d = phi0.size();
  Vec out(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double kk = static_cast<double>(k);
    out[k] = phi0[k] * std::exp(Complex{-0.5 * p.mu * kk * t,
                                        -p.omega * (kk + 0.5) * t});
  }
  return out;
}

Vec nocount_evolve(const InitialState& s, const ModelParams& p, double t, int dim) {
  return nocount_evolve(states::build_initial(s, dim), p, t);
}

double survival_probability(const InitialState& s, const ModelParams& p, double t) {
  if (t < 0.0) throw ConfigError("survival_probability: t must be >= 0");
  const double q = std::exp(-p.mu * t);
  const double asq = std::norm(s.alpha);
  switch (s.family) {
    case Family::Vacuum: return 1.0;
    case Family::Coherent: return std::exp(-asq * (1.0 - q));
    case Family::CatEven: return std::exp(log_cosh(asq * q) - log_cosh(asq));
    case Family::CatOdd: {
      if (asq == 0.0) throw ConfigError("odd cat undefined at alpha = 0");
      return std::exp(log_sinh(asq * q) - log_sinh(asq));
    }
    case Family::SqueezedVacuum:
    case Family::SqueezedCoherent: {
      const double rho = s.xi.rho;
      if (rho < 1e-12) {
        return s.family == Family::SqueezedVacuum ? 1.0 : std::exp(-asq * (1.0 - q));
      }
      const double tanh0 = std::tanh(rho);
      const double cosh0 = std::cosh(rho);
      const double tau = q * tanh0;
      const double cosh_t = 1.0 / std::sqrt(1.0 - tau * tau);
      double log_p = std::log(cosh_t / cosh0);
      if (s.family == Family::SqueezedCoherent) {
        const Complex a2 = s.alpha * s.alpha;
        const double c2 = cosh0 * cosh0;
        const double s2 = std::sinh(rho) * std::sinh(rho);
        const double bracket = (c2 - s2 * q * q - 1.0) / (c2 - s2 * q * q);
        const Complex term =
            0.5 * a2 * std::polar(1.0, -s.xi.theta) * (cosh0 / std::sinh(rho)) * bracket;
        const double alpha_t_sq = std::norm(alpha_decay(s.alpha, p, t)) *
                                  (cosh_t / cosh0) * (cosh_t / cosh0);
        log_p += alpha_t_sq - asq + 2.0 * term.real();
      }
      return std::exp(log_p);
    }
  }
  throw NumericalError("survival_probability: family without a closed form");
}

CountingStats cat_counting_stats(Complex alpha0, int parity, const ModelParams& p, double t) {
  check_parity(parity);
  const double asq = std::norm(alpha0);
  if (parity == -1 && asq == 0.0) throw ConfigError("odd cat undefined at alpha = 0");
  const double x = asq * std::exp(-p.mu * t);
  const Complex a_t = alpha_decay(alpha0, p, t);
  const double re2 = a_t.real() * a_t.real();
  const double im2 = a_t.imag() * a_t.imag();
  const double e2x = std::exp(-2.0 * x);
  CountingStats s;
  if (parity == 1) {
    s.mean_n = x * std::tanh(x);
    s.dx = 0.5 * std::sqrt((1.0 + 4.0 * re2 + (1.0 - 4.0 * im2) * e2x) / (1.0 + e2x));
    s.dy = 0.5 * std::sqrt((1.0 + 4.0 * im2 + (1.0 - 4.0 * re2) * e2x) / (1.0 + e2x));
  } else {
    s.mean_n = x / std::tanh(x);
    s.dx = 0.5 * std::sqrt((1.0 + 4.0 * re2 - (1.0 - 4.0 * im2) * e2x) / (1.0 - e2x));
    s.dy = 0.5 * std::sqrt((1.0 + 4.0 * im2 - (1.0 - 4.0 * re2) * e2x) / (1.0 - e2x));
  }
  return s;
}

Vec postjump_state(const Vec& phi) {
  Vec lowered = fock::apply_lower(phi);
  const double n2 = fock::norm2(lowered);
  if (!(n2 > 1e-280))
    throw NumericalError("postjump_state: dark state, no count possible (<n> = 0)");
  return lowered / std::sqrt(n2);
}

AprioriMeans initial_means(const InitialState& s) {
  s.validate();
  AprioriMeans m{0.0, 0.0, 0.0};
  const double asq = std::norm(s.alpha);
  switch (s.family) {
    case Family::Vacuum: break;
    case Family::Coherent:
      m.mean_n = asq;
      m.mean_x = s.alpha.real();
      m.mean_y = s.alpha.imag();
      break;
    case Family::CatEven: m.mean_n = asq * std::tanh(asq); break;
    case Family::CatOdd: m.mean_n = asq / std::tanh(asq); break;
    case Family::SqueezedVacuum: m.mean_n = std::sinh(s.xi.rho) * std::sinh(s.xi.rho); break;
    case Family::SqueezedCoherent: {
      const Complex beta = states::alpha_to_beta(s.xi, s.alpha);
      m.mean_n = std::norm(beta) + std::sinh(s.xi.rho) * std::sinh(s.xi.rho);
      m.mean_x = beta.real();
      m.mean_y = beta.imag();
      break;
    }
  }
  return m;
}

AprioriMeans apriori_means(const InitialState& s, const ModelParams& p, double t) {
  const AprioriMeans m0 = initial_means(s);
  const double damp = std::exp(-0.5 * p.mu * t);
  const double c = std::cos(p.omega * t), sn = std::sin(p.omega * t);
  AprioriMeans m;
  m.mean_n = std::exp(-p.mu * t) * m0.mean_n;
  m.mean_x = damp * (m0.mean_x * c + m0.mean_y * sn);
  m.mean_y = damp * (m0.mean_y * c - m0.mean_x * sn);
  return m;
}

Trajectory analytic_trajectory(const InitialState& s, const ModelParams& p,
                               const TimeGrid& grid, const noise::NoisePath& path,
                               const RunOptions& opt) {
  if (path.grid.n_steps != grid.n_steps || path.grid.t_max != grid.t_max)
    throw ConfigError("analytic_trajectory: noise path grid mismatch");
  s.validate();
  const int dim = states::resolve_dim(s, p);

  // family-specific state evaluator on the path grid
  std::function<Vec(int)> state_at;
  switch (s.family) {
    case Family::Vacuum:
    case Family::Coherent: {
      auto series = std::make_shared<CoherentSeries>(s.alpha, p, path);
      state_at = [series, dim](int k) { return series->state(k, dim); };
      break;
    }
    case Family::CatEven:
    case Family::CatOdd: {
      const int parity = (s.family == Family::CatEven) ? 1 : -1;
      auto series = std::make_shared<CoherentSeries>(s.alpha, p, path);
      state_at = [series, parity, dim](int k) { return series->cat_state(k, parity, dim); };
      break;
    }
    case Family::SqueezedVacuum:
    case Family::SqueezedCoherent: {
      auto series = std::make_shared<SqueezedSeries>(s.xi, s.alpha, p, path);
      state_at = [series, dim](int k) { return series->state(k, dim); };
      break;
    }
    default:
      throw NumericalError("analytic_trajectory: no closed form for this family");
  }

  Trajectory traj;
  traj.grid = grid;
  for (int k = 0; k <= grid.n_steps; ++k) {
    if (k % opt.record_every != 0 && k != grid.n_steps) continue;
    Vec phi = state_at(k);
    const auto st = fock::quad_stats(phi);
    traj.times.push_back(grid.time(k));
    traj.mean_x.push_back(st.mean_x);
    traj.mean_y.push_back(st.mean_y);
    traj.mean_n.push_back(st.mean_n);
    traj.dx.push_back(st.dx);
    traj.dy.push_back(st.dy);
    traj.norm2_log.push_back(std::log(fock::norm2(phi)));
    traj.jump.push_back(0);
    if (opt.record_states) traj.states.push_back(std::move(phi));
  }
  return traj;
}

}  // namespace qtraj::analytic
