#ifndef QTRAJ_STATES_HPP
#define QTRAJ_STATES_HPP

#include <string>

#include "qtraj/types.hpp"

namespace qtraj {

/// Squeeze parameter xi = rho * e^{i theta}.
struct SqueezeParams {
  double rho = 0.0;    // magnitude, >= 0
  double theta = 0.0;  // phase, normalized into (-pi, pi]

  static SqueezeParams make(double rho, double theta);
};

enum class Family {
  Vacuum,
  Coherent,
  CatEven,
  CatOdd,
  SqueezedVacuum,
  SqueezedCoherent,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Tagged initial-state description. alpha is ignored for Vacuum and
/// SqueezedVacuum; xi is ignored for the non-squeezed families.
struct InitialState {
  Family family = Family::Vacuum;
  Complex alpha{0.0, 0.0};
  SqueezeParams xi{};

  static InitialState vacuum();
  static InitialState coherent(Complex alpha);
  static InitialState cat_even(Complex alpha);
  static InitialState cat_odd(Complex alpha);
  static InitialState squeezed_vacuum(SqueezeParams xi);
  static InitialState squeezed_coherent(SqueezeParams xi, Complex alpha);

  void validate() const;
};

namespace states {

/// Truncation heuristic, published in the README/config docs:
///   n_disp(m)  = m^2 + 10 m + 20            with m the largest displacement
///                                           amplitude involved (|alpha| or |beta|)
///   n_sq(rho)  = 23 / |log(tanh rho)| + 12  (0 when rho == 0)
///   dim        = clamp(ceil(n_disp + n_sq), 16, 256)
int auto_dim(const InitialState& s);

/// Resolve params.dim: explicit value if > 0, else auto_dim.
int resolve_dim(const InitialState& s, const ModelParams& p);

/// Coherent state by the direct amplitude recurrence; verifies tail mass <= 1e-10.
Vec coherent_state(Complex alpha, int dim);

/// Displacement operator exp(alpha a† - alpha* a).
Mat displacement(Complex alpha, int dim);

/// Squeeze operator by matrix exponential of (xi* a^2 - xi a†^2)/2.
Mat squeeze_exponential(const SqueezeParams& xi, int dim);

/// Squeeze operator assembled from its normal-ordered factorization
///   (cosh rho)^{-1/2} exp(-G/2 a†^2) exp(-log(cosh rho) a†a) exp(G*/2 a^2),
/// G = e^{i theta} tanh rho.
Mat squeeze_normal_ordered(const SqueezeParams& xi, int dim);

/// Size of the largest square block on which the two squeeze constructions
/// agree entrywise to 1e-8 at this truncation.
int squeeze_certified_block(const SqueezeParams& xi, int dim);

/// Squeeze operator; builds both constructions and requires their certified
/// agreement block to span at least 8 levels (mandatory self-test).
Mat squeeze(const SqueezeParams& xi, int dim);

/// Squeezed coherent state S(xi) D(alpha)|0> by the three-term recurrence
/// seeded with the closed-form vacuum amplitude (exact global phase).
Vec squeezed_coherent_direct(const SqueezeParams& xi, Complex alpha, int dim);

/// Normalized initial state for each family. Cats are (|a> ± |-a>)/N±;
/// squeezed families apply S(xi) after displacement.
Vec build_initial(const InitialState& s, int dim);

/// beta = alpha cosh rho - alpha* e^{i theta} sinh rho, and its inverse.
Complex alpha_to_beta(const SqueezeParams& xi, Complex alpha);
Complex beta_to_alpha(const SqueezeParams& xi, Complex beta);

}  // namespace states

}  // namespace qtraj

#endif
