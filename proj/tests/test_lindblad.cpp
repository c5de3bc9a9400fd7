#include <doctest.h>

#include <cmath>

#include "qtraj/analytic.hpp"
#include "qtraj/fock.hpp"
#include "qtraj/lindblad.hpp"
#include "qtraj/noise.hpp"
#include "qtraj/states.hpp"

using namespace qtraj;

namespace {

Mat random_density(int dim, std::uint64_t seed) {
  noise::CounterStream rng(seed, 0, noise::Purpose::Threshold);
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      auto [a, b] = rng.next_gaussian_pair();
      g(i, j) = Complex{a, b};
    }
  Mat rho = g * g.adjoint();
  rho /= rho.trace();
  return rho;
}

}  // namespace

TEST_CASE("master-equation right-hand side") {
  const ModelParams p{1.0, 0.5, 0};
  const int dim = 16;

  SUBCASE("vacuum projector is stationary") {
    const Mat rho = lindblad::pure_density(fock::fock_basis(0, dim));
    CHECK(lindblad::lindblad_rhs(rho, p).cwiseAbs().maxCoeff() <= 1e-14);
  }

  SUBCASE("trace preservation and photon-number decay for random densities") {
    for (std::uint64_t seed : {1, 2, 3}) {
      const Mat rho = random_density(dim, seed);
      const Mat rhs = lindblad::lindblad_rhs(rho, p);
      CHECK(std::abs(rhs.trace()) <= 1e-12);
      const Mat n = fock::number_op(dim);
      const Complex dn = (n * rhs).trace();
      const Complex nn = (n * rho).trace();
      CHECK(std::abs(dn - (-p.mu) * nn) <= 1e-10);
    }
  }

  SUBCASE("matches the dense-operator formula") {
    const Mat rho = random_density(dim, 7);
    auto [a, ad] = fock::make_ladder(dim);
    const Mat n = fock::number_op(dim);
    const Mat h = p.omega * (n + 0.5 * Mat::Identity(dim, dim));
    const Mat dense = -kI * (h * rho - rho * h) +
                      p.mu * (a * rho * ad - 0.5 * (n * rho + rho * n));
    CHECK((lindblad::lindblad_rhs(rho, p) - dense).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("master-equation integration against the closed-form means") {
  const ModelParams p{1.0, 0.5, 0};
  const TimeGrid grid{2.0, 400};

  SUBCASE("coherent photon-number decay") {
    const Mat rho0 = lindblad::pure_density(states::coherent_state({1.3, 0.0}, 40));
    const auto series = lindblad::integrate_master(rho0, p, grid, 100);
    for (std::size_t i = 0; i < series.times.size(); ++i)
      CHECK(std::abs(series.mean_n[i] -
                     std::exp(-p.mu * series.times[i]) * 1.69) <= 1e-6);
  }

  SUBCASE("squeezed vacuum keeps zero quadrature means") {
    const Mat rho0 = lindblad::pure_density(states::build_initial(
        InitialState::squeezed_vacuum(SqueezeParams::make(1.0, 0.0)), 96));
    const auto series = lindblad::integrate_master(rho0, p, grid, 100);
    for (std::size_t i = 0; i < series.times.size(); ++i) {
      CHECK(std::abs(series.mean_x[i]) <= 1e-8);
      CHECK(std::abs(series.mean_y[i]) <= 1e-8);
      CHECK(std::abs(series.mean_n[i] - std::exp(-p.mu * series.times[i]) *
                                            std::sinh(1.0) * std::sinh(1.0)) <= 1e-6);
    }
  }

  SUBCASE("even cat photon number starts at tanh and decays exponentially") {
    const Mat rho0 =
        lindblad::pure_density(states::build_initial(InitialState::cat_even({1.0, 0.0}), 40));
    const auto series = lindblad::integrate_master(rho0, p, grid, 100);
    CHECK(series.mean_n.front() == doctest::Approx(std::tanh(1.0)).epsilon(1e-8));
    for (std::size_t i = 0; i < series.times.size(); ++i)
      CHECK(std::abs(series.mean_n[i] -
                     std::exp(-p.mu * series.times[i]) * std::tanh(1.0)) <= 1e-6);
  }

  SUBCASE("all families match the closed-form mean evolution") {
    for (const auto& s :
         {InitialState::coherent({1.0, -0.5}), InitialState::cat_odd({1.1, 0.0}),
          InitialState::squeezed_coherent(SqueezeParams::make(0.6, 0.9), {0.8, 0.3})}) {
      const int dim = std::max(states::auto_dim(s), 48);
      const Mat rho0 = lindblad::pure_density(states::build_initial(s, dim));
      const auto series = lindblad::integrate_master(rho0, p, grid, 100);
      for (std::size_t i = 0; i < series.times.size(); ++i) {
        const auto m = analytic::apriori_means(s, p, series.times[i]);
        CHECK(std::abs(series.mean_n[i] - m.mean_n) <= 1e-6);
        CHECK(std::abs(series.mean_x[i] - m.mean_x) <= 1e-6);
        CHECK(std::abs(series.mean_y[i] - m.mean_y) <= 1e-6);
      }
    }
  }

  SUBCASE("invariants hold at the final time") {
    const int dim = 40;
    Mat rho = lindblad::pure_density(states::build_initial(InitialState::cat_even({1.0, 0.0}),
                                                           dim));
    const auto series = lindblad::integrate_master(rho, p, grid, grid.n_steps);
    CHECK(series.times.size() == 2);

    // re-run stepwise through the public interface to inspect the final matrix
    // is not exposed; instead check PSD-ness via the recorded uncertainties
    // being real and the trace log staying at 0
    CHECK(std::abs(series.trace_log.back()) <= 1e-8);
  }

  SUBCASE("guard rejects too-coarse grids") {
    const Mat rho0 = lindblad::pure_density(states::coherent_state({1.0, 0.0}, 32));
    CHECK_THROWS_AS(lindblad::integrate_master(rho0, ModelParams{1.0, 1.0, 0},
                                               TimeGrid{10.0, 100}, 1),
                    ConfigError);
  }
}
