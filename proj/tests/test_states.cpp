#include <doctest.h>

#include <cmath>

#include "qtraj/fock.hpp"
#include "qtraj/noise.hpp"
#include "qtraj/states.hpp"

using namespace qtraj;

TEST_CASE("coherent state: vacuum limit, eigenrelation, mean photon number") {
  const Vec vac = states::coherent_state({0.0, 0.0}, 16);
  CHECK(vac[0].real() == doctest::Approx(1.0));
  CHECK(vac.tail(15).cwiseAbs().maxCoeff() == 0.0);

  const int dim = 40;
  auto [a, ad] = fock::make_ladder(dim);
  const Vec phi = states::coherent_state({2.0, 0.0}, dim);
  CHECK((a * phi - 2.0 * phi).norm() <= 1e-8);

  const Vec one = states::coherent_state({1.0, 0.0}, dim);
  double direct = 0.0;
  for (int k = 0; k < dim; ++k) direct += k * std::norm(one[k]);
  CHECK(direct == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(states::coherent_state({4.0, 0.0}, 20), TruncationError);
}

TEST_CASE("eigenvalue preservation across amplitudes") {
  const int dim = 72;
  auto [a, ad] = fock::make_ladder(dim);
  for (Complex alpha : {Complex{0.5, 0.0}, Complex{1.0, 1.0}, Complex{-2.0, 0.7}}) {
    const Vec phi = states::coherent_state(alpha, dim);
    CHECK((a * phi - alpha * phi).norm() <= 1e-7 * (1.0 + std::abs(alpha)));
  }
}

TEST_CASE("displacement operator") {
  const int dim = 48;
  const Mat id_check = states::displacement({0.0, 0.0}, dim) - Mat::Identity(dim, dim);
  CHECK(id_check.cwiseAbs().maxCoeff() <= 1e-12);

  const Vec displaced = states::displacement({1.5, 0.0}, dim) * fock::fock_basis(0, dim);
  CHECK((displaced - states::coherent_state({1.5, 0.0}, dim)).norm() <= 1e-8);

  const int dim2 = 40;
  const Mat d = states::displacement({1.0, 0.0}, dim2);
  const Mat unit = (d.adjoint() * d - Mat::Identity(dim2, dim2)).topLeftCorner(32, 32);
  CHECK(unit.cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("squeeze operator: identity limit, vacuum amplitude, ladder transform") {
  const int dim = 64;
  const Mat s0 = states::squeeze(SqueezeParams::make(0.0, 0.0), dim);
  CHECK((s0 - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-12);

  const Mat s = states::squeeze(SqueezeParams::make(0.5, 0.0), dim);
  CHECK(std::abs(s(0, 0) - 1.0 / std::sqrt(std::cosh(0.5))) <= 1e-8);

  const auto xi = SqueezeParams::make(0.8, M_PI / 3.0);
  const Mat sq = states::squeeze_exponential(xi, dim);
  auto [a, ad] = fock::make_ladder(dim);
  const Mat lhs = sq.adjoint() * a * sq;
  const Mat rhs = a * std::cosh(0.8) - ad * std::polar(std::sinh(0.8), M_PI / 3.0);
  CHECK((lhs - rhs).topLeftCorner(32, 32).norm() <= 1e-6);
}

TEST_CASE("squeeze dual construction: certified blocks and truncation detection") {
  // certified agreement must cover the low levels actually populated; the
  // reachable block shrinks like dim / e^{2 rho}
  CHECK(states::squeeze_certified_block(SqueezeParams::make(0.3, -1.2), 64) >= 28);
  CHECK(states::squeeze_certified_block(SqueezeParams::make(0.5, -1.2), 64) >= 20);
  CHECK(states::squeeze_certified_block(SqueezeParams::make(0.9, -1.2), 64) >= 10);
  CHECK(states::squeeze_certified_block(SqueezeParams::make(1.4, -1.2), 128) >= 14);
  CHECK_NOTHROW(states::squeeze(SqueezeParams::make(0.9, -1.2), 64));
  // too much squeeze for a small space is refused rather than silently wrong
  CHECK_THROWS_AS(states::squeeze(SqueezeParams::make(1.4, 0.0), 64), TruncationError);
  CHECK_THROWS_AS(states::squeeze(SqueezeParams::make(1.4, 0.0), 16), TruncationError);
}

TEST_CASE("four squeeze-transform identities hold on interior blocks") {
  // working dimension well above the tested block keeps the truncated
  // exponential faithful there
  const int dim = 256, block = 16;
  auto [a, ad] = fock::make_ladder(dim);
  const Mat n = fock::number_op(dim);
  for (double rho : {0.7, 1.0}) {
    const auto xi = SqueezeParams::make(rho, 0.7);
    const double ch = std::cosh(xi.rho), sh = std::sinh(xi.rho);
    const Complex eith = std::polar(1.0, xi.theta);
    const Mat s = states::squeeze_exponential(xi, dim);
    const Mat sd = s.adjoint();

    CHECK((sd * a * s - (a * ch - ad * eith * sh)).topLeftCorner(block, block).norm() <= 1e-6);
    CHECK((sd * ad * s - (ad * ch - a * std::conj(eith) * sh))
              .topLeftCorner(block, block)
              .norm() <= 1e-6);
    const Mat rhs3 = (ad * ad) * (ch * ch) -
                     (2.0 * n + Mat::Identity(dim, dim)) * (std::conj(eith) * sh * ch) +
                     (a * a) * (std::conj(eith) * std::conj(eith) * sh * sh);
    CHECK((sd * (ad * ad) * s - rhs3).topLeftCorner(block, block).norm() <= 1e-6);
    const Mat rhs4 = n * (ch * ch) + (n + Mat::Identity(dim, dim)) * (sh * sh) -
                     ((a * a) * std::conj(eith) + (ad * ad) * eith) * (sh * ch);
    CHECK((sd * n * s - rhs4).topLeftCorner(block, block).norm() <= 1e-6);
  }
}

TEST_CASE("squeezed-coherent eigenrelation fixes the transform sign") {
  const int dim = 72;
  auto [a, ad] = fock::make_ladder(dim);
  for (double rho : {0.4, 1.0}) {
    for (Complex alpha : {Complex{1.0, 0.0}, Complex{0.8, -1.1}}) {
      const auto xi = SqueezeParams::make(rho, 0.9);
      const Vec phi = states::build_initial(InitialState::squeezed_coherent(xi, alpha), dim);
      const Complex g1 = std::cosh(rho);
      const Complex g2 = std::polar(std::sinh(rho), xi.theta);  // plus sign
      CHECK((g1 * (a * phi) + g2 * (ad * phi) - alpha * phi).norm() <= 1e-6);
      // the opposite sign is wrong by an O(1) residual
      CHECK((g1 * (a * phi) - g2 * (ad * phi) - alpha * phi).norm() > 0.1);
    }
  }
}

TEST_CASE("direct squeezed-coherent recurrence matches the operator route, phase included") {
  const int dim = 72;
  const auto xi = SqueezeParams::make(0.7, 0.9);
  const Complex alpha{1.2, 0.4};
  const Vec via_ops = states::squeeze(xi, dim) * states::coherent_state(alpha, dim);
  const Vec direct = states::squeezed_coherent_direct(xi, alpha, dim);
  CHECK((via_ops - direct).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("build_initial: cat parity support and closed-form moments") {
  const int dim = 40;
  const Vec even = states::build_initial(InitialState::cat_even({1.0, 0.0}), dim);
  const Vec odd = states::build_initial(InitialState::cat_odd({1.0, 0.0}), dim);
  for (int k = 0; k < dim; ++k) {
    if (k % 2 == 1) CHECK(std::abs(even[k]) <= 1e-12);
    if (k % 2 == 0) CHECK(std::abs(odd[k]) <= 1e-12);
  }
  CHECK(fock::quad_stats(odd).mean_n == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-8));

  const Vec sq = states::build_initial(
      InitialState::squeezed_coherent(SqueezeParams::make(0.5, 0.0), {1.0, 0.0}), 64);
  const double expected_n = std::exp(-1.0) + std::sinh(0.5) * std::sinh(0.5);
  CHECK(fock::quad_stats(sq).mean_n == doctest::Approx(expected_n).epsilon(1e-8));

  CHECK_THROWS_AS(states::build_initial(InitialState::cat_odd({0.0, 0.0}), dim), ConfigError);
}

TEST_CASE("amplitude convention conversion") {
  CHECK(states::alpha_to_beta(SqueezeParams::make(0.0, 0.4), {1.3, -0.2}) ==
        Complex{1.3, -0.2});
  CHECK(std::abs(states::alpha_to_beta(SqueezeParams::make(0.5, 0.0), {1.0, 0.0}) -
                 std::exp(-0.5)) <= 1e-12);

  noise::CounterStream rng(17, 0, noise::Purpose::Threshold);
  for (int i = 0; i < 100; ++i) {
    const auto xi = SqueezeParams::make(1.5 * rng.next_uniform(),
                                        2.0 * M_PI * (rng.next_uniform() - 0.5));
    const Complex alpha{4.0 * (rng.next_uniform() - 0.5), 4.0 * (rng.next_uniform() - 0.5)};
    CHECK(std::abs(states::beta_to_alpha(xi, states::alpha_to_beta(xi, alpha)) - alpha) <=
          1e-12);
  }
}

TEST_CASE("auto dimension heuristic keeps tails below 1e-10") {
  for (const auto& s :
       {InitialState::coherent({2.0, 0.0}), InitialState::cat_even({3.0, 0.0}),
        InitialState::squeezed_vacuum(SqueezeParams::make(1.5, 0.3)),
        InitialState::squeezed_coherent(SqueezeParams::make(1.0, -0.5), {2.0, 1.0})}) {
    const int dim = states::auto_dim(s);
    const Vec phi = states::build_initial(s, dim);
    CHECK(fock::tail_mass(phi) <= 1e-10);
    CHECK(std::abs(fock::norm2(phi) - 1.0) <= 1e-8);
    CHECK(dim <= 256);
  }
}
