#include <doctest.h>

#include <cmath>

#include "qtraj/analytic.hpp"
#include "qtraj/ensemble.hpp"
#include "qtraj/states.hpp"

using namespace qtraj;

TEST_CASE("jackknife of the plain mean reproduces s/sqrt(n)") {
  std::vector<double> x = {1.0, 2.0, 4.0, 4.5, 0.5, 3.0, 2.5, 1.5};
  const double n = static_cast<double>(x.size());
  double m = 0.0;
  for (double v : x) m += v;
  m /= n;
  double s2 = 0.0;
  for (double v : x) s2 += (v - m) * (v - m);
  s2 /= (n - 1.0);
  const double se_classic = std::sqrt(s2 / n);
  CHECK(ensemble::jackknife_se(x) == doctest::Approx(se_classic).epsilon(1e-12));

  const auto wm = ensemble::jackknife_weighted_mean(x, {});
  CHECK(wm.value == doctest::Approx(m).epsilon(1e-12));
}

TEST_CASE("weighted mean with log weights") {
  std::vector<double> x = {1.0, 3.0};
  std::vector<double> logw = {std::log(1.0), std::log(3.0)};
  const auto wm = ensemble::jackknife_weighted_mean(x, logw);
  CHECK(wm.value == doctest::Approx((1.0 + 9.0) / 4.0).epsilon(1e-12));
}

TEST_CASE("serial and OpenMP ensembles are bitwise identical") {
  const auto s = InitialState::squeezed_coherent(SqueezeParams::make(0.4, 0.5), {1.0, 0.0});
  const ModelParams p{1.0, 0.5, 0};
  const TimeGrid grid{0.5, 500};

  ensemble::Options opt;
  opt.n_trajectories = 64;
  opt.record_every = 100;
  opt.seed = 5;

  opt.exec = ensemble::Exec::Serial;
  const auto a = ensemble::run_diffusive_ensemble(s, p, grid, opt);
  opt.exec = ensemble::Exec::OpenMP;
  const auto b = ensemble::run_diffusive_ensemble(s, p, grid, opt);
  CHECK(a.mean_x == b.mean_x);
  CHECK(a.mean_y == b.mean_y);
  CHECK(a.mean_n == b.mean_n);
  CHECK(a.se_x == b.se_x);
  CHECK(a.mean_norm2 == b.mean_norm2);

  opt.exec = ensemble::Exec::Serial;
  const auto ca = ensemble::run_counting_ensemble(InitialState::cat_odd({1.0, 0.0}), p,
                                                  TimeGrid{2.0, 400}, opt);
  opt.exec = ensemble::Exec::OpenMP;
  const auto cb = ensemble::run_counting_ensemble(InitialState::cat_odd({1.0, 0.0}), p,
                                                  TimeGrid{2.0, 400}, opt);
  CHECK(ca.mean_n == cb.mean_n);
  CHECK(ca.mean_x == cb.mean_x);
}

TEST_CASE("coherent ensembles inherit the noise-independence of the posterior means") {
  const auto s = InitialState::coherent({1.2, 0.4});
  const ModelParams p{1.0, 0.5, 0};
  const TimeGrid grid{1.0, 1000};

  ensemble::Options opt;
  opt.n_trajectories = 50;
  opt.record_every = 500;
  opt.seed = 9;

  const auto e = ensemble::run_diffusive_ensemble(s, p, grid, opt);
  for (std::size_t i = 0; i < e.times.size(); ++i) {
    const Complex at = analytic::alpha_decay({1.2, 0.4}, p, e.times[i]);
    CHECK(std::abs(e.mean_x[i] - at.real()) <= 5e-3);
    CHECK(std::abs(e.mean_y[i] - at.imag()) <= 5e-3);
    CHECK(e.se_x[i] <= 2e-3);  // spread is integrator error only
  }
}

TEST_CASE("survival ensemble tracks the closed form (smoke scale)") {
  const auto s = InitialState::coherent({1.0, 0.0});
  const ModelParams p{1.0, 0.5, 0};
  const TimeGrid grid{4.0, 800};

  ensemble::Options opt;
  opt.n_trajectories = 1000;
  opt.record_every = 400;
  opt.seed = 12;

  const auto st = ensemble::run_survival_ensemble(s, p, grid, opt);
  for (std::size_t i = 0; i < st.times.size(); ++i) {
    if (st.times[i] == 0.0) {
      CHECK(st.frequency[i] == 1.0);
      continue;
    }
    const double z =
        (st.frequency[i] - st.closed_form[i]) / std::max(st.binom_se[i], 1e-12);
    CHECK(std::abs(z) <= 4.0);
  }
}

TEST_CASE("linear counting ensemble is a martingale at reference intensity mu (smoke)") {
  const auto s = InitialState::coherent({1.0, 0.0});
  const ModelParams p{1.0, 0.5, 0};
  const TimeGrid grid{1.0, 500};

  ensemble::Options opt;
  opt.n_trajectories = 2000;
  opt.record_every = 500;
  opt.seed = 14;

  const auto e = ensemble::run_counting_linear_ensemble(s, p, grid, p.mu, opt);
  const double z = std::abs(e.mean_norm2.back() - 1.0) / e.se_norm2.back();
  CHECK(z <= 4.0);
}
