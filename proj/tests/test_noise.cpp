#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qtraj/noise.hpp"

using namespace qtraj;

TEST_CASE("philox4x64-10 known-answer vectors") {
  // frozen from an independent implementation of the same generator
  using A4 = std::array<std::uint64_t, 4>;
  const A4 r1 = noise::philox4x64_10({1, 0, 0, 0}, {0, 0});
  CHECK(r1 == A4{0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
                 0x907d7a052fd5b4dcULL});
  const A4 r2 = noise::philox4x64_10({2, 0, 0, 0}, {0, 0});
  CHECK(r2 == A4{0x809bf322883987c3ULL, 0x471128b9e807f7ddULL, 0xf250ba0dbec065b7ULL,
                 0xfc6ed66767a457bcULL});
  const A4 r3 = noise::philox4x64_10({2, 2, 3, 4}, {0xdeadbeefULL, 0xcafef00dULL});
  CHECK(r3 == A4{0xbe50cc8d71b94ed3ULL, 0x24145edfdabb5069ULL, 0x2dc42591c5253a4bULL,
                 0x925d19fbe559e7a9ULL});
  const A4 r4 = noise::philox4x64_10({1, 0, 0, 0}, {12345, 6789});
  CHECK(r4 == A4{0xe8fa3bbbe7d73479ULL, 0x37245d9af5c9fe6dULL, 0x5d8ba737c8c2dec5ULL,
                 0xa5b8f813145e470aULL});
}

TEST_CASE("wiener path: determinism and complex-noise variance conventions") {
  const TimeGrid grid{100.0, 100000};  // dt = 1e-3
  const auto p1 = noise::wiener_path(grid, 42, 3);
  const auto p2 = noise::wiener_path(grid, 42, 3);
  CHECK(p1.dw == p2.dw);

  const int n = grid.n_steps;
  const double dt = grid.dt();
  double m1 = 0, m2 = 0, v1 = 0, v2 = 0, cov = 0;
  for (const Complex& w : p1.dw) {
    m1 += w.real();
    m2 += w.imag();
  }
  m1 /= n;
  m2 /= n;
  for (const Complex& w : p1.dw) {
    v1 += (w.real() - m1) * (w.real() - m1);
    v2 += (w.imag() - m2) * (w.imag() - m2);
    cov += (w.real() - m1) * (w.imag() - m2);
  }
  v1 /= n - 1;
  v2 /= n - 1;
  cov /= n - 1;

  CHECK(v1 >= 0.45 * dt);
  CHECK(v1 <= 0.55 * dt);
  CHECK(v2 >= 0.45 * dt);
  CHECK(v2 <= 0.55 * dt);
  CHECK(std::abs(m1) <= 5.0 / std::sqrt(static_cast<double>(n)) * std::sqrt(dt));
  CHECK(std::abs(m2) <= 5.0 / std::sqrt(static_cast<double>(n)) * std::sqrt(dt));
  // Cov(dW1, dW2) = 0 within 3 standard errors of the covariance estimator
  CHECK(std::abs(cov) <= 3.0 * (0.5 * dt) / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("distinct streams from one seed are uncorrelated") {
  const TimeGrid grid{100.0, 100000};
  const auto a = noise::wiener_path(grid, 42, 0);
  const auto b = noise::wiener_path(grid, 42, 1);
  const int n = grid.n_steps;
  double corr = 0.0, va = 0.0, vb = 0.0;
  for (int i = 0; i < n; ++i) {
    corr += a.dw[i].real() * b.dw[i].real();
    va += a.dw[i].real() * a.dw[i].real();
    vb += b.dw[i].real() * b.dw[i].real();
  }
  CHECK(std::abs(corr / std::sqrt(va * vb)) <= 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("uniform draws: open interval and Kolmogorov-Smirnov at n = 1e5") {
  noise::CounterStream s(9, 4, noise::Purpose::Threshold);
  const int n = 100000;
  std::vector<double> u(n);
  for (double& x : u) x = s.next_uniform();
  CHECK(*std::min_element(u.begin(), u.end()) > 0.0);
  CHECK(*std::max_element(u.begin(), u.end()) < 1.0);

  std::sort(u.begin(), u.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    d = std::max(d, std::abs(u[i] - (i + 1.0) / n));
    d = std::max(d, std::abs(u[i] - static_cast<double>(i) / n));
  }
  // critical value at significance 0.001 is ~1.95/sqrt(n)
  CHECK(d * std::sqrt(static_cast<double>(n)) <= 1.95);
}

TEST_CASE("gaussian pairs: moments at n = 1e5") {
  noise::CounterStream s(10, 0, noise::Purpose::Wiener);
  const int n = 100000;
  double m = 0, v = 0, kurt = 0;
  std::vector<double> z(2 * n);
  for (int i = 0; i < n; ++i) {
    auto [z1, z2] = s.next_gaussian_pair();
    z[2 * i] = z1;
    z[2 * i + 1] = z2;
  }
  for (double x : z) m += x;
  m /= z.size();
  for (double x : z) {
    v += (x - m) * (x - m);
    kurt += std::pow(x - m, 4);
  }
  v /= z.size() - 1;
  kurt = kurt / (z.size() * v * v);
  CHECK(std::abs(m) <= 3.0 / std::sqrt(static_cast<double>(z.size())));
  CHECK(v == doctest::Approx(1.0).epsilon(0.02));
  CHECK(kurt == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("poisson path: step guard, mean count, determinism, intensity") {
  const TimeGrid grid{10.0, 1000};  // dt = 0.01
  CHECK_THROWS_AS(noise::poisson_path(TimeGrid{10.0, 500}, 1, 0), ConfigError);

  double total = 0.0;
  for (std::uint64_t stream = 0; stream < 30; ++stream) {
    const auto p = noise::poisson_path(grid, 5, stream);
    int c = 0;
    for (auto j : p.jumps) c += j;
    total += c;
  }
  const double mean = total / 30.0;
  CHECK(std::abs(mean - 10.0) <= 3.0 * std::sqrt(10.0 / 30.0));

  const auto p1 = noise::poisson_path(grid, 5, 0);
  const auto p2 = noise::poisson_path(grid, 5, 0);
  CHECK(p1.jumps == p2.jumps);

  // halved intensity roughly halves the count over many streams
  double total_half = 0.0;
  for (std::uint64_t stream = 0; stream < 30; ++stream) {
    const auto p = noise::poisson_path(grid, 5, stream, 0.5);
    for (auto j : p.jumps) total_half += j;
  }
  CHECK(std::abs(total_half / 30.0 - 5.0) <= 3.0 * std::sqrt(5.0 / 30.0));
}

TEST_CASE("coarsen merges increments and preserves the endpoint sum") {
  const TimeGrid grid{1.0, 8};
  const auto fine = noise::wiener_path(grid, 2, 0);
  const auto coarse = noise::coarsen(fine, 2);
  CHECK(coarse.grid.n_steps == 4);
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(coarse.dw[k] - (fine.dw[2 * k] + fine.dw[2 * k + 1])) <= 1e-18);
  CHECK_THROWS_AS(noise::coarsen(fine, 3), ConfigError);
}
