#include "qtraj/fock.hpp"

#include <cmath>

namespace qtraj::fock {

namespace {
void check_dim(int dim) {
  if (dim < 2) throw ConfigError("operator dimension must be >= 2, got " + std::to_string(dim));
}
}  // namespace

std::pair<Mat, Mat> make_ladder(int dim) {
  check_dim(dim);
  Mat a = Mat::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return {a, a.adjoint()};
}

std::pair<Mat, Mat> make_quadratures(int dim) {
  auto [a, ad] = make_ladder(dim);
  Mat x = 0.5 * (a + ad);
  Mat y = (a - ad) / (2.0 * kI);
  return {x, y};
}

Mat number_op(int dim) {
  check_dim(dim);
  Mat n = Mat::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

Complex inner(const Vec& u, const Vec& v) {
  if (u.size() != v.size())
    throw NumericalError("inner: dimension mismatch " + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()));
  return u.dot(v);  // Eigen's dot conjugates the first argument
}

double norm2(const Vec& u) { return u.squaredNorm(); }

double tail_mass(const Vec& u) {
  const auto d = u.size();
  if (d < 2) return norm2(u);
  return std::norm(u[d - 1]) + std::norm(u[d - 2]);
}

double fidelity(const Vec& u, const Vec& v) {
  const double nu = norm2(u), nv = norm2(v);
  if (nu <= 0.0 || nv <= 0.0) throw NumericalError("fidelity of a zero-norm state");
  return std::norm(inner(u, v)) / (nu * nv);
}

Complex expectation(const Mat& z, const Vec& phi) {
  const double n2 = norm2(phi);
  if (n2 <= 0.0) throw NumericalError("expectation on a zero-norm state");
  return inner(phi, z * phi) / n2;
}

double uncertainty(const Mat& z, const Vec& phi) {
  const double n2 = norm2(phi);
  if (n2 <= 0.0) throw NumericalError("uncertainty on a zero-norm state");
  const Vec zphi = z * phi;
  const double mean = inner(phi, zphi).real() / n2;
  const double mean_sq = zphi.squaredNorm() / n2;  // <Z^2> for Hermitian Z
  double var = mean_sq - mean * mean;
  if (var < -1e-12)
    throw NumericalError("negative variance " + std::to_string(var) + " beyond round-off");
  if (var < 0.0) var = 0.0;
  return std::sqrt(var);
}

Vec apply_lower(const Vec& phi) {
  const auto d = phi.size();
  Vec out = Vec::Zero(d);
  for (Eigen::Index k = 0; k + 1 < d; ++k)
    out[k] = std::sqrt(static_cast<double>(k + 1)) * phi[k + 1];
  return out;
}

Vec fock_basis(int level, int dim) {
  check_dim(dim);
  if (level < 0 || level >= dim) throw ConfigError("fock_basis: level out of range");
  Vec v = Vec::Zero(dim);
  v[level] = 1.0;
  return v;
}

QuadStats quad_stats(const Vec& phi) {
  const auto d = phi.size();
  const double n2 = norm2(phi);
  if (n2 <= 0.0) throw NumericalError("quad_stats on a zero-norm state");
  Complex ea{0, 0}, ea2{0, 0};
  double en = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const Complex c = std::conj(phi[k]);
    if (k + 1 < d) ea += c * std::sqrt(static_cast<double>(k + 1)) * phi[k + 1];
    if (k + 2 < d)
      ea2 += c * std::sqrt(static_cast<double>((k + 1) * (k + 2))) * phi[k + 2];
    en += static_cast<double>(k) * std::norm(phi[k]);
  }
  ea /= n2;
  ea2 /= n2;
  en /= n2;
  // X^2 = (a^2 + a†^2 + 2n + 1)/4, Y^2 = (2n + 1 - a^2 - a†^2)/4
  const double x2 = 0.25 * (2.0 * ea2.real() + 2.0 * en + 1.0);
  const double y2 = 0.25 * (2.0 * en + 1.0 - 2.0 * ea2.real());
  QuadStats s;
  s.mean_x = ea.real();
  s.mean_y = ea.imag();
  s.mean_n = en;
  auto clamped_sqrt = [](double v) {
    if (v < -1e-12) throw NumericalError("negative variance beyond round-off in quad_stats");
    return std::sqrt(std::max(v, 0.0));
  };
  s.dx = clamped_sqrt(x2 - s.mean_x * s.mean_x);
  s.dy = clamped_sqrt(y2 - s.mean_y * s.mean_y);
  return s;
}

}  // namespace qtraj::fock
