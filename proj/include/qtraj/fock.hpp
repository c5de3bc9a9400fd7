#ifndef QTRAJ_FOCK_HPP
#define QTRAJ_FOCK_HPP

#include <utility>

#include "qtraj/types.hpp"

namespace qtraj::fock {

/// Annihilation and creation operators on dim Fock levels:
/// a|n> = sqrt(n)|n-1>, i.e. a[n-1][n] = sqrt(n).
std::pair<Mat, Mat> make_ladder(int dim);

/// Quadratures X = (a + a†)/2, Y = (a - a†)/(2i); both Hermitian.
std::pair<Mat, Mat> make_quadratures(int dim);

/// Number operator a†a = diag(0, 1, ..., dim-1).
Mat number_op(int dim);

/// Sesquilinear inner product, conjugate-linear in the first slot.
Complex inner(const Vec& u, const Vec& v);

double norm2(const Vec& u);

/// Population in the top two levels; the truncation-error diagnostic.
double tail_mass(const Vec& u);

/// |<u|v>|^2 normalized by both norms.
double fidelity(const Vec& u, const Vec& v);

/// <phi|Z|phi> / <phi|phi>; works on unnormalized states.
Complex expectation(const Mat& z, const Vec& phi);

/// sqrt(<Z^2> - <Z>^2) for Hermitian Z; small negative round-off is clamped,
/// variance below -1e-12 raises NumericalError.
double uncertainty(const Mat& z, const Vec& phi);

/// a|phi> without forming the matrix.
Vec apply_lower(const Vec& phi);

/// Vacuum plus selected Fock basis vector.
Vec fock_basis(int level, int dim);

/// O(D) posterior observables read off one unnormalized state.
struct QuadStats {
  double mean_x, mean_y, mean_n, dx, dy;
};
QuadStats quad_stats(const Vec& phi);

}  // namespace qtraj::fock

#endif
