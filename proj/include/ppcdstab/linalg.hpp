#pragma once

#include <Eigen/Core>

#include "ppcdstab/rat.hpp"

namespace Eigen {

template <>
struct NumTraits<ppcdstab::Rat> : GenericNumTraits<ppcdstab::Rat> {
  using Real = ppcdstab::Rat;
  using NonInteger = ppcdstab::Rat;
  using Nested = ppcdstab::Rat;
  using Literal = ppcdstab::Rat;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 16
  };

  // Exact arithmetic: no rounding tolerance.
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace ppcdstab {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Vec2Q = Vec2<Rat>;
using RatMatrix = DenseMatrix<Rat>;
using RatVector = DenseVector<Rat>;

inline Vec2Q vec2q(const Rat& x, const Rat& y) {
  Vec2Q v;
  v << x, y;
  return v;
}

/// max(|x|, |y|).
template <typename Scalar>
Scalar inf_norm(const Vec2<Scalar>& v) {
  using std::abs;
  const Scalar ax = abs(v(0));
  const Scalar ay = abs(v(1));
  return ax < ay ? ay : ax;
}

/// z-component of the 3D cross product of two planar vectors.
template <typename Scalar>
Scalar cross(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a(0) * b(1) - a(1) * b(0);
}

/// Exact solution of A x = b for square or consistent over-determined systems.
///
/// Fraction-free (Bareiss) elimination on the row-scaled integer system,
/// followed by rational back substitution; the result is checked against
/// A x = b exactly before it is returned.
/// Throws Error(NoUniqueSolution) when rank(A) < cols or the system is
/// inconsistent, Error(DimensionMismatch) on shape errors.
RatVector solve_linear(const RatMatrix& a, const RatVector& b);

/// Exact matrix power by repeated squaring; m^0 is the identity.
template <typename Scalar>
DenseMatrix<Scalar> matrix_power(const DenseMatrix<Scalar>& m, unsigned long n) {
  DenseMatrix<Scalar> result = DenseMatrix<Scalar>::Identity(m.rows(), m.cols());
  DenseMatrix<Scalar> base = m;
  while (n > 0) {
    if (n & 1UL) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

}  // namespace ppcdstab
