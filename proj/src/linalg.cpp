#include "ppcdstab/linalg.hpp"

#include <utility>
#include <vector>

#include "ppcdstab/errors.hpp"

namespace ppcdstab {

namespace {

BigInt lcm_of_denominators(const RatMatrix& a, Eigen::Index row, const RatVector& b) {
  BigInt l = b(row).denominator();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(row, j).denominator().get_mpz_t());
  }
  return l;
}

}  // namespace

RatVector solve_linear(const RatMatrix& a, const RatVector& b) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m) throw Error(ErrorCode::DimensionMismatch, "rhs length differs from row count");
  if (m < n) throw Error(ErrorCode::NoUniqueSolution, "fewer equations than unknowns");

  // Augmented integer matrix, one row per equation.
  const auto width = static_cast<std::size_t>(n + 1);
  std::vector<std::vector<BigInt>> rows(static_cast<std::size_t>(m), std::vector<BigInt>(width));
  for (Eigen::Index i = 0; i < m; ++i) {
    const BigInt l = lcm_of_denominators(a, i, b);
    auto& row = rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      row[static_cast<std::size_t>(j)] = a(i, j).numerator() * (l / a(i, j).denominator());
    }
    row[static_cast<std::size_t>(n)] = b(i).numerator() * (l / b(i).denominator());
  }

  BigInt prev(1);
  for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
    std::size_t pivot = k;
    while (pivot < rows.size() && rows[pivot][k] == 0) ++pivot;
    if (pivot == rows.size()) throw Error(ErrorCode::NoUniqueSolution, "matrix is rank deficient");
    std::swap(rows[k], rows[pivot]);
    const BigInt& pk = rows[k][k];
    for (std::size_t i = k + 1; i < rows.size(); ++i) {
      auto& ri = rows[i];
      const BigInt factor = ri[k];
      for (std::size_t j = k + 1; j < width; ++j) {
        ri[j] = pk * ri[j] - factor * rows[k][j];
        mpz_divexact(ri[j].get_mpz_t(), ri[j].get_mpz_t(), prev.get_mpz_t());
      }
      ri[k] = 0;
    }
    prev = pk;
  }
  for (std::size_t i = static_cast<std::size_t>(n); i < rows.size(); ++i) {
    if (rows[i][static_cast<std::size_t>(n)] != 0) {
      throw Error(ErrorCode::NoUniqueSolution, "system is inconsistent");
    }
  }

  RatVector x(n);
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    const auto& rk = rows[static_cast<std::size_t>(k)];
    Rat acc(rk[static_cast<std::size_t>(n)]);
    for (Eigen::Index j = k + 1; j < n; ++j) {
      acc -= Rat(rk[static_cast<std::size_t>(j)]) * x(j);
    }
    x(k) = acc / Rat(rk[static_cast<std::size_t>(k)]);
  }

  for (Eigen::Index i = 0; i < m; ++i) {
    Rat lhs(0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!a(i, j).is_zero()) lhs += a(i, j) * x(j);
    }
    if (lhs != b(i)) throw Error(ErrorCode::NoUniqueSolution, "back-substitution check failed");
  }
  return x;
}

}  // namespace ppcdstab
