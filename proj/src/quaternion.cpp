#include "symmkern/quaternion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symmkern/error.hpp"

namespace symmkern {

using cd = std::complex<double>;

Eigen::Matrix2cd embed(const Quaternion& q) {
  const cd a(q.w, q.x);
  const cd b(q.y, q.z);
  Eigen::Matrix2cd m;
  m << a, b, -std::conj(b), std::conj(a);
  return m;
}

Quaternion quaternion_from_block(const Eigen::Matrix2cd& block) {
  const cd a = block(0, 0);
  const cd b = block(0, 1);
  return {a.real(), a.imag(), b.real(), b.imag()};
}

QuaternionMatrix::QuaternionMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
  if (rows < 0 || cols < 0) throw DomainError("QuaternionMatrix: negative size");
}

QuaternionMatrix QuaternionMatrix::identity(int n) {
  QuaternionMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i).w = 1.0;
  return m;
}

QuaternionMatrix QuaternionMatrix::adjoint() const {
  QuaternionMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j).conj();
  return out;
}

QuaternionMatrix operator*(const QuaternionMatrix& a, const QuaternionMatrix& b) {
  if (a.cols() != b.rows()) throw DomainError("QuaternionMatrix product: inner dimension mismatch");
  QuaternionMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Quaternion acc;
      for (int k = 0; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

Eigen::MatrixXcd embed(const QuaternionMatrix& m) {
  Eigen::MatrixXcd out(2 * m.rows(), 2 * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.block<2, 2>(2 * i, 2 * j) = embed(m(i, j));
  return out;
}

QuaternionMatrix quaternion_from_embedded(const Eigen::MatrixXcd& m) {
  if (m.rows() % 2 != 0 || m.cols() % 2 != 0)
    throw DomainError("quaternion_from_embedded: dimensions must be even");
  QuaternionMatrix out(static_cast<int>(m.rows() / 2), static_cast<int>(m.cols() / 2));
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j)
      out(i, j) = quaternion_from_block(m.block<2, 2>(2 * i, 2 * j));
  return out;
}

double embedding_defect(const Eigen::MatrixXcd& m) {
  if (m.rows() % 2 != 0 || m.cols() % 2 != 0) return std::numeric_limits<double>::infinity();
  const double scale = std::max(m.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  double defect = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); i += 2)
    for (Eigen::Index j = 0; j < m.cols(); j += 2) {
      const cd a = m(i, j), b = m(i, j + 1);
      defect = std::max(defect, std::abs(m(i + 1, j) + std::conj(b)));
      defect = std::max(defect, std::abs(m(i + 1, j + 1) - std::conj(a)));
    }
  return defect / scale;
}

}  // namespace symmkern
