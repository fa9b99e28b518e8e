#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace symmkern {

/// Real quaternion w + x i + y j + z k.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Quaternion conj() const { return {w, -x, -y, -z}; }
  double norm2() const { return w * w + x * x + y * y + z * z; }

  friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend Quaternion operator*(double s, const Quaternion& q) {
    return {s * q.w, s * q.x, s * q.y, s * q.z};
  }
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

// Complex 2x2 embedding: q = a + b j with a = w + x i, b = y + z i maps to
// [[a, b], [-conj(b), conj(a)]]. It is an injective ring homomorphism and
// sends the quaternion conjugate to the conjugate transpose.
Eigen::Matrix2cd embed(const Quaternion& q);
Quaternion quaternion_from_block(const Eigen::Matrix2cd& block);

/// Dense row-major matrix of quaternions.
class QuaternionMatrix {
 public:
  QuaternionMatrix() = default;
  QuaternionMatrix(int rows, int cols);

  static QuaternionMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Quaternion& operator()(int i, int j) { return data_[index(i, j)]; }
  const Quaternion& operator()(int i, int j) const { return data_[index(i, j)]; }

  QuaternionMatrix adjoint() const;
  friend QuaternionMatrix operator*(const QuaternionMatrix& a, const QuaternionMatrix& b);

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Quaternion> data_;
};

// Blockwise embedding of an m x n quaternion matrix into a 2m x 2n complex one.
Eigen::MatrixXcd embed(const QuaternionMatrix& m);

// Inverse of embed(); reads the first row of each 2x2 block.
QuaternionMatrix quaternion_from_embedded(const Eigen::MatrixXcd& m);

// Largest deviation of a 2m x 2n complex matrix from the embedded block form,
// relative to its largest entry.
double embedding_defect(const Eigen::MatrixXcd& m);

}  // namespace symmkern
