#pragma once

// Points, group actions and radial coordinates on the supported symmetric
// spaces: cones of Hermitian positive-definite matrices over R, C or H, and
// real hyperbolic spaces H^d in the hyperboloid model (curvature -1).
//
// Cone matrices are kept in complex form. Real and complex matrices are
// stored as n x n complex matrices; a quaternion matrix is stored through
// its 2n x 2n complex embedding, so a single Hermitian eigensolver and a
// single Cholesky serve all three algebras.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "symmkern/quaternion.hpp"

namespace symmkern {

enum class SpaceKind { Cone, Hyperbolic };
enum class ScalarAlgebra { Real, Complex, Quaternion };

int algebra_beta(ScalarAlgebra a);
std::string_view to_string(ScalarAlgebra a);

class SpaceDescriptor {
 public:
  static SpaceDescriptor cone(ScalarAlgebra algebra, int n);
  static SpaceDescriptor hyperbolic(int d);

  // Accepts "spd:<real|complex|quaternion>:<n>", "hyperbolic:<d>" and the
  // shorthand "H<d>".
  static SpaceDescriptor parse(std::string_view text);

  SpaceKind kind() const { return kind_; }
  ScalarAlgebra algebra() const { return algebra_; }
  int rank() const { return rank_; }
  int dim() const { return dim_; }
  // 1, 2, 4 for cones over R, C, H; 0 for hyperbolic spaces.
  int beta() const { return beta_; }
  const std::vector<double>& rho() const { return rho_; }
  double rho_norm_sq() const;

  bool is_cone() const { return kind_ == SpaceKind::Cone; }
  bool is_hyperbolic() const { return kind_ == SpaceKind::Hyperbolic; }
  // Rank-one spaces: every H^d and the n = 1 cone (the positive half-line).
  bool is_rank_one() const { return rank_ == 1; }

  // Side of the complex matrix holding a cone point (2n for quaternions).
  int embedded_size() const;

  std::string name() const;

  friend bool operator==(const SpaceDescriptor& a, const SpaceDescriptor& b) {
    return a.kind_ == b.kind_ && a.algebra_ == b.algebra_ && a.rank_ == b.rank_ && a.dim_ == b.dim_;
  }

 private:
  SpaceKind kind_ = SpaceKind::Hyperbolic;
  ScalarAlgebra algebra_ = ScalarAlgebra::Real;
  int rank_ = 1;
  int dim_ = 2;
  int beta_ = 0;
  std::vector<double> rho_;
};

/// Hermitian positive-definite matrix over one of the three scalar algebras.
class ConePoint {
 public:
  // `embedded` is symmetrized as (x + x^dagger)/2; a relative deviation
  // above 1e-12 from Hermitian, a non-positive spectrum, or a broken
  // quaternion block structure is rejected with DomainError.
  ConePoint(SpaceDescriptor space, const Eigen::MatrixXcd& embedded);

  static ConePoint from_real(const Eigen::MatrixXd& x);
  static ConePoint from_complex(const Eigen::MatrixXcd& x);
  static ConePoint from_quaternion(const QuaternionMatrix& x);

  const SpaceDescriptor& space() const { return space_; }
  const Eigen::MatrixXcd& embedded() const { return mat_; }
  int n() const { return space_.rank(); }

  // log det x; for quaternions, half the log-determinant of the embedding.
  double log_det() const { return log_det_; }

  QuaternionMatrix quaternion_entries() const;

 private:
  SpaceDescriptor space_;
  Eigen::MatrixXcd mat_;
  double log_det_ = 0.0;
};

/// Point of H^d on the upper sheet x0^2 - x1^2 - ... - xd^2 = 1.
class HyperbolicPoint {
 public:
  // Rejects points off the hyperboloid by more than 1e-12 relative to x0^2,
  // then re-projects x0 onto the sheet.
  explicit HyperbolicPoint(const Eigen::VectorXd& coords);

  // Same check with a caller-chosen relative tolerance.
  static HyperbolicPoint projected(const Eigen::VectorXd& coords, double rel_tol);

  static HyperbolicPoint basepoint(int d);
  // Exponential map at the basepoint applied to a tangent vector in R^d.
  static HyperbolicPoint exp_at_basepoint(const Eigen::VectorXd& tangent);

  int dim() const { return static_cast<int>(coords_.size()) - 1; }
  const Eigen::VectorXd& coords() const { return coords_; }
  SpaceDescriptor space() const { return SpaceDescriptor::hyperbolic(dim()); }

 private:
  HyperbolicPoint() = default;
  Eigen::VectorXd coords_;
};

using Point = std::variant<ConePoint, HyperbolicPoint>;

SpaceDescriptor space_of(const Point& p);
Point basepoint(const SpaceDescriptor& space);

/// Element of GL(n, K) acting on a cone by congruence.
class ConeTransform {
 public:
  // Condition number of the embedding must stay below 1e12.
  ConeTransform(SpaceDescriptor space, const Eigen::MatrixXcd& embedded);

  static ConeTransform identity(const SpaceDescriptor& space);
  static ConeTransform scaling(const SpaceDescriptor& space, double c);

  const SpaceDescriptor& space() const { return space_; }
  const Eigen::MatrixXcd& embedded() const { return mat_; }

 private:
  SpaceDescriptor space_;
  Eigen::MatrixXcd mat_;
};

/// Element of O+(1, d) acting linearly on the hyperboloid.
class LorentzTransform {
 public:
  // g^T J g = J to 1e-10 and g00 > 0 are required.
  explicit LorentzTransform(const Eigen::MatrixXd& matrix);

  static LorentzTransform identity(int d);
  // Boost of rapidity `rapidity` mixing x0 with the axis-th spatial coordinate.
  static LorentzTransform boost(int d, int axis, double rapidity);

  int dim() const { return static_cast<int>(mat_.rows()) - 1; }
  const Eigen::MatrixXd& matrix() const { return mat_; }

 private:
  Eigen::MatrixXd mat_;
};

using GroupElement = std::variant<ConeTransform, LorentzTransform>;

GroupElement identity_element(const SpaceDescriptor& space);
// Product g*h, so that act(compose(g, h), x) = act(g, act(h, x)).
GroupElement compose(const GroupElement& g, const GroupElement& h);

ConePoint act(const ConeTransform& g, const ConePoint& x);
HyperbolicPoint act(const LorentzTransform& g, const HyperbolicPoint& x);
Point act(const GroupElement& g, const Point& x);

// Logs of the eigenvalues of y^{-1/2} x y^{-1/2}, sorted descending.
std::vector<double> cone_radial(const ConePoint& x, const ConePoint& y);
// Affine-invariant distance: Euclidean norm of cone_radial.
double cone_distance(const ConePoint& x, const ConePoint& y);
double hyperbolic_distance(const HyperbolicPoint& x, const HyperbolicPoint& y);
double geodesic_distance(const Point& x, const Point& y);

// Deterministic for a fixed seed. Cones: A A^dagger + 1e-6 I with standard
// normal entries in A. Hyperbolic: exp map of a standard normal tangent vector.
std::vector<Point> sample_points(const SpaceDescriptor& space, int count, std::uint64_t seed);

// Points at geodesic distance at most `radius` from the basepoint.
std::vector<Point> sample_ball(const SpaceDescriptor& space, int count, double radius, std::uint64_t seed);

// Random group element with embedding condition number below `max_condition`.
GroupElement random_group_element(const SpaceDescriptor& space, std::mt19937_64& rng,
                                  double max_condition = 1e2);

}  // namespace symmkern
