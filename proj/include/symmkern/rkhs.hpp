#pragma once

// Gram matrices, positive-definiteness and invariance checks, kernel ridge
// regression and the approximation experiment.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symmkern/geometry.hpp"
#include "symmkern/spectral_kernels.hpp"

namespace symmkern {

// SYMMKERN_THREADS if set and positive, else the hardware concurrency.
int default_thread_count();

struct GramMetadata {
  std::string kernel_id;
  std::string space;
  std::string point_hash;
  std::uint64_t seed = 0;
};

struct GramMatrix {
  Eigen::MatrixXd values;
  GramMetadata metadata;
};

// Entries are computed independently, so the result does not depend on the
// thread count. threads <= 0 means default_thread_count().
GramMatrix gram(const std::vector<Point>& points, const KernelHandle& kernel, std::uint64_t seed = 0,
                int threads = 0);

// K(a_i, b_j).
Eigen::MatrixXd cross_kernel(const std::vector<Point>& a, const std::vector<Point>& b, const KernelHandle& kernel,
                             int threads = 0);

struct PsdReport {
  double min_eig = 0.0;
  double max_eig = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// pass iff min_eig >= -tol * max_eig.
PsdReport check_psd(const Eigen::MatrixXd& matrix, double tol = 1e-8);
inline PsdReport check_psd(const GramMatrix& g, double tol = 1e-8) { return check_psd(g.values, tol); }

struct InvarianceReport {
  double max_rel_deviation = 0.0;
  long long comparisons = 0;
  bool pass = false;
};

// Largest |k(gx, gy) - k(x, y)| / |k(x, y)| over all pairs and elements;
// pass iff below 1e-9.
InvarianceReport check_invariance(const KernelHandle& kernel, const std::vector<Point>& points,
                                  const std::vector<GroupElement>& group_elements);

struct RegressionModel {
  std::vector<Point> points;
  Eigen::VectorXd coefficients;
  double mu = 0.0;
  KernelHandle kernel;
  // ||(K + mu I) a - y|| / ||y||.
  double relative_residual = 0.0;
  // mu y^T (K + mu I)^-1 y: the minimum of ||K a - y||^2 + mu a^T K a.
  double objective = 0.0;
};

// 1e-8 * trace(K) / N.
double default_ridge(const Eigen::MatrixXd& k);

// Solves (K + mu I) a = y by Cholesky; mu defaults to default_ridge(K).
// Throws NumericalError if the factorization fails.
RegressionModel krr_fit(const std::vector<Point>& points, const Eigen::VectorXd& targets, const KernelHandle& kernel,
                        std::optional<double> mu = std::nullopt);
double krr_predict(const RegressionModel& model, const Point& query);
Eigen::VectorXd krr_predict(const RegressionModel& model, const std::vector<Point>& queries);

enum class TargetKind { Zero, SinLogDet, GeodesicBump, KernelTranslate };

// "zero", "sin-logdet", "geodesic-bump", "kernel-translate".
TargetKind parse_target(const std::string& name);
std::string to_string(TargetKind kind);
std::vector<std::string> target_names();

// Fixed point away from the basepoint used by the anchored targets.
Point default_anchor(const SpaceDescriptor& space);

struct TargetSpec {
  TargetKind kind = TargetKind::SinLogDet;
  std::optional<Point> anchor;
};

// sin(log det x) needs a cone; the others work on every space.
std::function<double(const Point&)> make_target(const TargetSpec& target, const SpaceDescriptor& space,
                                                const KernelHandle& kernel);

struct ExperimentConfig {
  SpaceDescriptor space;
  KernelHandle kernel;
  TargetSpec target;
  std::vector<int> sizes;
  std::uint64_t seed = 0;
  double ball_radius = 2.0;
  int heldout = 1000;
  std::optional<double> mu;
  // Replace the first training point by the target anchor.
  bool anchor_in_training = false;
};

struct ExperimentReport {
  std::vector<int> sizes;
  std::vector<double> rms;
  std::vector<double> sup;
  std::vector<double> mu;
  std::vector<double> objective;
  std::uint64_t seed = 0;
};

// Nested training sets (the first N of one ball sample) and a held-out set of
// `heldout` ball points drawn from a derived seed.
ExperimentReport universality_experiment(const ExperimentConfig& config);

}  // namespace symmkern
