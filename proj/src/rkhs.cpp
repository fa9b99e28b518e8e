#include "symmkern/rkhs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "symmkern/error.hpp"
#include "symmkern/io.hpp"

namespace symmkern {

namespace {

constexpr double kInvarianceTol = 1e-9;
constexpr std::uint64_t kHeldoutSeedOffset = 0x9E3779B97F4A7C15ULL;

// Runs body(i) for i in [0, n) over `threads` workers with a strided split.
template <class F>
void parallel_rows(int n, int threads, F&& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < n; i += threads) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

int resolve_threads(int threads) { return threads > 0 ? threads : default_thread_count(); }

}  // namespace

int default_thread_count() {
  if (const char* env = std::getenv("SYMMKERN_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

GramMatrix gram(const std::vector<Point>& points, const KernelHandle& kernel, std::uint64_t seed, int threads) {
  const int n = static_cast<int>(points.size());
  const SpaceDescriptor& space = kernel_space(kernel);
  for (const Point& p : points)
    if (!(space_of(p) == space))
      throw DomainError("gram: point of " + space_of(p).name() + " for a kernel on " + space.name());

  GramMatrix g;
  g.values.resize(n, n);
  parallel_rows(n, resolve_threads(threads), [&](int i) {
    for (int j = i; j < n; ++j) g.values(i, j) = kernel_value(kernel, points[static_cast<std::size_t>(i)],
                                                              points[static_cast<std::size_t>(j)]);
  });
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) g.values(i, j) = g.values(j, i);
  g.metadata.kernel_id = kernel_id(kernel);
  g.metadata.space = space.name();
  g.metadata.point_hash = point_set_hash(points);
  g.metadata.seed = seed;
  return g;
}

Eigen::MatrixXd cross_kernel(const std::vector<Point>& a, const std::vector<Point>& b, const KernelHandle& kernel,
                             int threads) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  parallel_rows(static_cast<int>(a.size()), resolve_threads(threads), [&](int i) {
    for (std::size_t j = 0; j < b.size(); ++j)
      out(i, static_cast<Eigen::Index>(j)) = kernel_value(kernel, a[static_cast<std::size_t>(i)], b[j]);
  });
  return out;
}

PsdReport check_psd(const Eigen::MatrixXd& matrix, double tol) {
  if (matrix.rows() != matrix.cols()) throw DomainError("check_psd: matrix must be square");
  PsdReport r;
  r.tol = tol;
  if (matrix.size() == 0) {
    r.pass = true;
    return r;
  }
  const double scale = std::max(matrix.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("check_psd: matrix is not symmetric");
  const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("check_psd: eigensolver failed");
  r.min_eig = eig.eigenvalues().minCoeff();
  r.max_eig = eig.eigenvalues().maxCoeff();
  r.pass = r.min_eig >= -tol * r.max_eig;
  return r;
}

InvarianceReport check_invariance(const KernelHandle& kernel, const std::vector<Point>& points,
                                  const std::vector<GroupElement>& group_elements) {
  InvarianceReport r;
  const std::size_t n = points.size();
  for (const GroupElement& g : group_elements) {
    std::vector<Point> moved;
    moved.reserve(n);
    for (const Point& p : points) moved.push_back(act(g, p));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const double k0 = kernel_value(kernel, points[i], points[j]);
        const double k1 = kernel_value(kernel, moved[i], moved[j]);
        const double dev = std::abs(k1 - k0) / (k0 != 0.0 ? std::abs(k0) : 1.0);
        r.max_rel_deviation = std::max(r.max_rel_deviation, dev);
        ++r.comparisons;
      }
  }
  r.pass = r.max_rel_deviation < kInvarianceTol;
  return r;
}

double default_ridge(const Eigen::MatrixXd& k) {
  if (k.rows() == 0) throw DomainError("default_ridge: empty matrix");
  return 1e-8 * k.trace() / static_cast<double>(k.rows());
}

RegressionModel krr_fit(const std::vector<Point>& points, const Eigen::VectorXd& targets, const KernelHandle& kernel,
                        std::optional<double> mu) {
  if (points.empty()) throw DomainError("krr_fit: no training points");
  if (targets.size() != static_cast<Eigen::Index>(points.size()))
    throw DomainError("krr_fit: one target per training point is required");
  const Eigen::MatrixXd k = gram(points, kernel).values;
  const double ridge = mu ? *mu : default_ridge(k);
  if (!(ridge > 0.0) || !std::isfinite(ridge)) throw DomainError("krr_fit: ridge parameter must be positive");

  Eigen::MatrixXd a = k;
  a.diagonal().array() += ridge;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw NumericalError("krr_fit: Cholesky of K + mu I failed (Gram matrix not positive semidefinite)");

  RegressionModel model;
  model.points = points;
  model.kernel = kernel;
  model.mu = ridge;
  model.coefficients = llt.solve(targets);
  const double ynorm = targets.norm();
  model.relative_residual = ynorm > 0.0 ? (a * model.coefficients - targets).norm() / ynorm : 0.0;
  model.objective = ridge * targets.dot(model.coefficients);
  return model;
}

double krr_predict(const RegressionModel& model, const Point& query) {
  double s = 0.0;
  for (std::size_t j = 0; j < model.points.size(); ++j)
    s += model.coefficients(static_cast<Eigen::Index>(j)) * kernel_value(model.kernel, model.points[j], query);
  return s;
}

Eigen::VectorXd krr_predict(const RegressionModel& model, const std::vector<Point>& queries) {
  return cross_kernel(queries, model.points, model.kernel) * model.coefficients;
}

TargetKind parse_target(const std::string& name) {
  if (name == "zero") return TargetKind::Zero;
  if (name == "sin-logdet") return TargetKind::SinLogDet;
  if (name == "geodesic-bump") return TargetKind::GeodesicBump;
  if (name == "kernel-translate") return TargetKind::KernelTranslate;
  std::string list;
  for (const auto& t : target_names()) list += (list.empty() ? "" : ", ") + t;
  throw DomainError("unknown target '" + name + "' (built-ins: " + list + ")");
}

std::string to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::Zero: return "zero";
    case TargetKind::SinLogDet: return "sin-logdet";
    case TargetKind::GeodesicBump: return "geodesic-bump";
    case TargetKind::KernelTranslate: return "kernel-translate";
  }
  return "?";
}

std::vector<std::string> target_names() { return {"zero", "sin-logdet", "geodesic-bump", "kernel-translate"}; }

Point default_anchor(const SpaceDescriptor& space) {
  if (space.is_hyperbolic()) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(space.dim());
    v(0) = 0.6;
    v(1) = -0.3;
    return HyperbolicPoint::exp_at_basepoint(v);
  }
  const int n = space.rank();
  const int m = space.embedded_size();
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(m, m);
  const int block = m / n;
  for (int j = 0; j < n; ++j)
    for (int b = 0; b < block; ++b) x(block * j + b, block * j + b) = std::exp(0.5 - 0.4 * j);
  // Off-diagonal coupling of the first two rows keeps the anchor off the
  // diagonal subgroup.
  if (n >= 2) {
    for (int b = 0; b < block; ++b) {
      x(b, block + b) = 0.3;
      x(block + b, b) = 0.3;
    }
  }
  return ConePoint(space, x);
}

std::function<double(const Point&)> make_target(const TargetSpec& target, const SpaceDescriptor& space,
                                                const KernelHandle& kernel) {
  const Point anchor = target.anchor ? *target.anchor : default_anchor(space);
  if (!(space_of(anchor) == space)) throw DomainError("target anchor lies in a different space");
  switch (target.kind) {
    case TargetKind::Zero: return [](const Point&) { return 0.0; };
    case TargetKind::SinLogDet:
      if (!space.is_cone()) throw DomainError("target sin-logdet requires a cone");
      return [](const Point& x) { return std::sin(std::get<ConePoint>(x).log_det()); };
    case TargetKind::GeodesicBump:
      return [anchor](const Point& x) {
        const double d = geodesic_distance(x, anchor);
        return std::exp(-d * d);
      };
    case TargetKind::KernelTranslate:
      return [anchor, kernel](const Point& x) { return kernel_value(kernel, anchor, x); };
  }
  throw DomainError("unknown target");
}

ExperimentReport universality_experiment(const ExperimentConfig& config) {
  if (config.sizes.empty()) throw DomainError("universality_experiment: no training sizes");
  for (int n : config.sizes)
    if (n < 1) throw DomainError("universality_experiment: training sizes must be positive");
  if (config.heldout < 1) throw DomainError("universality_experiment: held-out size must be positive");
  if (!(kernel_space(config.kernel) == config.space))
    throw DomainError("universality_experiment: kernel and space disagree");

  const auto f = make_target(config.target, config.space, config.kernel);
  const int max_n = *std::max_element(config.sizes.begin(), config.sizes.end());
  std::vector<Point> train = sample_ball(config.space, max_n, config.ball_radius, config.seed);
  if (config.anchor_in_training)
    train[0] = config.target.anchor ? *config.target.anchor : default_anchor(config.space);
  const std::vector<Point> test =
      sample_ball(config.space, config.heldout, config.ball_radius, config.seed + kHeldoutSeedOffset);

  Eigen::VectorXd y_train(max_n);
  for (int i = 0; i < max_n; ++i) y_train(i) = f(train[static_cast<std::size_t>(i)]);
  Eigen::VectorXd y_test(config.heldout);
  for (int i = 0; i < config.heldout; ++i) y_test(i) = f(test[static_cast<std::size_t>(i)]);

  const Eigen::MatrixXd k_train = gram(train, config.kernel).values;
  const Eigen::MatrixXd k_cross = cross_kernel(test, train, config.kernel);

  ExperimentReport report;
  report.seed = config.seed;
  for (int n : config.sizes) {
    const Eigen::MatrixXd k = k_train.topLeftCorner(n, n);
    const double ridge = config.mu ? *config.mu : default_ridge(k);
    if (!(ridge > 0.0)) throw DomainError("universality_experiment: ridge parameter must be positive");
    Eigen::MatrixXd a = k;
    a.diagonal().array() += ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) throw NumericalError("universality_experiment: Cholesky failed");
    const Eigen::VectorXd y = y_train.head(n);
    const Eigen::VectorXd coef = llt.solve(y);
    const Eigen::VectorXd err = k_cross.leftCols(n) * coef - y_test;
    report.sizes.push_back(n);
    report.rms.push_back(std::sqrt(err.squaredNorm() / static_cast<double>(config.heldout)));
    report.sup.push_back(err.cwiseAbs().maxCoeff());
    report.mu.push_back(ridge);
    report.objective.push_back(ridge * y.dot(coef));
  }
  return report;
}

}  // namespace symmkern
