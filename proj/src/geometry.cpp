#include "symmkern/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "symmkern/error.hpp"

namespace symmkern {

namespace {

using cd = std::complex<double>;

constexpr double kHermitianTol = 1e-12;
constexpr double kHyperboloidTol = 1e-12;
constexpr double kActHyperboloidTol = 1e-8;
constexpr double kMaxTransformCondition = 1e12;
constexpr double kLorentzTol = 1e-10;
constexpr double kSampleJitter = 1e-6;

int parse_positive_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 1)
    throw DomainError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  return value;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Random matrix over the algebra, returned in embedded form.
Eigen::MatrixXcd random_algebra_matrix(const SpaceDescriptor& space, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = space.rank();
  switch (space.algebra()) {
    case ScalarAlgebra::Real: {
      Eigen::MatrixXcd a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cd(normal(rng), 0.0);
      return a;
    }
    case ScalarAlgebra::Complex: {
      Eigen::MatrixXcd a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double re = normal(rng);
          const double im = normal(rng);
          a(i, j) = cd(re, im);
        }
      return a;
    }
    case ScalarAlgebra::Quaternion: {
      QuaternionMatrix q(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Quaternion& e = q(i, j);
          e.w = normal(rng);
          e.x = normal(rng);
          e.y = normal(rng);
          e.z = normal(rng);
        }
      return embed(q);
    }
  }
  throw DomainError("unknown scalar algebra");
}

void check_real_entries(const Eigen::MatrixXcd& m, std::string_view what) {
  const double scale = std::max(max_abs(m), std::numeric_limits<double>::min());
  if (m.imag().cwiseAbs().maxCoeff() > kHermitianTol * scale)
    throw DomainError(std::string(what) + ": real algebra requires real entries");
}

double condition_number(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0) || !std::isfinite(s(0))) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

Eigen::MatrixXd random_rotation(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

Eigen::MatrixXd minkowski_metric(int d) {
  Eigen::MatrixXd j = -Eigen::MatrixXd::Identity(d + 1, d + 1);
  j(0, 0) = 1.0;
  return j;
}

}  // namespace

int algebra_beta(ScalarAlgebra a) {
  switch (a) {
    case ScalarAlgebra::Real: return 1;
    case ScalarAlgebra::Complex: return 2;
    case ScalarAlgebra::Quaternion: return 4;
  }
  return 0;
}

std::string_view to_string(ScalarAlgebra a) {
  switch (a) {
    case ScalarAlgebra::Real: return "real";
    case ScalarAlgebra::Complex: return "complex";
    case ScalarAlgebra::Quaternion: return "quaternion";
  }
  return "?";
}

SpaceDescriptor SpaceDescriptor::cone(ScalarAlgebra algebra, int n) {
  if (n < 1) throw DomainError("cone rank must be positive");
  SpaceDescriptor s;
  s.kind_ = SpaceKind::Cone;
  s.algebra_ = algebra;
  s.rank_ = n;
  s.beta_ = algebra_beta(algebra);
  s.dim_ = n + s.beta_ * n * (n - 1) / 2;
  s.rho_.resize(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) s.rho_[static_cast<std::size_t>(j - 1)] = 0.25 * s.beta_ * (2 * j - n - 1);
  return s;
}

SpaceDescriptor SpaceDescriptor::hyperbolic(int d) {
  if (d < 2) throw DomainError("hyperbolic dimension must be at least 2");
  SpaceDescriptor s;
  s.kind_ = SpaceKind::Hyperbolic;
  s.algebra_ = ScalarAlgebra::Real;
  s.rank_ = 1;
  s.dim_ = d;
  s.beta_ = 0;
  s.rho_ = {0.5 * (d - 1)};
  return s;
}

SpaceDescriptor SpaceDescriptor::parse(std::string_view text) {
  if (text.size() >= 2 && (text[0] == 'H' || text[0] == 'h') && text.find(':') == std::string_view::npos)
    return hyperbolic(parse_positive_int(text.substr(1), "hyperbolic dimension"));

  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() == 2 && parts[0] == "hyperbolic")
    return hyperbolic(parse_positive_int(parts[1], "hyperbolic dimension"));
  if (parts.size() == 3 && parts[0] == "spd") {
    ScalarAlgebra algebra;
    if (parts[1] == "real") algebra = ScalarAlgebra::Real;
    else if (parts[1] == "complex") algebra = ScalarAlgebra::Complex;
    else if (parts[1] == "quaternion") algebra = ScalarAlgebra::Quaternion;
    else throw DomainError("unknown scalar algebra '" + std::string(parts[1]) + "'");
    return cone(algebra, parse_positive_int(parts[2], "cone rank"));
  }
  throw DomainError("cannot parse space '" + std::string(text) +
                    "' (expected spd:<real|complex|quaternion>:<n> or hyperbolic:<d>)");
}

double SpaceDescriptor::rho_norm_sq() const {
  double s = 0.0;
  for (double r : rho_) s += r * r;
  return s;
}

int SpaceDescriptor::embedded_size() const {
  if (!is_cone()) throw DomainError("embedded_size: not a cone");
  return algebra_ == ScalarAlgebra::Quaternion ? 2 * rank_ : rank_;
}

std::string SpaceDescriptor::name() const {
  if (is_hyperbolic()) return "hyperbolic:" + std::to_string(dim_);
  return "spd:" + std::string(to_string(algebra_)) + ":" + std::to_string(rank_);
}

// ---------------------------------------------------------------------------

namespace {

// Rebuilds a Hermitian embedding from the upper block triangle so that the
// stored matrix is exactly embed(q) for a Hermitian quaternion matrix q.
Eigen::MatrixXcd canonical_quaternion_embedding(const Eigen::MatrixXcd& m) {
  QuaternionMatrix q = quaternion_from_embedded(m);
  for (int i = 0; i < q.rows(); ++i) {
    q(i, i) = Quaternion{q(i, i).w, 0.0, 0.0, 0.0};
    for (int j = i + 1; j < q.cols(); ++j) q(j, i) = q(i, j).conj();
  }
  return embed(q);
}

}  // namespace

ConePoint::ConePoint(SpaceDescriptor space, const Eigen::MatrixXcd& embedded) : space_(std::move(space)) {
  if (!space_.is_cone()) throw DomainError("ConePoint requires a cone space");
  const int m = space_.embedded_size();
  if (embedded.rows() != m || embedded.cols() != m)
    throw DomainError("ConePoint: expected a " + std::to_string(m) + "x" + std::to_string(m) + " matrix for " +
                      space_.name());
  if (!embedded.allFinite()) throw DomainError("ConePoint: non-finite entry");

  const double scale = std::max(max_abs(embedded), std::numeric_limits<double>::min());
  const double defect = max_abs(embedded - embedded.adjoint()) / scale;
  if (defect > kHermitianTol)
    throw DomainError("ConePoint: matrix is not Hermitian (relative deviation " + std::to_string(defect) + ")");
  if (space_.algebra() == ScalarAlgebra::Real) check_real_entries(embedded, "ConePoint");
  if (space_.algebra() == ScalarAlgebra::Quaternion && embedding_defect(embedded) > kHermitianTol)
    throw DomainError("ConePoint: matrix is not the embedding of a quaternion matrix");

  mat_ = 0.5 * (embedded + embedded.adjoint());
  if (space_.algebra() == ScalarAlgebra::Real) mat_ = mat_.real().cast<cd>();
  if (space_.algebra() == ScalarAlgebra::Quaternion) mat_ = canonical_quaternion_embedding(mat_);

  Eigen::LLT<Eigen::MatrixXcd> llt(mat_);
  if (llt.info() != Eigen::Success) throw DomainError("ConePoint: matrix is not positive definite");
  double log_det = 0.0;
  const Eigen::MatrixXcd& l = llt.matrixLLT();
  for (int i = 0; i < m; ++i) {
    const double lii = l(i, i).real();
    if (!(lii > 0.0) || !std::isfinite(lii)) throw DomainError("ConePoint: matrix is not positive definite");
    log_det += 2.0 * std::log(lii);
  }
  log_det_ = space_.algebra() == ScalarAlgebra::Quaternion ? 0.5 * log_det : log_det;
}

ConePoint ConePoint::from_real(const Eigen::MatrixXd& x) {
  if (x.rows() != x.cols()) throw DomainError("ConePoint: matrix must be square");
  return ConePoint(SpaceDescriptor::cone(ScalarAlgebra::Real, static_cast<int>(x.rows())), x.cast<cd>());
}

ConePoint ConePoint::from_complex(const Eigen::MatrixXcd& x) {
  if (x.rows() != x.cols()) throw DomainError("ConePoint: matrix must be square");
  return ConePoint(SpaceDescriptor::cone(ScalarAlgebra::Complex, static_cast<int>(x.rows())), x);
}

ConePoint ConePoint::from_quaternion(const QuaternionMatrix& x) {
  if (x.rows() != x.cols()) throw DomainError("ConePoint: matrix must be square");
  return ConePoint(SpaceDescriptor::cone(ScalarAlgebra::Quaternion, x.rows()), embed(x));
}

QuaternionMatrix ConePoint::quaternion_entries() const {
  if (space_.algebra() != ScalarAlgebra::Quaternion) throw DomainError("quaternion_entries: not a quaternion cone");
  return quaternion_from_embedded(mat_);
}

// ---------------------------------------------------------------------------

HyperbolicPoint HyperbolicPoint::projected(const Eigen::VectorXd& coords, double rel_tol) {
  if (coords.size() < 3) throw DomainError("HyperbolicPoint: need at least 3 coordinates (d >= 2)");
  if (!coords.allFinite()) throw DomainError("HyperbolicPoint: non-finite coordinate");
  const double x0 = coords(0);
  if (!(x0 > 0.0)) throw DomainError("HyperbolicPoint: x0 must be positive (upper sheet)");
  const double spatial = coords.tail(coords.size() - 1).squaredNorm();
  const double form = x0 * x0 - spatial;
  if (std::abs(form - 1.0) > rel_tol * std::max(1.0, x0 * x0))
    throw DomainError("HyperbolicPoint: Minkowski norm " + std::to_string(form) + " differs from 1");
  HyperbolicPoint p;
  p.coords_ = coords;
  p.coords_(0) = std::sqrt(1.0 + spatial);
  return p;
}

HyperbolicPoint::HyperbolicPoint(const Eigen::VectorXd& coords) : coords_(projected(coords, kHyperboloidTol).coords_) {}

HyperbolicPoint HyperbolicPoint::basepoint(int d) {
  if (d < 2) throw DomainError("hyperbolic dimension must be at least 2");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
  c(0) = 1.0;
  HyperbolicPoint p;
  p.coords_ = c;
  return p;
}

HyperbolicPoint HyperbolicPoint::exp_at_basepoint(const Eigen::VectorXd& tangent) {
  const double t = tangent.norm();
  Eigen::VectorXd c(tangent.size() + 1);
  c(0) = std::cosh(t);
  if (t > 0.0) c.tail(tangent.size()) = (std::sinh(t) / t) * tangent;
  else c.tail(tangent.size()).setZero();
  return projected(c, kHyperboloidTol);
}

SpaceDescriptor space_of(const Point& p) {
  return std::visit([](const auto& q) { return SpaceDescriptor(q.space()); }, p);
}

Point basepoint(const SpaceDescriptor& space) {
  if (space.is_hyperbolic()) return HyperbolicPoint::basepoint(space.dim());
  const int m = space.embedded_size();
  return ConePoint(space, Eigen::MatrixXcd::Identity(m, m));
}

// ---------------------------------------------------------------------------

ConeTransform::ConeTransform(SpaceDescriptor space, const Eigen::MatrixXcd& embedded) : space_(std::move(space)) {
  if (!space_.is_cone()) throw DomainError("ConeTransform requires a cone space");
  const int m = space_.embedded_size();
  if (embedded.rows() != m || embedded.cols() != m) throw DomainError("ConeTransform: dimension mismatch");
  if (!embedded.allFinite()) throw DomainError("ConeTransform: non-finite entry");
  if (space_.algebra() == ScalarAlgebra::Real) check_real_entries(embedded, "ConeTransform");
  if (space_.algebra() == ScalarAlgebra::Quaternion && embedding_defect(embedded) > kHermitianTol)
    throw DomainError("ConeTransform: matrix is not the embedding of a quaternion matrix");
  const double cond = condition_number(embedded);
  if (!(cond < kMaxTransformCondition))
    throw DomainError("ConeTransform: numerically singular (condition number " + std::to_string(cond) + ")");
  mat_ = embedded;
}

ConeTransform ConeTransform::identity(const SpaceDescriptor& space) {
  const int m = space.embedded_size();
  return ConeTransform(space, Eigen::MatrixXcd::Identity(m, m));
}

ConeTransform ConeTransform::scaling(const SpaceDescriptor& space, double c) {
  const int m = space.embedded_size();
  return ConeTransform(space, c * Eigen::MatrixXcd::Identity(m, m));
}

LorentzTransform::LorentzTransform(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 3)
    throw DomainError("LorentzTransform: expected a square (d+1)x(d+1) matrix with d >= 2");
  if (!matrix.allFinite()) throw DomainError("LorentzTransform: non-finite entry");
  const int d = static_cast<int>(matrix.rows()) - 1;
  const Eigen::MatrixXd j = minkowski_metric(d);
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  const double defect = (matrix.transpose() * j * matrix - j).cwiseAbs().maxCoeff();
  if (defect > kLorentzTol * scale * scale)
    throw DomainError("LorentzTransform: matrix does not preserve the Minkowski form");
  if (!(matrix(0, 0) > 0.0)) throw DomainError("LorentzTransform: matrix does not preserve the upper sheet");
  mat_ = matrix;
}

LorentzTransform LorentzTransform::identity(int d) { return LorentzTransform(Eigen::MatrixXd::Identity(d + 1, d + 1)); }

LorentzTransform LorentzTransform::boost(int d, int axis, double rapidity) {
  if (axis < 0 || axis >= d) throw DomainError("LorentzTransform::boost: axis out of range");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d + 1, d + 1);
  m(0, 0) = m(axis + 1, axis + 1) = std::cosh(rapidity);
  m(0, axis + 1) = m(axis + 1, 0) = std::sinh(rapidity);
  return LorentzTransform(m);
}

GroupElement identity_element(const SpaceDescriptor& space) {
  if (space.is_hyperbolic()) return LorentzTransform::identity(space.dim());
  return ConeTransform::identity(space);
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
  if (g.index() != h.index()) throw DomainError("compose: group elements act on different spaces");
  if (const auto* gc = std::get_if<ConeTransform>(&g)) {
    const auto& hc = std::get<ConeTransform>(h);
    if (!(gc->space() == hc.space())) throw DomainError("compose: group elements act on different spaces");
    return ConeTransform(gc->space(), gc->embedded() * hc.embedded());
  }
  const auto& gl = std::get<LorentzTransform>(g);
  const auto& hl = std::get<LorentzTransform>(h);
  if (gl.dim() != hl.dim()) throw DomainError("compose: dimension mismatch");
  return LorentzTransform(gl.matrix() * hl.matrix());
}

ConePoint act(const ConeTransform& g, const ConePoint& x) {
  if (!(g.space() == x.space())) throw DomainError("act: group element and point belong to different spaces");
  return ConePoint(x.space(), g.embedded() * x.embedded() * g.embedded().adjoint());
}

HyperbolicPoint act(const LorentzTransform& g, const HyperbolicPoint& x) {
  if (g.dim() != x.dim()) throw DomainError("act: dimension mismatch");
  return HyperbolicPoint::projected(g.matrix() * x.coords(), kActHyperboloidTol);
}

Point act(const GroupElement& g, const Point& x) {
  if (const auto* gc = std::get_if<ConeTransform>(&g)) {
    const auto* xc = std::get_if<ConePoint>(&x);
    if (xc == nullptr) throw DomainError("act: cone transform applied to a hyperbolic point");
    return act(*gc, *xc);
  }
  const auto* xh = std::get_if<HyperbolicPoint>(&x);
  if (xh == nullptr) throw DomainError("act: Lorentz transform applied to a cone point");
  return act(std::get<LorentzTransform>(g), *xh);
}

// ---------------------------------------------------------------------------

std::vector<double> cone_radial(const ConePoint& x, const ConePoint& y) {
  if (!(x.space() == y.space())) throw DomainError("cone_radial: points belong to different cones");
  Eigen::LLT<Eigen::MatrixXcd> llt(y.embedded());
  if (llt.info() != Eigen::Success) throw NumericalError("cone_radial: Cholesky factorization failed");
  const auto lower = llt.matrixL();
  const Eigen::MatrixXcd z = lower.solve(x.embedded());
  Eigen::MatrixXcd m = lower.solve(Eigen::MatrixXcd(z.adjoint()));
  m = 0.5 * (m + m.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("cone_radial: eigensolver failed");
  const Eigen::VectorXd& ev = eig.eigenvalues();
  if (!(ev(0) > 0.0)) throw NumericalError("cone_radial: non-positive generalized eigenvalue");

  std::vector<double> out;
  if (x.space().algebra() == ScalarAlgebra::Quaternion) {
    // The embedding doubles every eigenvalue.
    for (Eigen::Index i = 0; i + 1 < ev.size(); i += 2) out.push_back(0.5 * (std::log(ev(i)) + std::log(ev(i + 1))));
  } else {
    for (Eigen::Index i = 0; i < ev.size(); ++i) out.push_back(std::log(ev(i)));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double cone_distance(const ConePoint& x, const ConePoint& y) {
  double s = 0.0;
  for (double t : cone_radial(x, y)) s += t * t;
  return std::sqrt(s);
}

double hyperbolic_distance(const HyperbolicPoint& x, const HyperbolicPoint& y) {
  if (x.dim() != y.dim()) throw DomainError("hyperbolic_distance: dimension mismatch");
  const Eigen::VectorXd& a = x.coords();
  const Eigen::VectorXd& b = y.coords();
  const double inner = a(0) * b(0) - a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
  if (inner < 1.0 - 1e-10 * a(0) * b(0))
    throw DomainError("hyperbolic_distance: Minkowski inner product below 1 (invalid points)");
  // Spacelike chord length; accurate for nearby points where acosh is not.
  const Eigen::VectorXd diff = a - b;
  const double chord2 = diff.tail(diff.size() - 1).squaredNorm() - diff(0) * diff(0);
  return 2.0 * std::asinh(0.5 * std::sqrt(std::max(chord2, 0.0)));
}

double geodesic_distance(const Point& x, const Point& y) {
  if (x.index() != y.index()) throw DomainError("geodesic_distance: points belong to different spaces");
  if (const auto* xc = std::get_if<ConePoint>(&x)) return cone_distance(*xc, std::get<ConePoint>(y));
  return hyperbolic_distance(std::get<HyperbolicPoint>(x), std::get<HyperbolicPoint>(y));
}

// ---------------------------------------------------------------------------

std::vector<Point> sample_points(const SpaceDescriptor& space, int count, std::uint64_t seed) {
  if (count < 1) throw DomainError("sample_points: count must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  if (space.is_hyperbolic()) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(space.dim());
    for (int k = 0; k < count; ++k) {
      for (int i = 0; i < space.dim(); ++i) v(i) = normal(rng);
      out.emplace_back(HyperbolicPoint::exp_at_basepoint(v));
    }
    return out;
  }
  const int m = space.embedded_size();
  for (int k = 0; k < count; ++k) {
    const Eigen::MatrixXcd a = random_algebra_matrix(space, rng);
    out.emplace_back(ConePoint(space, a * a.adjoint() + kSampleJitter * Eigen::MatrixXcd::Identity(m, m)));
  }
  return out;
}

std::vector<Point> sample_ball(const SpaceDescriptor& space, int count, double radius, std::uint64_t seed) {
  if (count < 1) throw DomainError("sample_ball: count must be at least 1");
  if (!(radius > 0.0)) throw DomainError("sample_ball: radius must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double inv_dim = 1.0 / space.dim();
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));

  if (space.is_hyperbolic()) {
    Eigen::VectorXd v(space.dim());
    for (int k = 0; k < count; ++k) {
      for (int i = 0; i < space.dim(); ++i) v(i) = normal(rng);
      const double r = radius * std::pow(uniform(rng), inv_dim);
      out.emplace_back(HyperbolicPoint::exp_at_basepoint(r * v / v.norm()));
    }
    return out;
  }

  const bool quaternion = space.algebra() == ScalarAlgebra::Quaternion;
  for (int k = 0; k < count; ++k) {
    const Eigen::MatrixXcd a = random_algebra_matrix(space, rng);
    const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double norm = std::sqrt(ev.squaredNorm() * (quaternion ? 0.5 : 1.0));
    const double r = radius * std::pow(uniform(rng), inv_dim);
    const Eigen::VectorXd scaled = (r / norm * ev).array().exp().matrix();
    const Eigen::MatrixXcd x = eig.eigenvectors() * scaled.cast<cd>().asDiagonal() * eig.eigenvectors().adjoint();
    out.emplace_back(ConePoint(space, x));
  }
  return out;
}

GroupElement random_group_element(const SpaceDescriptor& space, std::mt19937_64& rng, double max_condition) {
  if (space.is_hyperbolic()) {
    const int d = space.dim();
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd r1 = Eigen::MatrixXd::Identity(d + 1, d + 1);
    Eigen::MatrixXd r2 = Eigen::MatrixXd::Identity(d + 1, d + 1);
    r1.bottomRightCorner(d, d) = random_rotation(d, rng);
    r2.bottomRightCorner(d, d) = random_rotation(d, rng);
    const double rapidity = normal(rng);
    return LorentzTransform(r1 * LorentzTransform::boost(d, 0, rapidity).matrix() * r2);
  }
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Eigen::MatrixXcd a = random_algebra_matrix(space, rng);
    if (condition_number(a) < max_condition) return ConeTransform(space, a);
  }
  throw NumericalError("random_group_element: could not draw a well-conditioned element");
}

}  // namespace symmkern
