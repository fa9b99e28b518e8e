#include "symmkern/spectral_kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "symmkern/error.hpp"
#include "symmkern/special_functions.hpp"

namespace symmkern {

namespace {

using cd = std::complex<double>;

constexpr double kUnderflowLog = -700.0;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be a positive finite number");
}

std::string format_param(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

double betaprime_threshold(const SpaceDescriptor& space) {
  if (!space.is_cone()) throw DomainError("Beta-prime kernels are defined on cones only");
  return 0.5 * space.beta() * (space.rank() - 1);
}

SpectralDensity::SpectralDensity(SpaceDescriptor space, Params params, double normalization)
    : space_(std::move(space)), params_(params), normalization_(normalization) {
  require_positive(normalization_, "density normalization");
  std::visit(overloaded{
                 [](const HeatDensity& h) { require_positive(h.kappa, "heat kappa"); },
                 [](const MaternDensity& m) {
                   require_positive(m.kappa, "Matern kappa");
                   require_positive(m.nu, "Matern nu");
                 },
                 [this](const BetaPrimeDensity& b) {
                   const double threshold = betaprime_threshold(space_);
                   if (!std::isfinite(b.alpha) || !(b.alpha > threshold))
                     throw DomainError("Beta-prime alpha = " + format_param(b.alpha) +
                                       " violates alpha > (beta/2)(n-1) = " + format_param(threshold) + " on " +
                                       space_.name());
                 },
             },
             params_);
}

SpectralDensity SpectralDensity::heat(const SpaceDescriptor& space, double kappa) {
  return SpectralDensity(space, HeatDensity{kappa});
}

SpectralDensity SpectralDensity::matern(const SpaceDescriptor& space, double kappa, double nu) {
  return SpectralDensity(space, MaternDensity{kappa, nu});
}

SpectralDensity SpectralDensity::beta_prime(const SpaceDescriptor& space, double alpha) {
  return SpectralDensity(space, BetaPrimeDensity{alpha});
}

std::string SpectralDensity::tag() const {
  return std::visit(overloaded{
                        [](const HeatDensity&) { return std::string("heat"); },
                        [](const MaternDensity&) { return std::string("matern"); },
                        [](const BetaPrimeDensity&) { return std::string("betaprime"); },
                    },
                    params_);
}

double SpectralDensity::log_eval(const std::vector<double>& lambda) const {
  const double bracket2 = std::pow(lambda_bracket(space_, lambda), 2);
  const double log_norm = std::log(normalization_);
  return std::visit(
      overloaded{
          [&](const HeatDensity& h) { return log_norm - 0.5 * h.kappa * h.kappa * bracket2; },
          [&](const MaternDensity& m) {
            const double base = 2.0 * m.nu / (m.kappa * m.kappa) + bracket2;
            return log_norm - (m.nu + 0.5 * space_.dim()) * std::log(base);
          },
          [&](const BetaPrimeDensity& b) {
            const int n = space_.rank();
            std::vector<cd> tau(static_cast<std::size_t>(n));
            std::vector<cd> two_alpha(static_cast<std::size_t>(n), cd(2.0 * b.alpha, 0.0));
            for (int j = 0; j < n; ++j) {
              const auto uj = static_cast<std::size_t>(j);
              tau[uj] = cd(b.alpha + space_.rho()[uj], lambda[uj]);
            }
            const cd num = cone_log_gamma(tau, space_.beta(), space_.dim());
            const cd den = cone_log_gamma(two_alpha, space_.beta(), space_.dim());
            return log_norm + 2.0 * num.real() - den.real();
          },
      },
      params_);
}

double SpectralDensity::eval(const std::vector<double>& lambda) const { return std::exp(log_eval(lambda)); }

double density_eval(const SpectralDensity& psi, const std::vector<double>& lambda) { return psi.eval(lambda); }

double quaternion_det(const QuaternionMatrix& x) {
  if (x.rows() != x.cols()) throw DomainError("quaternion_det: matrix must be square");
  const Eigen::MatrixXcd chi = embed(x);
  const double scale = std::max(chi.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if ((chi - chi.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("quaternion_det: matrix is not Hermitian");
  const cd det = chi.determinant();
  const double mag = std::max(std::abs(det), std::pow(scale, static_cast<double>(chi.rows())));
  if (det.real() < -1e-12 * mag) throw DomainError("quaternion_det: embedding determinant is negative");
  return std::sqrt(std::max(det.real(), 0.0));
}

double betaprime_log_kernel(const ConePoint& x, const ConePoint& y, double alpha) {
  if (!(x.space() == y.space())) throw DomainError("betaprime_kernel: points belong to different cones");
  const ConePoint sum(x.space(), x.embedded() + y.embedded());
  return alpha * (x.log_det() + y.log_det() - 2.0 * sum.log_det());
}

double betaprime_kernel(const ConePoint& x, const ConePoint& y, double alpha) {
  const double lk = betaprime_log_kernel(x, y, alpha);
  if (lk < kUnderflowLog)
    throw NumericalError("betaprime_kernel: log value " + format_param(lk) + " underflows");
  return std::exp(lk);
}

KernelHandle make_betaprime_kernel(const SpaceDescriptor& space, double alpha) {
  SpectralDensity::beta_prime(space, alpha);
  return BetaPrimeKernel{space, alpha};
}

KernelHandle make_geodesic_gaussian_kernel(const SpaceDescriptor& space, double sigma) {
  require_positive(sigma, "geodesic-Gaussian sigma");
  return GeodesicGaussianKernel{space, sigma};
}

const SpaceDescriptor& kernel_space(const KernelHandle& k) {
  return std::visit(overloaded{
                        [](const BetaPrimeKernel& b) -> const SpaceDescriptor& { return b.space; },
                        [](const SynthesizedKernel& s) -> const SpaceDescriptor& { return s.density().space(); },
                        [](const GeodesicGaussianKernel& g) -> const SpaceDescriptor& { return g.space; },
                    },
                    k);
}

std::string kernel_id(const KernelHandle& k) {
  return std::visit(
      overloaded{
          [](const BetaPrimeKernel& b) { return "betaprime:alpha=" + format_param(b.alpha); },
          [](const SynthesizedKernel& s) {
            return std::visit(overloaded{
                                  [](const HeatDensity& h) { return "heat:kappa=" + format_param(h.kappa); },
                                  [](const MaternDensity& m) {
                                    return "matern:kappa=" + format_param(m.kappa) + ",nu=" + format_param(m.nu);
                                  },
                                  [](const BetaPrimeDensity& b) {
                                    return "betaprime-synth:alpha=" + format_param(b.alpha);
                                  },
                              },
                              s.density().params());
          },
          [](const GeodesicGaussianKernel& g) { return "geodesic-gaussian:sigma=" + format_param(g.sigma); },
      },
      k);
}

double kernel_value(const KernelHandle& k, const Point& x, const Point& y) {
  const SpaceDescriptor& space = kernel_space(k);
  auto check = [&](const Point& p) {
    if (!(space_of(p) == space))
      throw DomainError("kernel on " + space.name() + " applied to a point of " + space_of(p).name());
  };
  check(x);
  check(y);
  return std::visit(overloaded{
                        [&](const BetaPrimeKernel& b) {
                          return betaprime_kernel(std::get<ConePoint>(x), std::get<ConePoint>(y), b.alpha);
                        },
                        [&](const SynthesizedKernel& s) { return s.at_distance(geodesic_distance(x, y)); },
                        [&](const GeodesicGaussianKernel& g) {
                          const double d = geodesic_distance(x, y);
                          return std::exp(-d * d / (2.0 * g.sigma * g.sigma));
                        },
                    },
                    k);
}

double synthesize_kernel(const KernelHandle& k, double r) {
  const auto* s = std::get_if<SynthesizedKernel>(&k);
  if (s == nullptr) throw DomainError("synthesize_kernel: handle is not a synthesized kernel");
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("synthesize_kernel: radius must be finite and nonnegative");
  return s->at_distance(r);
}

UniversalityCertificate certify_universality(const SpectralDensity& psi) {
  const SpaceDescriptor& space = psi.space();
  UniversalityCertificate cert;
  cert.dims_n = space.dim();
  const double inf = std::numeric_limits<double>::infinity();

  // Analytic facts per family: every density here is a positive continuous
  // function of lambda, maximal at lambda = 0, decaying either faster than any
  // power (heat, Beta-prime) or like <lambda>^-(2 nu + d) (Matern).
  bool analytic_integrable = true;
  std::visit(overloaded{
                 [&](const HeatDensity&) { cert.decay_exponent_2s = inf; },
                 [&](const MaternDensity& m) {
                   cert.decay_exponent_2s = 2.0 * m.nu + space.dim();
                   analytic_integrable = cert.decay_exponent_2s > space.dim();
                 },
                 [&](const BetaPrimeDensity&) { cert.decay_exponent_2s = inf; },
             },
             psi.params());

  // Spot checks on lambda in [0, 1e3], along the diagonal direction for
  // higher rank, all in log domain.
  bool positive = true;
  bool bounded = true;
  const double log_peak = psi.log_eval(std::vector<double>(static_cast<std::size_t>(space.rank()), 0.0));
  for (int i = 0; i <= 2000; ++i) {
    const double t = 1e3 * i / 2000.0;
    const double lv = psi.log_eval(std::vector<double>(static_cast<std::size_t>(space.rank()), t));
    if (std::isnan(lv) || lv == -inf) positive = false;
    if (!std::isfinite(lv) && lv != -inf) bounded = false;
    if (lv > log_peak + 1e-9 * std::max(1.0, std::abs(log_peak))) bounded = false;
  }
  cert.positive_ae = positive;
  cert.bounded = bounded && std::isfinite(log_peak);
  cert.integrable = analytic_integrable;
  cert.c0_vanishing = true;
  cert.claim_l2 = cert.positive_ae && cert.bounded && cert.integrable;
  cert.claim_cc = cert.claim_l2 && cert.decay_exponent_2s > space.dim();
  cert.claim_c0 = cert.claim_cc && cert.c0_vanishing;
  return cert;
}

}  // namespace symmkern
