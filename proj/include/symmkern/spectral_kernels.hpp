#pragma once

// Spectral densities, the closed-form Beta-prime kernel, kernels synthesized
// from a density through spherical functions, and universality certificates.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "symmkern/geometry.hpp"

namespace symmkern {

struct HeatDensity {
  double kappa = 1.0;
};

struct MaternDensity {
  double kappa = 1.0;
  double nu = 1.5;
};

struct BetaPrimeDensity {
  double alpha = 1.0;
};

// Beta-prime densities need alpha > (beta/2)(n - 1).
double betaprime_threshold(const SpaceDescriptor& space);

/// psi(lambda) for a fixed space, scaled by `normalization`.
class SpectralDensity {
 public:
  using Params = std::variant<HeatDensity, MaternDensity, BetaPrimeDensity>;

  // Parameters are validated here: kappa, nu > 0; Beta-prime only on cones and
  // above betaprime_threshold().
  SpectralDensity(SpaceDescriptor space, Params params, double normalization = 1.0);

  static SpectralDensity heat(const SpaceDescriptor& space, double kappa);
  static SpectralDensity matern(const SpaceDescriptor& space, double kappa, double nu);
  static SpectralDensity beta_prime(const SpaceDescriptor& space, double alpha);

  const SpaceDescriptor& space() const { return space_; }
  const Params& params() const { return params_; }
  double normalization() const { return normalization_; }
  SpectralDensity with_normalization(double c) const { return SpectralDensity(space_, params_, c); }

  // "heat", "matern" or "betaprime".
  std::string tag() const;

  // log psi(lambda); lambda has one entry per rank.
  double log_eval(const std::vector<double>& lambda) const;
  double log_eval(double lambda) const { return log_eval(std::vector<double>{lambda}); }
  double eval(const std::vector<double>& lambda) const;
  double eval(double lambda) const { return eval(std::vector<double>{lambda}); }

 private:
  SpaceDescriptor space_;
  Params params_;
  double normalization_ = 1.0;
};

double density_eval(const SpectralDensity& psi, const std::vector<double>& lambda);

// det(chi(x))^(1/2) for a Hermitian quaternion matrix x.
double quaternion_det(const QuaternionMatrix& x);

// log of (det x det y / det(x + y)^2)^alpha.
double betaprime_log_kernel(const ConePoint& x, const ConePoint& y, double alpha);
// Throws NumericalError when the log value drops below -700.
double betaprime_kernel(const ConePoint& x, const ConePoint& y, double alpha);

/// Composite Gauss-Legendre rule over [0, cutoff] with equal panels.
struct QuadratureSpec {
  double cutoff = 0.0;
  int panels = 0;
  int nodes_per_panel = 32;
};

// sum_j w_j psi(lambda_j) mu(lambda_j) phi_{lambda_j}(r) for any density
// function on H^2, H^3 or the n = 1 cone. The imaginary part must stay below
// 1e-12 of the magnitude.
double synthesize_radial(const SpaceDescriptor& space, const std::function<double(double)>& psi,
                         const QuadratureSpec& spec, double r);

enum class SynthesisRoute {
  // Positive-weight Gauss-Legendre sum over spherical functions.
  SpectralQuadrature,
  // Closed-form cosine/sine transforms of the density mapped to the space by
  // the radial (Abel-type) transform.
  RadialTransform,
};

/// Radial kernel k(r) = int psi(lambda) phi_lambda(r) |c(lambda)|^-2 dlambda.
class SynthesizedKernel {
 public:
  // Picks the route automatically. With `normalize`, values are divided by the
  // total mass so that k(x, x) = 1.
  explicit SynthesizedKernel(const SpectralDensity& density, bool normalize = true);
  // Forces the spectral quadrature with the given rule. Throws
  // ConvergenceError when the tail beyond the cutoff exceeds 1e-10 of the
  // total or doubling the nodes moves the result by more than 1e-9.
  SynthesizedKernel(const SpectralDensity& density, const QuadratureSpec& spec, bool normalize = true);

  const SpectralDensity& density() const { return density_; }
  SynthesisRoute route() const { return route_; }
  const std::optional<QuadratureSpec>& quadrature() const { return spec_; }
  bool normalized() const { return normalize_; }

  // Unnormalized integral; raw(0) is the total spectral mass.
  double raw(double r) const;
  double total_mass() const { return mass_; }
  // Estimated mass beyond the cutoff (spectral quadrature only, else 0).
  double tail_mass() const { return tail_; }

  double at_distance(double r) const { return normalize_ ? raw(r) / mass_ : raw(r); }

 private:
  void build_spectral(const QuadratureSpec& spec);
  void build_radial();
  double raw_spectral(double r) const;
  double raw_radial(double r) const;
  double radial_sine(double s) const;
  double radial_cosine(double s) const;
  void check_refinement(const std::function<double(double)>& coarse, const std::function<double(double)>& fine,
                        const char* what) const;

  SpectralDensity density_;
  bool normalize_ = true;
  SynthesisRoute route_ = SynthesisRoute::SpectralQuadrature;
  std::optional<QuadratureSpec> spec_;
  double mass_ = 1.0;
  double tail_ = 0.0;

  // Spectral quadrature: nodes and amplitudes w_j psi_j mu_j.
  std::vector<double> lambdas_;
  std::vector<double> amps_;

  // Radial transform constants.
  double rt_prefactor_ = 0.0;  // Heat: exp(-t rho^2); Matern: sqrt(pi) / Gamma(m)
  double rt_t_ = 0.0;          // Heat diffusion time kappa^2 / 2
  double rt_a_ = 0.0;          // Matern sqrt(2 nu / kappa^2 + rho^2)
  double rt_p_ = 0.0;          // Matern m - 1/2
  double rt_span_ = 0.0;       // s-range kept by the H^2 transform
  std::vector<double> abel_nodes_;
  std::vector<double> abel_weights_;
};

struct BetaPrimeKernel {
  SpaceDescriptor space;
  double alpha = 1.0;
};

// exp(-d(x, y)^2 / (2 sigma^2)); not positive definite in general.
struct GeodesicGaussianKernel {
  SpaceDescriptor space;
  double sigma = 1.0;
};

using KernelHandle = std::variant<BetaPrimeKernel, SynthesizedKernel, GeodesicGaussianKernel>;

// Validates alpha against the threshold.
KernelHandle make_betaprime_kernel(const SpaceDescriptor& space, double alpha);
KernelHandle make_geodesic_gaussian_kernel(const SpaceDescriptor& space, double sigma);

const SpaceDescriptor& kernel_space(const KernelHandle& k);
// Short identifier such as "betaprime:alpha=2".
std::string kernel_id(const KernelHandle& k);

double kernel_value(const KernelHandle& k, const Point& x, const Point& y);

// k(r) for a synthesized handle (r is the geodesic distance, or |log x - log y|
// on the n = 1 cone).
double synthesize_kernel(const KernelHandle& k, double r);

struct UniversalityCertificate {
  bool positive_ae = false;
  bool bounded = false;
  bool integrable = false;
  double decay_exponent_2s = 0.0;  // +inf for super-polynomial decay
  int dims_n = 0;
  bool c0_vanishing = false;
  bool claim_l2 = false;
  bool claim_cc = false;
  bool claim_c0 = false;
};

UniversalityCertificate certify_universality(const SpectralDensity& psi);

}  // namespace symmkern
