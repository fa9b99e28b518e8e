#include <cmath>
#include <limits>
#include <numbers>

#include "symmkern/error.hpp"
#include "symmkern/quadrature.hpp"
#include "symmkern/special_functions.hpp"
#include "symmkern/spectral_kernels.hpp"

namespace symmkern {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kNodesPerPanel = 32;
constexpr int kMaxCutoff = 256;
constexpr double kAutoTailTol = 1e-13;
constexpr double kSpecTailTol = 1e-10;
constexpr double kRefineTol = 1e-9;
constexpr int kAbelLevels = 12;
constexpr int kAbelNodes = 16;
constexpr double kAbelDrop = 42.0;
const double kProbeRadii[] = {0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0};

double r_over_sinh(double r) {
  if (r < 1e-4) return 1.0 - r * r / 6.0;
  if (r > 20.0) return 2.0 * r * std::exp(-r) / (1.0 - std::exp(-2.0 * r));
  return r / std::sinh(r);
}

double log_sinh(double x) {
  if (x > 20.0) return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
  return std::log(std::sinh(x));
}

double spectral_weight(const SpaceDescriptor& space, const std::function<double(double)>& psi, double lambda) {
  return psi(lambda) * plancherel_density(space, lambda);
}

// Integral of psi * mu over [a, infinity): unit panels first, then the rest
// through lambda = b / u on u in (0, 1].
double tail_integral(const SpaceDescriptor& space, const std::function<double(double)>& psi, double a) {
  const QuadratureRule gl = gauss_legendre(kNodesPerPanel);
  auto f = [&](double l) { return spectral_weight(space, psi, l); };
  double near = 0.0;
  constexpr int kNearPanels = 64;
  std::vector<double> edges;
  for (int k = 0; k <= kNearPanels; ++k) edges.push_back(a + k);
  near = integrate(composite(gl, edges), f);

  const double b = a + kNearPanels;
  std::vector<double> uedges = {0.0, 1.0 / 64, 1.0 / 16, 0.25, 0.5, 1.0};
  const double far = integrate(composite(gl, uedges), [&](double u) { return f(b / u) * b / (u * u); });
  return near + far;
}

}  // namespace

double synthesize_radial(const SpaceDescriptor& space, const std::function<double(double)>& psi,
                         const QuadratureSpec& spec, double r) {
  if (!has_rank_one_spectrum(space))
    throw DomainError("synthesis supports H^2, H^3 and the n = 1 cone, not " + space.name());
  if (!(spec.cutoff > 0.0) || spec.panels < 1 || spec.nodes_per_panel < 1)
    throw DomainError("invalid quadrature spec");
  std::vector<double> edges;
  for (int k = 0; k <= spec.panels; ++k) edges.push_back(spec.cutoff * k / spec.panels);
  const QuadratureRule rule = composite(gauss_legendre(spec.nodes_per_panel), edges);
  std::complex<double> sum = 0.0;
  double magnitude = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double l = rule.nodes[j];
    const double a = rule.weights[j] * spectral_weight(space, psi, l);
    const std::complex<double> term = a * spherical_function(space, l, r);
    sum += term;
    magnitude += std::abs(term);
  }
  if (std::abs(sum.imag()) > 1e-12 * std::max(magnitude, std::numeric_limits<double>::min()))
    throw NumericalError("synthesize_radial: imaginary part above 1e-12 of the magnitude");
  return sum.real();
}

SynthesizedKernel::SynthesizedKernel(const SpectralDensity& density, bool normalize)
    : density_(density), normalize_(normalize) {
  const SpaceDescriptor& space = density_.space();
  if (!has_rank_one_spectrum(space))
    throw DomainError("synthesis supports H^2, H^3 and the n = 1 cone, not " + space.name());

  const bool h2 = space.is_hyperbolic() && space.dim() == 2;
  const bool matern = std::holds_alternative<MaternDensity>(density_.params());
  const bool beta = std::holds_alternative<BetaPrimeDensity>(density_.params());

  if (!h2 && !matern) {
    // Smallest integer cutoff whose tail is negligible.
    auto psi = [this](double l) { return density_.eval(l); };
    const QuadratureRule gl = gauss_legendre(kNodesPerPanel);
    std::vector<double> panel_mass;
    for (int k = 0; k < kMaxCutoff; ++k)
      panel_mass.push_back(integrate(composite(gl, {double(k), double(k + 1)}),
                                     [&](double l) { return spectral_weight(space, psi, l); }));
    double total = 0.0;
    for (double m : panel_mass) total += m;
    double tail = tail_integral(space, psi, kMaxCutoff);
    total += tail;
    int cutoff = kMaxCutoff;
    while (cutoff > 1 && tail + panel_mass[static_cast<std::size_t>(cutoff - 1)] <= kAutoTailTol * total) {
      tail += panel_mass[static_cast<std::size_t>(cutoff - 1)];
      --cutoff;
    }
    if (tail <= kAutoTailTol * total) {
      build_spectral(QuadratureSpec{double(cutoff), cutoff, kNodesPerPanel});
      return;
    }
  }
  if (beta) throw ConvergenceError("Beta-prime synthesis: spectral tail too heavy for the quadrature");
  build_radial();
}

SynthesizedKernel::SynthesizedKernel(const SpectralDensity& density, const QuadratureSpec& spec, bool normalize)
    : density_(density), normalize_(normalize) {
  if (!has_rank_one_spectrum(density_.space()))
    throw DomainError("synthesis supports H^2, H^3 and the n = 1 cone, not " + density_.space().name());
  build_spectral(spec);
}

void SynthesizedKernel::build_spectral(const QuadratureSpec& spec) {
  if (!(spec.cutoff > 0.0) || !std::isfinite(spec.cutoff) || spec.panels < 1 || spec.nodes_per_panel < 1)
    throw DomainError("invalid quadrature spec");
  const SpaceDescriptor& space = density_.space();
  auto psi = [this](double l) { return density_.eval(l); };

  auto nodes_for = [&](int per_panel, std::vector<double>& lambdas, std::vector<double>& amps) {
    std::vector<double> edges;
    for (int k = 0; k <= spec.panels; ++k) edges.push_back(spec.cutoff * k / spec.panels);
    const QuadratureRule rule = composite(gauss_legendre(per_panel), edges);
    lambdas = rule.nodes;
    amps.resize(rule.nodes.size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
      amps[j] = rule.weights[j] * spectral_weight(space, psi, rule.nodes[j]);
  };

  route_ = SynthesisRoute::SpectralQuadrature;
  spec_ = spec;
  nodes_for(spec.nodes_per_panel, lambdas_, amps_);
  mass_ = 0.0;
  for (double a : amps_) mass_ += a;
  if (!(mass_ > 0.0) || !std::isfinite(mass_)) throw NumericalError("synthesis: spectral mass is not positive");

  tail_ = tail_integral(space, psi, spec.cutoff);
  if (!(tail_ <= kSpecTailTol * (mass_ + tail_)))
    throw ConvergenceError("synthesis: tail mass beyond the cutoff exceeds 1e-10 of the total");

  SynthesizedKernel fine = *this;
  nodes_for(2 * spec.nodes_per_panel, fine.lambdas_, fine.amps_);
  check_refinement([this](double r) { return raw_spectral(r); }, [&fine](double r) { return fine.raw_spectral(r); },
                   "spectral quadrature");
}

double SynthesizedKernel::raw_spectral(double r) const {
  const SpaceDescriptor& space = density_.space();
  double s = 0.0;
  if (space.is_cone()) {
    for (std::size_t j = 0; j < lambdas_.size(); ++j) s += amps_[j] * std::cos(lambdas_[j] * r);
    return s;
  }
  if (space.dim() == 3) {
    if (r == 0.0) return mass_;
    for (std::size_t j = 0; j < lambdas_.size(); ++j) {
      const double x = lambdas_[j] * r;
      s += amps_[j] * (std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x);
    }
    return s * r_over_sinh(r);
  }
  for (std::size_t j = 0; j < lambdas_.size(); ++j) s += amps_[j] * spherical_function(space, lambdas_[j], r).real();
  return s;
}

void SynthesizedKernel::check_refinement(const std::function<double(double)>& coarse,
                                         const std::function<double(double)>& fine, const char* what) const {
  const double scale = std::abs(coarse(0.0));
  for (double r : kProbeRadii) {
    const double a = coarse(r), b = fine(r);
    if (!(std::abs(a - b) <= kRefineTol * scale))
      throw ConvergenceError(std::string("synthesis: ") + what + " changed by more than 1e-9 under refinement");
  }
}

// Radial transforms. With C(s) = int_0^inf psi(lambda) cos(lambda s) dlambda and
// S1 = -C', the rank-one kernels are
//   n = 1 cone: C(|t|) / pi,
//   H^3:        S1(r) / (2 pi^2 sinh r),
//   H^2:        sqrt(2) / (2 pi^2) int_r^inf S1(s) / sqrt(cosh s - cosh r) ds.
// Heat and Matern densities have closed-form C and S1.
void SynthesizedKernel::build_radial() {
  const SpaceDescriptor& space = density_.space();
  route_ = SynthesisRoute::RadialTransform;
  spec_.reset();
  tail_ = 0.0;
  const double rho2 = space.rho_norm_sq();
  const double log_norm = std::log(density_.normalization());
  if (const auto* h = std::get_if<HeatDensity>(&density_.params())) {
    rt_t_ = 0.5 * h->kappa * h->kappa;
    rt_prefactor_ = std::exp(log_norm - rt_t_ * rho2);
  } else {
    const auto& m = std::get<MaternDensity>(density_.params());
    const double c = 2.0 * m.nu / (m.kappa * m.kappa) + rho2;
    const double mm = m.nu + 0.5 * space.dim();
    rt_a_ = std::sqrt(c);
    rt_p_ = mm - 0.5;
    rt_prefactor_ = std::exp(log_norm + 0.5 * std::log(kPi) - std::lgamma(mm));
  }

  if (space.is_hyperbolic() && space.dim() == 2) {
    // Keep s until log S1(s) - s/2 has dropped kAbelDrop below its peak.
    double peak = -std::numeric_limits<double>::infinity();
    double span = 0.0;
    for (double s = 0.05; s < 1e4; s += 0.05) {
      const double g = std::log(radial_sine(s)) - 0.5 * s;
      if (g > peak) peak = g;
      else if (g < peak - kAbelDrop || !std::isfinite(g)) {
        span = s;
        break;
      }
    }
    if (span == 0.0) throw ConvergenceError("synthesis: radial transform does not decay");
    rt_span_ = span;

    auto build_rule = [&](int nodes) {
      const double vmax = std::sqrt(span);
      std::vector<double> edges = {0.0};
      for (int k = kAbelLevels; k >= 0; --k) edges.push_back(vmax * std::ldexp(1.0, -k));
      const QuadratureRule rule = composite(gauss_legendre(nodes), edges);
      abel_nodes_ = rule.nodes;
      abel_weights_ = rule.weights;
    };
    build_rule(2 * kAbelNodes);
    SynthesizedKernel fine = *this;
    build_rule(kAbelNodes);
    mass_ = raw_radial(0.0);
    check_refinement([this](double r) { return raw_radial(r); }, [&fine](double r) { return fine.raw_radial(r); },
                     "radial transform");
  } else {
    mass_ = raw_radial(0.0);
  }
  if (!(mass_ > 0.0) || !std::isfinite(mass_)) throw NumericalError("synthesis: kernel mass is not positive");
}

double SynthesizedKernel::radial_cosine(double s) const {
  if (rt_t_ > 0.0) return rt_prefactor_ * 0.5 * std::sqrt(kPi / rt_t_) * std::exp(-s * s / (4.0 * rt_t_));
  const double a = rt_a_, p = rt_p_;
  if (s == 0.0) {
    // 1/2 c^(1/2 - m) B(1/2, m - 1/2) times the density normalization.
    const double m = p + 0.5;
    const double log_b = std::lgamma(0.5) + std::lgamma(p) - std::lgamma(m);
    return density_.normalization() * 0.5 * std::exp((0.5 - m) * 2.0 * std::log(a) + log_b);
  }
  const double x = a * s;
  if (x > 700.0) return 0.0;
  return rt_prefactor_ * std::exp(p * std::log(s / (2.0 * a))) * std::cyl_bessel_k(p, x);
}

double SynthesizedKernel::radial_sine(double s) const {
  if (rt_t_ > 0.0)
    return rt_prefactor_ * std::sqrt(kPi) * s / (4.0 * std::pow(rt_t_, 1.5)) * std::exp(-s * s / (4.0 * rt_t_));
  const double a = rt_a_, p = rt_p_;
  const double x = a * s;
  if (s <= 0.0 || x > 700.0) return 0.0;
  const double k = std::cyl_bessel_k(std::abs(p - 1.0), x);
  return rt_prefactor_ * std::exp(-p * std::log(2.0 * a) + std::log(a) + p * std::log(s)) * k;
}

double SynthesizedKernel::raw_radial(double r) const {
  const SpaceDescriptor& space = density_.space();
  if (space.is_cone()) return radial_cosine(std::abs(r)) / kPi;
  if (space.dim() == 3) {
    if (r < 1e-10) {
      double m2;
      if (rt_t_ > 0.0) {
        m2 = rt_prefactor_ * std::sqrt(kPi) / (4.0 * std::pow(rt_t_, 1.5));
      } else {
        // 1/2 c^(3/2 - m) B(3/2, m - 3/2) times the density normalization.
        const double m = rt_p_ + 0.5;
        const double log_b = std::lgamma(1.5) + std::lgamma(m - 1.5) - std::lgamma(m);
        m2 = density_.normalization() * 0.5 * std::exp((1.5 - m) * 2.0 * std::log(rt_a_) + log_b);
      }
      return m2 / (2.0 * kPi * kPi);
    }
    return radial_sine(r) / r * r_over_sinh(r) / (2.0 * kPi * kPi);
  }

  // H^2: s = r + v^2, cosh s - cosh r = 2 sinh(r + v^2/2) sinh(v^2/2).
  double sum = 0.0;
  for (std::size_t j = 0; j < abel_nodes_.size(); ++j) {
    const double v = abel_nodes_[j];
    const double v2 = v * v;
    const double s1 = radial_sine(r + v2);
    if (s1 == 0.0) continue;
    const double log_den = 0.5 * (std::log(2.0) + log_sinh(r + 0.5 * v2) + log_sinh(0.5 * v2));
    sum += abel_weights_[j] * 2.0 * v * std::exp(std::log(s1) - log_den);
  }
  return std::sqrt(2.0) / (2.0 * kPi * kPi) * sum;
}

double SynthesizedKernel::raw(double r) const {
  if (!(r >= 0.0) && density_.space().is_hyperbolic()) throw DomainError("synthesis: negative radius");
  return route_ == SynthesisRoute::SpectralQuadrature ? raw_spectral(r) : raw_radial(r);
}

}  // namespace symmkern
