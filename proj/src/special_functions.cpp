#include "symmkern/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "symmkern/error.hpp"

namespace symmkern {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// B_{2k} / (2k (2k - 1)), k = 1..10.
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

constexpr double kStirlingShift = 15.0;

cd stirling(cd w) {
  const cd inv = 1.0 / w;
  const cd inv2 = inv * inv;
  cd series = 0.0;
  for (auto it = kStirling.rbegin(); it != kStirling.rend(); ++it) series = series * inv2 + *it;
  return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi) + series * inv;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// r / sinh r without overflow.
double r_over_sinh(double r) {
  if (r < 1e-4) return 1.0 - r * r / 6.0;
  if (r > 20.0) return 2.0 * r * std::exp(-r) / (1.0 - std::exp(-2.0 * r));
  return r / std::sinh(r);
}

constexpr int kH2InitialPoints = 64;
constexpr int kH2MaxPoints = 1 << 20;
constexpr double kH2Tol = 1e-13;
constexpr double kH2MaxRadius = 30.0;

// (1/2pi) int_0^2pi (cosh r - sinh r cos theta)^-(1/2 + i lambda) dtheta.
// cosh r - sinh r cos theta = e^-r + 2 sinh r sin^2(theta/2). The substitution
// tan(theta/2) = k tan(phi/2), k = e^(-r/2), spreads the peak at theta = 0
// over half the circle, so the periodic trapezoid rule in phi converges fast.
cd h2_spherical(double lambda, double r) {
  const double k = std::exp(-0.5 * r);
  const double k2 = k * k;
  const double em = std::exp(-r);
  const double two_sinh = 2.0 * std::sinh(r);
  const cd expo(-0.5, -lambda);

  auto f = [&](double phi) {
    const double s = std::sin(0.5 * phi);
    const double c = std::cos(0.5 * phi);
    const double den = c * c + k2 * s * s;
    const double base = em + two_sinh * k2 * s * s / den;
    return std::exp(expo * std::log(base)) * (k / den);
  };

  int n = kH2InitialPoints;
  cd sum = 0.0;
  for (int j = 0; j < n; ++j) sum += f(2.0 * kPi * j / n);
  cd estimate = sum / static_cast<double>(n);
  while (n < kH2MaxPoints) {
    cd mid = 0.0;
    for (int j = 0; j < n; ++j) mid += f(2.0 * kPi * (j + 0.5) / n);
    sum += mid;
    n *= 2;
    const cd refined = sum / static_cast<double>(n);
    const double change = std::abs(refined - estimate);
    estimate = refined;
    if (change <= kH2Tol * std::max(1.0, std::abs(refined))) return estimate;
  }
  throw ConvergenceError("spherical_function: H^2 boundary integral did not converge");
}

}  // namespace

cd log_gamma_complex(cd z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("log_gamma_complex: non-finite argument");
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw PoleError("log_gamma_complex: pole at z = " + std::to_string(z.real()));
  if (z.imag() == 0.0 && z.real() > 0.0) return {std::lgamma(z.real()), 0.0};

  // Gamma(z) = Gamma(z + m) / (z (z + 1) ... (z + m - 1)); each principal log is
  // analytic off the negative real axis, so the sum continues log Gamma
  // correctly into both half-planes.
  cd shift = 0.0;
  cd w = z;
  while (w.real() < kStirlingShift) {
    shift += std::log(w);
    w += 1.0;
  }
  return stirling(w) - shift;
}

cd cone_log_gamma(const std::vector<cd>& tau, int beta, int d) {
  const int n = static_cast<int>(tau.size());
  if (n < 1) throw DomainError("cone_log_gamma: empty argument");
  cd out = 0.5 * (d - n) * std::log(2.0 * kPi);
  for (int j = 0; j < n; ++j) out += log_gamma_complex(tau[static_cast<std::size_t>(j)] - 0.5 * beta * j);
  return out;
}

double gamma_abs_asymptotic(double x, double y) {
  const double ay = std::abs(y);
  return std::sqrt(2.0 * kPi) * std::exp((x - 0.5) * std::log(ay) - 0.5 * kPi * ay);
}

double lambda_bracket(const SpaceDescriptor& space, const std::vector<double>& lambda) {
  if (static_cast<int>(lambda.size()) != space.rank())
    throw DomainError("lambda_bracket: spectral parameter must have one entry per rank");
  double s = space.rho_norm_sq();
  for (double l : lambda) {
    if (!std::isfinite(l)) throw DomainError("lambda_bracket: non-finite spectral parameter");
    s += l * l;
  }
  return std::sqrt(s);
}

double lambda_bracket(const SpaceDescriptor& space, double lambda) {
  return lambda_bracket(space, std::vector<double>{lambda});
}

bool has_rank_one_spectrum(const SpaceDescriptor& space) {
  if (space.is_hyperbolic()) return space.dim() == 2 || space.dim() == 3;
  return space.rank() == 1;
}

double plancherel_density(const SpaceDescriptor& space, double lambda) {
  if (!has_rank_one_spectrum(space))
    throw DomainError("plancherel_density: supported on H^2, H^3 and the n = 1 cone, not " + space.name());
  if (space.is_cone()) return 1.0 / kPi;
  if (space.dim() == 3) return lambda * lambda / (2.0 * kPi * kPi);
  return lambda * std::tanh(kPi * lambda) / (2.0 * kPi);
}

cd spherical_function(const SpaceDescriptor& space, double lambda, double r) {
  if (!has_rank_one_spectrum(space))
    throw DomainError("spherical_function: supported on H^2, H^3 and the n = 1 cone, not " + space.name());
  if (!std::isfinite(lambda) || !std::isfinite(r)) throw DomainError("spherical_function: non-finite argument");
  if (space.is_cone()) return std::cos(lambda * r);
  if (r < 0.0) throw DomainError("spherical_function: negative radius");
  if (r == 0.0) return 1.0;
  if (space.dim() == 3) return sinc(lambda * r) * r_over_sinh(r);
  if (r > kH2MaxRadius) throw ConvergenceError("spherical_function: H^2 quadrature unsupported beyond r = 30");
  return h2_spherical(lambda, r);
}

}  // namespace symmkern
