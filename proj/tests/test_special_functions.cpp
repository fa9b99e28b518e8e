#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_util.hpp"

using namespace symmkern;
using namespace symmkern::testing;
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

struct Reference {
  double re, im, log_re, log_im;
};

// Principal log Gamma values from a 30-digit multiprecision evaluation.
const Reference kReferences[] = {
    {1.0, 0.0, 0.0, 0.0},
    {0.5, 0.0, 0.57236494292470008707, 0.0},
    {2.5, 3.0, -1.4709546103488416913, 2.82261563826079945},
    {0.1, -7.3, -11.342911529359121074, -6.5779076328476803934},
    {-3.7, 2.2, -7.2597693499705797432, -9.9401884510785499819},
    {-0.5, 0.0001, 1.2655120788106351996, -3.141589004592257248},
    {10.0, 50.0, -40.400262350482971022, 159.62737280472833495},
    {0.5, 100.0, -156.16069414628498918, 360.51743526790643592},
    {-60.25, 10.0, -218.41305239384545145, -149.73917516930429653},
    {30.0, -80.0, 5.1677654811955694935, -311.57902870880418637},
    {3.0, 0.0, 0.69314718055994530942, 0.0},
    {0.001, 0.002, 6.1024566441047244683, -1.1082998584608746549},
    {1.0, 1.0, -0.65092319930185633889, -0.30164032046753319789},
};

}  // namespace

TEST(LogGamma, TrivialValues) {
  EXPECT_EQ(log_gamma_complex(1.0), cd(0.0, 0.0));
  EXPECT_NEAR(log_gamma_complex(0.5).real(), 0.5 * std::log(kPi), 1e-15);
  EXPECT_NEAR(log_gamma_complex(2.0).real(), 0.0, 1e-15);
}

TEST(LogGamma, MatchesReferenceTable) {
  for (const auto& r : kReferences) {
    const cd v = log_gamma_complex({r.re, r.im});
    const double scale = std::max(1.0, std::abs(cd(r.log_re, r.log_im)));
    EXPECT_NEAR(v.real(), r.log_re, 1e-13 * scale) << r.re << " " << r.im;
    EXPECT_NEAR(v.imag(), r.log_im, 1e-13 * scale) << r.re << " " << r.im;
  }
}

TEST(LogGamma, NegativeRealAxisModTwoPi) {
  const cd v = log_gamma_complex(-2.5);
  EXPECT_NEAR(v.real(), -0.056243716497674050673, 1e-13);
  EXPECT_LE(mod_two_pi(v.imag(), -9.4247779607693797154), 1e-12);
}

TEST(LogGamma, ComplexPathAgreesWithRealLgamma) {
  // A tiny imaginary part forces the shifted Stirling path.
  for (double x = 0.05; x < 100.0; x *= 1.37) {
    const cd v = log_gamma_complex({x, 1e-300});
    EXPECT_NEAR(v.real(), std::lgamma(x), 1e-13 * std::max(1.0, std::abs(std::lgamma(x)))) << x;
  }
}

TEST(LogGamma, ReflectionFormula) {
  // |Gamma(i)|^2 = pi / sinh(pi).
  EXPECT_NEAR(2.0 * log_gamma_complex({0.0, 1.0}).real(), std::log(kPi / std::sinh(kPi)), 1e-13);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const cd z(u(rng), u(rng));
    const cd lhs = log_gamma_complex(z) + log_gamma_complex(1.0 - z);
    const cd rhs = std::log(kPi / std::sin(kPi * z));
    EXPECT_NEAR(lhs.real(), rhs.real(), 1e-12 * std::max(1.0, std::abs(rhs.real())));
    EXPECT_LE(mod_two_pi(lhs.imag(), rhs.imag()), 1e-11);
  }
}

TEST(LogGamma, FunctionalEquation) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> re(-20.0, 60.0), im(-60.0, 60.0);
  for (int i = 0; i < 500; ++i) {
    const cd z(re(rng), im(rng));
    const cd diff = log_gamma_complex(z + 1.0) - log_gamma_complex(z);
    const cd lz = std::log(z);
    EXPECT_NEAR(diff.real(), lz.real(), 1e-12 * std::max(1.0, std::abs(lz.real())));
    EXPECT_LE(mod_two_pi(diff.imag(), lz.imag()), 1e-12 * std::max(1.0, std::abs(log_gamma_complex(z))));
  }
}

TEST(LogGamma, Poles) {
  for (double p : {0.0, -1.0, -2.0, -17.0}) EXPECT_THROW(log_gamma_complex(p), PoleError);
  EXPECT_NO_THROW(log_gamma_complex(cd(-2.0, 1e-8)));
}

TEST(ConeLogGamma, Examples) {
  EXPECT_NEAR(std::abs(cone_log_gamma({2.0}, 1, 1)), 0.0, 1e-15);
  const cd a = cone_log_gamma({1.0, 1.5}, 1, 3);
  EXPECT_NEAR(a.real(), 0.5 * std::log(2.0 * kPi), 1e-14);
  const cd b = cone_log_gamma({3.0, 3.0}, 2, 4);
  EXPECT_NEAR(b.real(), std::log(4.0 * kPi), 1e-14);
  EXPECT_THROW(cone_log_gamma({1.0, 1.0}, 2, 4), PoleError);
}

TEST(GammaAsymptotic, Examples) {
  EXPECT_NEAR(gamma_abs_asymptotic(0.5, 10.0) / (std::sqrt(2.0 * kPi) * std::exp(-5.0 * kPi)), 1.0, 1e-14);
  EXPECT_NEAR(gamma_abs_asymptotic(1.0, 50.0) / (std::sqrt(2.0 * kPi) * std::sqrt(50.0) * std::exp(-25.0 * kPi)), 1.0,
              1e-14);
  EXPECT_EQ(gamma_abs_asymptotic(1.0, -50.0), gamma_abs_asymptotic(1.0, 50.0));
  for (double y : {20.0, 50.0, 100.0}) {
    const double ratio = std::exp(log_gamma_complex({0.5, y}).real()) / gamma_abs_asymptotic(0.5, y);
    EXPECT_LE(std::abs(ratio - 1.0), 2.0 / y) << y;
  }
}

TEST(LambdaBracket, AddsRho) {
  const auto h3 = SpaceDescriptor::parse("H3");
  EXPECT_DOUBLE_EQ(lambda_bracket(h3, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(lambda_bracket(SpaceDescriptor::parse("spd:real:2"), {0.0, 0.0}), 0.25 * std::sqrt(2.0));
  EXPECT_THROW(lambda_bracket(h3, {1.0, 2.0}), DomainError);
}

TEST(Plancherel, Examples) {
  const auto h2 = SpaceDescriptor::parse("H2"), h3 = SpaceDescriptor::parse("H3");
  EXPECT_EQ(plancherel_density(h2, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(plancherel_density(h3, 2.0) / plancherel_density(h3, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(plancherel_density(SpaceDescriptor::parse("spd:real:1"), 3.0), 1.0 / kPi);
  for (double l = 0.1; l < 20; l += 0.7) {
    EXPECT_GT(plancherel_density(h2, l), 0.0);
    EXPECT_GT(plancherel_density(h3, l), 0.0);
  }
  EXPECT_THROW(plancherel_density(SpaceDescriptor::parse("spd:real:2"), 1.0), DomainError);
  EXPECT_THROW(plancherel_density(SpaceDescriptor::parse("H4"), 1.0), DomainError);
}

TEST(Plancherel, H3ConstantMatchesHeatKernel) {
  // int psi(lambda) phi_lambda(r) mu(lambda) dlambda with the heat density must equal
  // (4 pi t)^(-3/2) (r / sinh r) exp(-t - r^2 / 4t) including the constant.
  const auto h3 = SpaceDescriptor::parse("H3");
  const double t = 0.5;
  const SynthesizedKernel k(SpectralDensity::heat(h3, 1.0), false);
  for (double r : {0.0, 0.5, 1.0, 2.0}) {
    const double shape = r == 0.0 ? 1.0 : r / std::sinh(r);
    const double closed = std::pow(4.0 * kPi * t, -1.5) * shape * std::exp(-t - r * r / (4.0 * t));
    EXPECT_NEAR(k.raw(r) / closed, 1.0, 1e-10) << r;
  }
}

TEST(SphericalFunction, Trivial) {
  for (const char* name : {"H2", "H3", "spd:real:1", "spd:quaternion:1"}) {
    const auto s = SpaceDescriptor::parse(name);
    for (double l : {0.0, 0.3, 4.0}) EXPECT_EQ(spherical_function(s, l, 0.0), cd(1.0, 0.0)) << name;
  }
  EXPECT_NEAR(std::abs(spherical_function(SpaceDescriptor::parse("H3"), kPi, 1.0)), 0.0, 1e-16);
  EXPECT_NEAR(spherical_function(SpaceDescriptor::parse("H3"), 0.0, 2.0).real(), 2.0 / std::sinh(2.0), 1e-15);
  EXPECT_NEAR(spherical_function(SpaceDescriptor::parse("spd:real:1"), 2.0, 0.7).real(), std::cos(1.4), 1e-15);
  EXPECT_THROW(spherical_function(SpaceDescriptor::parse("spd:real:2"), 1.0, 1.0), DomainError);
  EXPECT_THROW(spherical_function(SpaceDescriptor::parse("H2"), 1.0, 31.0), ConvergenceError);
}

TEST(SphericalFunction, H2MatchesBruteForceBoundaryIntegral) {
  const auto h2 = SpaceDescriptor::parse("H2");
  for (double l : {0.5, 2.0})
    for (double r : {0.5, 3.0}) {
      const int n = 1000000;
      cd s = 0.0;
      for (int j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * j / n;
        s += std::exp(cd(-0.5, -l) * std::log(std::cosh(r) - std::sinh(r) * std::cos(th)));
      }
      s /= static_cast<double>(n);
      const cd v = spherical_function(h2, l, r);
      EXPECT_LE(std::abs(v - s), 1e-10) << l << " " << r;
      EXPECT_LE(std::abs(v.imag()), 1e-12);
    }
}

TEST(SphericalFunction, H2AtZeroFrequencyIsLegendre) {
  // phi_0(r) = P_{-1/2}(cosh r) = (2/pi) sech(r/2) K(tanh(r/2)).
  const auto h2 = SpaceDescriptor::parse("H2");
  for (double r : {0.3, 1.0, 4.0, 12.0}) {
    const double k = std::tanh(0.5 * r);
    const double want = 2.0 / kPi / std::cosh(0.5 * r) * std::comp_ellint_1(k);
    EXPECT_NEAR(spherical_function(h2, 0.0, r).real(), want, 1e-12 * want) << r;
  }
}

TEST(SphericalFunction, WeylSymmetryAndBound) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ul(0.0, 10.0), ur(0.0, 10.0);
  for (const char* name : {"H2", "H3", "spd:real:1"}) {
    const auto s = SpaceDescriptor::parse(name);
    for (int i = 0; i < 60; ++i) {
      const double l = ul(rng), r = ur(rng);
      const cd a = spherical_function(s, l, r), b = spherical_function(s, -l, r);
      EXPECT_LE(std::abs(a - b), 1e-10) << name;
      EXPECT_LE(std::abs(a), 1.0 + 1e-12) << name;
    }
    for (double l = 0.0; l <= 10.0; l += 0.5)
      for (double r = 0.0; r <= 10.0; r += 0.5) EXPECT_LE(std::abs(spherical_function(s, l, r)), 1.0 + 1e-12);
  }
}

TEST(SphericalFunction, LaplaceEigenfunction) {
  // f'' + (d - 1) coth(r) f' = -(lambda^2 + rho^2) f.
  struct Case {
    const char* space;
    double h;
    double tol;
  };
  for (const Case c : {Case{"H3", 1e-4, 1e-5}, Case{"H2", 1e-3, 1e-5}}) {
    const auto s = SpaceDescriptor::parse(c.space);
    const double rho2 = s.rho_norm_sq();
    for (double l : {0.3, 1.0, 2.5})
      for (double r : {0.5, 1.0, 2.0}) {
        auto f = [&](double x) { return spherical_function(s, l, x).real(); };
        const double h = c.h;
        const double d2 = (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
        const double d1 = (f(r + h) - f(r - h)) / (2.0 * h);
        const double lhs = d2 + (s.dim() - 1) / std::tanh(r) * d1;
        const double rhs = -(l * l + rho2) * f(r);
        EXPECT_NEAR(lhs, rhs, c.tol * std::max(std::abs(rhs), 1e-2)) << c.space << " " << l << " " << r;
      }
  }
}

TEST(Quadrature, GaussLegendreExactness) {
  for (int n : {1, 2, 5, 16, 32, 64}) {
    const QuadratureRule r = gauss_legendre(n);
    double sum = 0.0;
    for (double w : r.weights) sum += w;
    EXPECT_NEAR(sum, 2.0, 1e-14);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      const double got = integrate(r, [k](double x) { return std::pow(x, k); });
      const double want = k % 2 ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR(got, want, 1e-14) << n << " " << k;
    }
  }
  const QuadratureRule c = composite(gauss_legendre(8), {0.0, 1.0, 3.0});
  EXPECT_NEAR(integrate(c, [](double x) { return std::exp(x); }), std::exp(3.0) - 1.0, 1e-13);
}
