#pragma once

// Complex log-Gamma, the cone Gamma function, rank-one Plancherel densities
// and spherical functions.

#include <complex>
#include <vector>

#include "symmkern/geometry.hpp"

namespace symmkern {

// Principal branch of log Gamma(z): the analytic continuation from the
// positive real axis, cut along the negative real axis. Throws PoleError at
// z = 0, -1, -2, ...
std::complex<double> log_gamma_complex(std::complex<double> z);

// log Gamma_X(tau) = ((d - n)/2) log(2 pi) + sum_j log Gamma(tau_j - (beta/2)(j - 1)).
std::complex<double> cone_log_gamma(const std::vector<std::complex<double>>& tau, int beta, int d);

// Leading term sqrt(2 pi) |y|^(x - 1/2) exp(-pi |y| / 2) of |Gamma(x + i y)|.
double gamma_abs_asymptotic(double x, double y);

// <lambda> = (|lambda|^2 + |rho|^2)^(1/2).
double lambda_bracket(const SpaceDescriptor& space, const std::vector<double>& lambda);
double lambda_bracket(const SpaceDescriptor& space, double lambda);

// True for H^2, H^3 and the n = 1 cone: the spaces with an explicit
// Plancherel density and spherical function here.
bool has_rank_one_spectrum(const SpaceDescriptor& space);

// |c(lambda)|^-2 in the normalization where the heat kernel is exactly
//   H^3: lambda^2 / (2 pi^2),  H^2: lambda tanh(pi lambda) / (2 pi),
//   n = 1 cone: 1 / pi  (the line, over lambda >= 0).
double plancherel_density(const SpaceDescriptor& space, double lambda);

// phi_lambda(r) for real lambda. H^3 and the n = 1 cone use closed forms;
// H^2 integrates the boundary representation with a periodic trapezoid rule
// refined until two successive levels agree. Radii above 30 on H^2 throw
// ConvergenceError.
std::complex<double> spherical_function(const SpaceDescriptor& space, double lambda, double r);

}  // namespace symmkern
