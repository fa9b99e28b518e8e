#pragma once

// JSON and CSV serialization for spaces, point sets, kernels and matrices.
// Floats are always written with 17 significant digits.

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "symmkern/geometry.hpp"
#include "symmkern/spectral_kernels.hpp"

namespace symmkern {

using json = nlohmann::ordered_json;

std::string format_double(double v);

// Like json::dump, but floats use %.17g and non-finite floats become null.
std::string dump_json(const json& j, int indent = 2);

json space_to_json(const SpaceDescriptor& space);
SpaceDescriptor space_from_json(const json& j);

// Row-major entries: reals, [re, im] pairs or [w, x, y, z] quadruples for
// cones; the d + 1 hyperboloid coordinates for H^d.
json point_to_json(const Point& p);
Point point_from_json(const SpaceDescriptor& space, const json& j);

// {"space": {...}, "points": [...]}
json point_set_to_json(const SpaceDescriptor& space, const std::vector<Point>& points);
std::vector<Point> point_set_from_json(const json& j, SpaceDescriptor* space_out = nullptr);

// FNV-1a over the serialized point set, as 16 hex digits.
std::string point_set_hash(const std::vector<Point>& points);

struct KernelSpec {
  std::string family;
  std::map<std::string, double> params;
};

// "betaprime:alpha=2", "heat:kappa=1", "matern:kappa=1,nu=1.5",
// "geodesic-gaussian:sigma=1". Missing parameters take the defaults
// kappa = 1, nu = 1.5, sigma = 1; alpha is required.
KernelSpec parse_kernel_spec(const std::string& text);
std::string kernel_spec_string(const KernelSpec& spec);
KernelHandle make_kernel(const SpaceDescriptor& space, const KernelSpec& spec);
SpectralDensity make_density(const SpaceDescriptor& space, const KernelSpec& spec);
json kernel_to_json(const KernelHandle& k);

// Writes "# config: <compact json>" and then one row per line.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m, const json& config);

}  // namespace symmkern
