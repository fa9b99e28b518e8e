#include "symmkern/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "symmkern/error.hpp"

namespace symmkern {

namespace {

void emit(std::ostringstream& os, const json& j, int indent, int depth) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (pretty) os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        os << json(it.key()).dump() << (pretty ? ": " : ":");
        emit(os, it.value(), indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j)
        if (e.is_structured()) flat = false;
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (flat && pretty ? ", " : ",");
        first = false;
        if (!flat) newline(depth + 1);
        emit(os, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      os << ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? format_double(v) : "null");
      return;
    }
    default:
      os << j.dump();
  }
}

Eigen::MatrixXcd cone_matrix_from_json(const SpaceDescriptor& space, const json& j) {
  const int n = space.rank();
  if (!j.is_array() || static_cast<int>(j.size()) != n * n)
    throw DomainError("point for " + space.name() + " needs " + std::to_string(n * n) + " row-major entries");
  switch (space.algebra()) {
    case ScalarAlgebra::Real: {
      Eigen::MatrixXd m(n, n);
      for (int i = 0; i < n * n; ++i) m(i / n, i % n) = j.at(static_cast<std::size_t>(i)).get<double>();
      return m.cast<std::complex<double>>();
    }
    case ScalarAlgebra::Complex: {
      Eigen::MatrixXcd m(n, n);
      for (int i = 0; i < n * n; ++i) {
        const json& e = j.at(static_cast<std::size_t>(i));
        if (!e.is_array() || e.size() != 2) throw DomainError("complex entries are [re, im] pairs");
        m(i / n, i % n) = {e[0].get<double>(), e[1].get<double>()};
      }
      return m;
    }
    case ScalarAlgebra::Quaternion: {
      QuaternionMatrix q(n, n);
      for (int i = 0; i < n * n; ++i) {
        const json& e = j.at(static_cast<std::size_t>(i));
        if (!e.is_array() || e.size() != 4) throw DomainError("quaternion entries are [w, x, y, z] quadruples");
        q(i / n, i % n) = {e[0].get<double>(), e[1].get<double>(), e[2].get<double>(), e[3].get<double>()};
      }
      return embed(q);
    }
  }
  throw DomainError("unknown scalar algebra");
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const json& j, int indent) {
  std::ostringstream os;
  emit(os, j, indent, 0);
  return os.str();
}

json space_to_json(const SpaceDescriptor& space) {
  json j;
  j["name"] = space.name();
  j["kind"] = space.is_cone() ? "cone" : "hyperbolic";
  if (space.is_cone()) j["algebra"] = std::string(to_string(space.algebra()));
  j["rank"] = space.rank();
  j["dim"] = space.dim();
  j["beta"] = space.beta();
  j["rho"] = space.rho();
  return j;
}

SpaceDescriptor space_from_json(const json& j) {
  if (j.is_string()) return SpaceDescriptor::parse(j.get<std::string>());
  if (!j.is_object()) throw DomainError("space must be a string or an object");
  if (j.contains("name")) return SpaceDescriptor::parse(j.at("name").get<std::string>());
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "hyperbolic") return SpaceDescriptor::hyperbolic(j.at("dim").get<int>());
  if (kind == "cone")
    return SpaceDescriptor::parse("spd:" + j.at("algebra").get<std::string>() + ":" +
                                  std::to_string(j.at("rank").get<int>()));
  throw DomainError("unknown space kind '" + kind + "'");
}

json point_to_json(const Point& p) {
  json out = json::array();
  if (const auto* h = std::get_if<HyperbolicPoint>(&p)) {
    for (Eigen::Index i = 0; i < h->coords().size(); ++i) out.push_back(h->coords()(i));
    return out;
  }
  const auto& c = std::get<ConePoint>(p);
  const int n = c.n();
  switch (c.space().algebra()) {
    case ScalarAlgebra::Real:
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) out.push_back(c.embedded()(i, k).real());
      break;
    case ScalarAlgebra::Complex:
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) out.push_back(json::array({c.embedded()(i, k).real(), c.embedded()(i, k).imag()}));
      break;
    case ScalarAlgebra::Quaternion: {
      const QuaternionMatrix q = c.quaternion_entries();
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          const Quaternion& e = q(i, k);
          out.push_back(json::array({e.w, e.x, e.y, e.z}));
        }
      break;
    }
  }
  return out;
}

Point point_from_json(const SpaceDescriptor& space, const json& j) {
  if (space.is_hyperbolic()) {
    if (!j.is_array() || static_cast<int>(j.size()) != space.dim() + 1)
      throw DomainError("point for " + space.name() + " needs " + std::to_string(space.dim() + 1) + " coordinates");
    Eigen::VectorXd v(space.dim() + 1);
    for (int i = 0; i <= space.dim(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
    return HyperbolicPoint(v);
  }
  return ConePoint(space, cone_matrix_from_json(space, j));
}

json point_set_to_json(const SpaceDescriptor& space, const std::vector<Point>& points) {
  json j;
  j["space"] = space_to_json(space);
  json pts = json::array();
  for (const Point& p : points) pts.push_back(point_to_json(p));
  j["points"] = std::move(pts);
  return j;
}

std::vector<Point> point_set_from_json(const json& j, SpaceDescriptor* space_out) {
  if (!j.is_object() || !j.contains("space") || !j.contains("points"))
    throw DomainError("point set JSON needs \"space\" and \"points\"");
  const SpaceDescriptor space = space_from_json(j.at("space"));
  std::vector<Point> out;
  for (const auto& p : j.at("points")) out.push_back(point_from_json(space, p));
  if (space_out != nullptr) *space_out = space;
  return out;
}

std::string point_set_hash(const std::vector<Point>& points) {
  json pts = json::array();
  for (const Point& p : points) pts.push_back(point_to_json(p));
  const std::string text = dump_json(pts, -1);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

KernelSpec parse_kernel_spec(const std::string& text) {
  KernelSpec spec;
  const auto colon = text.find(':');
  spec.family = text.substr(0, colon);
  if (spec.family == "betaprime") {
  } else if (spec.family == "heat") {
    spec.params["kappa"] = 1.0;
  } else if (spec.family == "matern") {
    spec.params["kappa"] = 1.0;
    spec.params["nu"] = 1.5;
  } else if (spec.family == "geodesic-gaussian") {
    spec.params["sigma"] = 1.0;
  } else {
    throw DomainError("unknown kernel family '" + spec.family +
                      "' (expected betaprime, heat, matern or geodesic-gaussian)");
  }
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw DomainError("kernel parameter '" + item + "' is not key=value");
      const std::string key = item.substr(0, eq);
      const bool known = (spec.family == "betaprime" && key == "alpha") ||
                         ((spec.family == "heat" || spec.family == "matern") && key == "kappa") ||
                         (spec.family == "matern" && key == "nu") ||
                         (spec.family == "geodesic-gaussian" && key == "sigma");
      if (!known) throw DomainError("unknown parameter '" + key + "' for kernel " + spec.family);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(item.substr(eq + 1), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size() - eq - 1) throw DomainError("bad number in kernel parameter '" + item + "'");
      spec.params[key] = v;
    }
  }
  if (spec.family == "betaprime" && !spec.params.count("alpha"))
    throw DomainError("betaprime kernel needs alpha (e.g. betaprime:alpha=2)");
  return spec;
}

std::string kernel_spec_string(const KernelSpec& spec) {
  std::string out = spec.family;
  bool first = true;
  for (const auto& [k, v] : spec.params) {
    out += (first ? ":" : ",") + k + "=" + format_double(v);
    first = false;
  }
  return out;
}

SpectralDensity make_density(const SpaceDescriptor& space, const KernelSpec& spec) {
  if (spec.family == "heat") return SpectralDensity::heat(space, spec.params.at("kappa"));
  if (spec.family == "matern") return SpectralDensity::matern(space, spec.params.at("kappa"), spec.params.at("nu"));
  if (spec.family == "betaprime") return SpectralDensity::beta_prime(space, spec.params.at("alpha"));
  throw DomainError("kernel family '" + spec.family + "' has no spectral density");
}

KernelHandle make_kernel(const SpaceDescriptor& space, const KernelSpec& spec) {
  if (spec.family == "betaprime") return make_betaprime_kernel(space, spec.params.at("alpha"));
  if (spec.family == "geodesic-gaussian") return make_geodesic_gaussian_kernel(space, spec.params.at("sigma"));
  return SynthesizedKernel(make_density(space, spec));
}

json kernel_to_json(const KernelHandle& k) {
  json j;
  j["id"] = kernel_id(k);
  j["space"] = kernel_space(k).name();
  if (const auto* b = std::get_if<BetaPrimeKernel>(&k)) {
    j["family"] = "betaprime";
    j["form"] = "closed";
    j["alpha"] = b->alpha;
  } else if (const auto* g = std::get_if<GeodesicGaussianKernel>(&k)) {
    j["family"] = "geodesic-gaussian";
    j["form"] = "closed";
    j["sigma"] = g->sigma;
  } else {
    const auto& s = std::get<SynthesizedKernel>(k);
    j["family"] = s.density().tag();
    j["form"] = "synthesized";
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, HeatDensity>) {
            j["kappa"] = p.kappa;
          } else if constexpr (std::is_same_v<T, MaternDensity>) {
            j["kappa"] = p.kappa;
            j["nu"] = p.nu;
          } else {
            j["alpha"] = p.alpha;
          }
        },
        s.density().params());
    j["route"] = s.route() == SynthesisRoute::SpectralQuadrature ? "spectral-quadrature" : "radial-transform";
    if (s.quadrature()) {
      j["cutoff"] = s.quadrature()->cutoff;
      j["panels"] = s.quadrature()->panels;
      j["nodes_per_panel"] = s.quadrature()->nodes_per_panel;
    }
    j["normalized"] = s.normalized();
    j["total_mass"] = s.total_mass();
  }
  return j;
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m, const json& config) {
  os << "# config: " << dump_json(config, -1) << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) os << (k ? "," : "") << format_double(m(i, k));
    os << '\n';
  }
}

}  // namespace symmkern
