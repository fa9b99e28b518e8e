#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "symmkern/symmkern.hpp"

namespace symmkern::cli {

namespace {

namespace fs = std::filesystem;

// Thrown for anything the user can fix in flags or config files.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class KeyType { String, Int, Seed, Double, Bool, IntList };

struct KeyDef {
  std::string key;
  KeyType type;
  std::string help;
};

struct CommandDef {
  std::string name;
  std::string help;
  std::vector<KeyDef> keys;
  json defaults;
};

const std::vector<CommandDef>& commands() {
  static const std::vector<CommandDef> defs = {
      {"gram",
       "Sample (or load) points and write the Gram matrix, its metadata and a PSD report",
       {{"space", KeyType::String, "space, e.g. spd:real:2 or hyperbolic:3"},
        {"kernel", KeyType::String, "kernel, e.g. betaprime:alpha=2"},
        {"n", KeyType::Int, "number of sampled points"},
        {"seed", KeyType::Seed, "sampling seed (required unless --points is given)"},
        {"points", KeyType::String, "point-set JSON to load instead of sampling"},
        {"psd_tol", KeyType::Double, "PSD tolerance relative to the largest eigenvalue"},
        {"strict", KeyType::Bool, "exit 3 when the PSD check fails"},
        {"threads", KeyType::Int, "worker threads for Gram assembly (0 = default)"},
        {"out", KeyType::String, "output directory"}},
       {{"n", 50}, {"psd_tol", 1e-8}, {"strict", false}, {"threads", 0}, {"out", "."}}},
      {"density",
       "Tabulate a spectral density and write its universality certificate",
       {{"space", KeyType::String, "space"},
        {"kernel", KeyType::String, "heat, matern or betaprime kernel"},
        {"lambda_max", KeyType::Double, "largest spectral parameter in the table"},
        {"lambda_count", KeyType::Int, "number of table rows"},
        {"out", KeyType::String, "output directory"}},
       {{"lambda_max", 10.0}, {"lambda_count", 101}, {"out", "."}}},
      {"synth-compare",
       "Compare a synthesized kernel with its closed form (H^3 heat, n = 1 Beta-prime)",
       {{"space", KeyType::String, "hyperbolic:3 or spd:<algebra>:1"},
        {"kernel", KeyType::String, "heat kernel on H^3, betaprime kernel on the n = 1 cone"},
        {"r_min", KeyType::Double, "smallest radius"},
        {"r_max", KeyType::Double, "largest radius"},
        {"r_count", KeyType::Int, "number of radii"},
        {"bound", KeyType::Double, "largest acceptable relative error (default per oracle)"},
        {"out", KeyType::String, "output directory"}},
       {{"r_min", 0.1}, {"r_max", 5.0}, {"r_count", 50}, {"out", "."}}},
      {"fit",
       "Kernel ridge regression learning curve on a ball around the basepoint",
       {{"space", KeyType::String, "space"},
        {"kernel", KeyType::String, "kernel"},
        {"target", KeyType::String, "zero, sin-logdet, geodesic-bump or kernel-translate"},
        {"sizes", KeyType::IntList, "training sizes, e.g. 25,50,100"},
        {"seed", KeyType::Seed, "sampling seed"},
        {"radius", KeyType::Double, "ball radius"},
        {"heldout", KeyType::Int, "held-out points"},
        {"mu", KeyType::Double, "ridge parameter (default 1e-8 trace(K)/N)"},
        {"anchor_in_training", KeyType::Bool, "put the target anchor into the training set"},
        {"out", KeyType::String, "output directory"}},
       {{"target", "sin-logdet"},
        {"sizes", json::array({25, 50, 100, 200, 400})},
        {"radius", 2.0},
        {"heldout", 1000},
        {"anchor_in_training", false},
        {"out", "."}}},
  };
  return defs;
}

std::string flag_name(const std::string& key) {
  std::string f = key;
  for (char& c : f)
    if (c == '_') c = '-';
  return "--" + f;
}

json convert(const KeyDef& def, const std::string& text) {
  try {
    std::size_t used = 0;
    switch (def.type) {
      case KeyType::String: return text;
      case KeyType::Int: {
        const long long v = std::stoll(text, &used);
        if (used != text.size()) break;
        return v;
      }
      case KeyType::Seed: {
        if (!text.empty() && text[0] == '-') break;
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) break;
        return v;
      }
      case KeyType::Double: {
        const double v = std::stod(text, &used);
        if (used != text.size()) break;
        return v;
      }
      case KeyType::Bool:
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
        break;
      case KeyType::IntList: {
        json arr = json::array();
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const long long v = std::stoll(item, &used);
          if (used != item.size()) throw ConfigError("");
          arr.push_back(v);
        }
        if (arr.empty()) break;
        return arr;
      }
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid value '" + text + "' for " + flag_name(def.key));
}

void check_type(const KeyDef& def, const json& v) {
  bool ok = false;
  switch (def.type) {
    case KeyType::String: ok = v.is_string(); break;
    case KeyType::Int: ok = v.is_number_integer(); break;
    case KeyType::Seed: ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); break;
    case KeyType::Double: ok = v.is_number(); break;
    case KeyType::Bool: ok = v.is_boolean(); break;
    case KeyType::IntList:
      ok = v.is_array() && !v.empty();
      for (const auto& e : v) ok = ok && e.is_number_integer();
      break;
  }
  if (!ok) throw ConfigError("config key '" + def.key + "' has the wrong type");
}

json load_config_file(const std::string& path, const CommandDef& def) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto found = std::find_if(def.keys.begin(), def.keys.end(), [&](const KeyDef& k) { return k.key == it.key(); });
    if (found == def.keys.end()) throw ConfigError("unknown config key '" + it.key() + "' for " + def.name);
    check_type(*found, it.value());
  }
  return j;
}

std::string require_string(const json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ConfigError("missing required option " + flag_name(key));
  return cfg.at(key).get<std::string>();
}

int require_positive_int(const json& cfg, const std::string& key) {
  const long long v = cfg.at(key).get<long long>();
  if (v < 1 || v > std::numeric_limits<int>::max()) throw ConfigError(flag_name(key) + " must be a positive integer");
  return static_cast<int>(v);
}

std::uint64_t require_seed(const json& cfg) {
  if (!cfg.contains("seed")) throw ConfigError("--seed is required for randomized commands");
  return cfg.at("seed").get<std::uint64_t>();
}

fs::path output_dir(const json& cfg) {
  const fs::path dir = cfg.at("out").get<std::string>();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'");
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

json certificate_to_json(const UniversalityCertificate& c) {
  json j;
  j["positive_ae"] = c.positive_ae;
  j["bounded"] = c.bounded;
  j["integrable"] = c.integrable;
  if (std::isinf(c.decay_exponent_2s)) j["decay_exponent_2s"] = "inf";
  else j["decay_exponent_2s"] = c.decay_exponent_2s;
  j["dims_n"] = c.dims_n;
  j["c0_vanishing"] = c.c0_vanishing;
  j["claims"] = {{"L2", c.claim_l2}, {"Cc", c.claim_cc}, {"C0", c.claim_c0}};
  return j;
}

// Library calls made while resolving the configuration report domain
// problems as configuration errors.
template <class F>
auto configure(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

int cmd_gram(const json& cfg, std::ostream& out) {
  const SpaceDescriptor space = configure([&] { return SpaceDescriptor::parse(require_string(cfg, "space")); });
  const KernelHandle kernel = configure([&] { return make_kernel(space, parse_kernel_spec(require_string(cfg, "kernel"))); });
  const double tol = cfg.at("psd_tol").get<double>();
  if (!(tol >= 0.0)) throw ConfigError("--psd-tol must be nonnegative");
  const long long threads = cfg.at("threads").get<long long>();
  if (threads < 0) throw ConfigError("--threads must be nonnegative");

  std::vector<Point> points;
  std::uint64_t seed = 0;
  if (cfg.contains("points")) {
    const std::string path = cfg.at("points").get<std::string>();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read point set '" + path + "'");
    SpaceDescriptor loaded;
    configure([&] {
      points = point_set_from_json(json::parse(in), &loaded);
      return 0;
    });
    if (!(loaded == space)) throw ConfigError("point set lives on " + loaded.name() + ", not " + space.name());
    if (cfg.contains("seed")) seed = cfg.at("seed").get<std::uint64_t>();
  } else {
    seed = require_seed(cfg);
    points = sample_points(space, require_positive_int(cfg, "n"), seed);
  }
  const fs::path dir = output_dir(cfg);

  const GramMatrix g = gram(points, kernel, seed, static_cast<int>(threads));
  const PsdReport psd = check_psd(g, tol);

  std::ostringstream csv;
  write_matrix_csv(csv, g.values, cfg);
  write_text(dir / "gram.csv", csv.str());
  write_text(dir / "points.json", dump_json(point_set_to_json(space, points)) + "\n");

  json meta;
  meta["config"] = cfg;
  meta["kernel"] = kernel_to_json(kernel);
  meta["space"] = space_to_json(space);
  meta["points"] = static_cast<long long>(points.size());
  meta["point_hash"] = g.metadata.point_hash;
  meta["seed"] = g.metadata.seed;
  meta["diagonal_min"] = g.values.diagonal().minCoeff();
  meta["diagonal_max"] = g.values.diagonal().maxCoeff();
  meta["psd"] = {{"min_eig", psd.min_eig}, {"max_eig", psd.max_eig}, {"tol", psd.tol}, {"pass", psd.pass}};
  write_text(dir / "gram.json", dump_json(meta) + "\n");

  out << "gram: " << points.size() << " points, kernel " << g.metadata.kernel_id << ", min_eig "
      << format_double(psd.min_eig) << ", max_eig " << format_double(psd.max_eig) << ", psd "
      << (psd.pass ? "pass" : "FAIL") << "\n";
  if (!psd.pass && cfg.at("strict").get<bool>()) return kPsdFailure;
  return kOk;
}

int cmd_density(const json& cfg, std::ostream& out) {
  const SpaceDescriptor space = configure([&] { return SpaceDescriptor::parse(require_string(cfg, "space")); });
  const SpectralDensity psi =
      configure([&] { return make_density(space, parse_kernel_spec(require_string(cfg, "kernel"))); });
  const double lmax = cfg.at("lambda_max").get<double>();
  if (!(lmax >= 0.0) || !std::isfinite(lmax)) throw ConfigError("--lambda-max must be finite and nonnegative");
  const int count = require_positive_int(cfg, "lambda_count");
  const fs::path dir = output_dir(cfg);

  // Higher-rank cones are tabulated along the diagonal direction; their
  // Plancherel density is not tabulated.
  const bool rank_one = has_rank_one_spectrum(space);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::ostringstream csv;
  csv << "# config: " << dump_json(cfg, -1) << "\n";
  csv << "lambda,psi,plancherel,product\n";
  for (int i = 0; i < count; ++i) {
    const double l = count == 1 ? 0.0 : lmax * i / (count - 1);
    const double p = psi.eval(std::vector<double>(static_cast<std::size_t>(space.rank()), l));
    const double mu = rank_one ? plancherel_density(space, l) : nan;
    csv << format_double(l) << "," << format_double(p) << "," << format_double(mu) << ","
        << format_double(rank_one ? p * mu : nan) << "\n";
  }
  write_text(dir / "density.csv", csv.str());

  const UniversalityCertificate cert = certify_universality(psi);
  json j;
  j["config"] = cfg;
  j["space"] = space_to_json(space);
  j["density"] = psi.tag();
  j["certificate"] = certificate_to_json(cert);
  write_text(dir / "certificate.json", dump_json(j) + "\n");

  out << "density: " << psi.tag() << " on " << space.name() << ", 2s = "
      << (std::isinf(cert.decay_exponent_2s) ? std::string("inf") : format_double(cert.decay_exponent_2s))
      << ", claims L2=" << cert.claim_l2 << " Cc=" << cert.claim_cc << " C0=" << cert.claim_c0 << "\n";
  return kOk;
}

int cmd_synth_compare(const json& cfg, std::ostream& out) {
  const SpaceDescriptor space = configure([&] { return SpaceDescriptor::parse(require_string(cfg, "space")); });
  const KernelSpec spec = configure([&] { return parse_kernel_spec(require_string(cfg, "kernel")); });

  std::function<double(double)> closed;
  double default_bound = 0.0;
  SpectralDensity density = configure([&] { return make_density(space, spec); });
  if (space.is_hyperbolic() && space.dim() == 3 && spec.family == "heat") {
    const double t = 0.5 * std::pow(spec.params.at("kappa"), 2);
    closed = [t](double r) {
      const double shape = r == 0.0 ? 1.0 : r / std::sinh(r);
      return std::exp(-r * r / (4.0 * t)) * shape;
    };
    default_bound = 1e-4;
  } else if (space.is_cone() && space.rank() == 1 && spec.family == "betaprime") {
    const double alpha = spec.params.at("alpha");
    closed = [alpha](double r) { return std::pow(std::cosh(0.5 * r), -2.0 * alpha); };
    default_bound = 1e-6;
  } else {
    throw ConfigError("synth-compare supports heat on hyperbolic:3 and betaprime on the n = 1 cone");
  }
  const double bound = cfg.contains("bound") ? cfg.at("bound").get<double>() : default_bound;
  const double r_min = cfg.at("r_min").get<double>();
  const double r_max = cfg.at("r_max").get<double>();
  const int count = require_positive_int(cfg, "r_count");
  if (!(r_min >= 0.0) || !(r_max >= r_min) || !std::isfinite(r_max))
    throw ConfigError("radii must satisfy 0 <= r_min <= r_max");
  json resolved = cfg;
  resolved["bound"] = bound;
  const fs::path dir = output_dir(cfg);

  const SynthesizedKernel kernel(density);
  std::ostringstream csv;
  csv << "# config: " << dump_json(resolved, -1) << "\n";
  csv << "r,synthesized,closed_form,rel_err\n";
  double max_err = 0.0;
  for (int i = 0; i < count; ++i) {
    const double r = count == 1 ? r_min : r_min + (r_max - r_min) * i / (count - 1);
    const double s = kernel.at_distance(r);
    const double c = closed(r);
    const double e = std::abs(s - c) / std::abs(c);
    max_err = std::max(max_err, e);
    csv << format_double(r) << "," << format_double(s) << "," << format_double(c) << "," << format_double(e) << "\n";
  }
  write_text(dir / "synth_compare.csv", csv.str());
  json j;
  j["config"] = resolved;
  j["kernel"] = kernel_to_json(KernelHandle(kernel));
  j["max_rel_err"] = max_err;
  j["pass"] = max_err <= bound;
  write_text(dir / "synth_compare.json", dump_json(j) + "\n");

  out << "synth-compare: max rel_err " << format_double(max_err) << " (bound " << format_double(bound) << ")\n";
  return max_err <= bound ? kOk : kOracleBound;
}

int cmd_fit(const json& cfg, std::ostream& out) {
  ExperimentConfig ex;
  ex.space = configure([&] { return SpaceDescriptor::parse(require_string(cfg, "space")); });
  ex.kernel = configure([&] { return make_kernel(ex.space, parse_kernel_spec(require_string(cfg, "kernel"))); });
  ex.target.kind = configure([&] { return parse_target(cfg.at("target").get<std::string>()); });
  if (ex.target.kind == TargetKind::SinLogDet && !ex.space.is_cone())
    throw ConfigError("target sin-logdet requires a cone");
  for (const auto& v : cfg.at("sizes")) {
    const long long n = v.get<long long>();
    if (n < 1 || n > 100000) throw ConfigError("--sizes entries must be between 1 and 100000");
    ex.sizes.push_back(static_cast<int>(n));
  }
  ex.seed = require_seed(cfg);
  ex.ball_radius = cfg.at("radius").get<double>();
  if (!(ex.ball_radius > 0.0) || !std::isfinite(ex.ball_radius)) throw ConfigError("--radius must be positive");
  ex.heldout = require_positive_int(cfg, "heldout");
  if (cfg.contains("mu")) {
    ex.mu = cfg.at("mu").get<double>();
    if (!(*ex.mu > 0.0)) throw ConfigError("--mu must be positive");
  }
  ex.anchor_in_training = cfg.at("anchor_in_training").get<bool>();
  const fs::path dir = output_dir(cfg);

  const ExperimentReport rep = universality_experiment(ex);
  json j;
  j["sizes"] = rep.sizes;
  j["rms"] = rep.rms;
  j["sup"] = rep.sup;
  j["seed"] = rep.seed;
  j["kernel"] = kernel_to_json(ex.kernel);
  j["target"] = to_string(ex.target.kind);
  j["mu"] = rep.mu;
  j["objective"] = rep.objective;
  j["config"] = cfg;
  write_text(dir / "fit_report.json", dump_json(j) + "\n");

  std::ostringstream csv;
  csv << "# config: " << dump_json(cfg, -1) << "\n";
  csv << "n,rms,sup,mu,objective\n";
  for (std::size_t i = 0; i < rep.sizes.size(); ++i)
    csv << rep.sizes[i] << "," << format_double(rep.rms[i]) << "," << format_double(rep.sup[i]) << ","
        << format_double(rep.mu[i]) << "," << format_double(rep.objective[i]) << "\n";
  write_text(dir / "learning_curve.csv", csv.str());

  out << "fit: " << to_string(ex.target.kind) << " on " << ex.space.name() << "\n";
  for (std::size_t i = 0; i < rep.sizes.size(); ++i)
    out << "  N=" << rep.sizes[i] << " rms=" << format_double(rep.rms[i]) << " sup=" << format_double(rep.sup[i])
        << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positive-definite kernels on symmetric spaces", "symmkern"};
  app.require_subcommand(1);

  struct Bound {
    CLI::App* sub;
    const CommandDef* def;
    std::map<std::string, CLI::Option*> options;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::string config_path;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  for (const CommandDef& def : commands()) {
    auto b = std::make_unique<Bound>();
    b->def = &def;
    b->sub = app.add_subcommand(def.name, def.help);
    b->sub->add_option("--config", b->config_path, "JSON config file; flags override its keys");
    for (const KeyDef& k : def.keys) {
      if (k.type == KeyType::Bool) b->options[k.key] = b->sub->add_flag(flag_name(k.key), b->flags[k.key], k.help);
      else b->options[k.key] = b->sub->add_option(flag_name(k.key), b->values[k.key], k.help);
    }
    bound.push_back(std::move(b));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    for (const auto& b : bound)
      if (b->sub->parsed()) out << b->sub->help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  for (const auto& b : bound) {
    if (!b->sub->parsed()) continue;
    try {
      json cfg = b->def->defaults;
      if (!b->config_path.empty()) {
        const json file = load_config_file(b->config_path, *b->def);
        for (auto it = file.begin(); it != file.end(); ++it) cfg[it.key()] = it.value();
      }
      for (const KeyDef& k : b->def->keys) {
        if (b->options[k.key]->count() == 0) continue;
        cfg[k.key] = k.type == KeyType::Bool ? json(b->flags[k.key]) : convert(k, b->values[k.key]);
      }
      // Stable key order in every output file.
      json ordered;
      for (const KeyDef& k : b->def->keys)
        if (cfg.contains(k.key)) ordered[k.key] = cfg[k.key];

      if (b->def->name == "gram") return cmd_gram(ordered, out);
      if (b->def->name == "density") return cmd_density(ordered, out);
      if (b->def->name == "synth-compare") return cmd_synth_compare(ordered, out);
      return cmd_fit(ordered, out);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << "\n";
      return kConfigError;
    } catch (const json::exception& e) {
      err << "config error: " << e.what() << "\n";
      return kConfigError;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kRuntimeError;
    }
  }
  return kConfigError;
}

}  // namespace symmkern::cli
