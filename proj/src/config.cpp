#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mqcloc/experiment.hpp"
#include "mqcloc/format.hpp"

namespace mqcloc {

namespace {

namespace pt = boost::property_tree;

constexpr double kTwoPi = 2.0 * 3.141592653589793;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"system", {"n_spins", "coupling", "rms_hz", "random_scale", "chain_strength", "positions",
                  "prefactor"}},
      {"schedule", {"tau0_us", "n_cycles", "p_values", "prep_cycles"}},
      {"analysis", {"window_fraction", "slope_tol", "settle_band", "n_phi"}},
      {"output", {"dir", "formats"}},
      {"run", {"seed", "backend", "trotter_step_us"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::config, "key '" + key + "': expected a number, got '" + text + "'");
  }
}

long long to_integer(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::config, "key '" + key + "': expected an integer, got '" + text + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    if (!text.empty() && text[0] == '-') throw std::invalid_argument(text);
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::config, "key '" + key + "': expected an unsigned 64-bit integer, got '" + text + "'");
  }
}

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

// Shortest decimal x with x * factor == value, so that parsing reproduces value exactly.
std::string scaled(double value, double factor) {
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value / factor);
    if (std::strtod(buf, nullptr) * factor == value) return buf;
  }
  return format_double(value / factor);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (system.n_spins < 2 || system.n_spins > kMaxSpins) {
    fail(ErrorKind::config, "system.n_spins must lie in [2, " + std::to_string(kMaxSpins) + "]");
  }
  if (!(schedule.tau0 > 0.0)) fail(ErrorKind::config, "schedule.tau0_us must be positive");
  if (schedule.n_cycles < 0) fail(ErrorKind::config, "schedule.n_cycles must be >= 0");
  if (schedule.p_values.empty()) fail(ErrorKind::config, "schedule.p_values must not be empty");
  for (double p : schedule.p_values) {
    if (!(p >= 0.0 && p < 1.0)) {
      fail(ErrorKind::config, "schedule.p_values entry " + format_double(p) + " outside [0, 1)");
    }
  }
  if (schedule.prep_cycles.empty()) fail(ErrorKind::config, "schedule.prep_cycles must not be empty");
  for (int n0 : schedule.prep_cycles) {
    if (n0 < 0) fail(ErrorKind::config, "schedule.prep_cycles entries must be >= 0");
  }
  const auto& pl = analysis.plateau;
  if (!(pl.window_fraction > 0.0 && pl.window_fraction <= 1.0)) {
    fail(ErrorKind::config, "analysis.window_fraction must lie in (0, 1]");
  }
  if (!(pl.slope_tol > 0.0)) fail(ErrorKind::config, "analysis.slope_tol must be positive");
  if (!(pl.settle_band > 0.0)) fail(ErrorKind::config, "analysis.settle_band must be positive");
  if (analysis.n_phi != 0 && (analysis.n_phi < 2 * system.n_spins + 2 || analysis.n_phi % 2 != 0)) {
    fail(ErrorKind::config, "analysis.n_phi must be 0 or an even count >= 2N+2");
  }
  if (backend.kind == BackendKind::trotter) {
    if (!(backend.trotter_step > 0.0)) fail(ErrorKind::config, "run.trotter_step_us must be positive");
    if (system.n_spins > 10) {
      fail(ErrorKind::config, "the trotter backend works on dense operators and is limited to 10 spins");
    }
  }
  if (output.dir.empty()) fail(ErrorKind::config, "output.dir must not be empty");
  // Coupling model consistency is checked by building the system.
  (void)build_system(*this);
}

SpinSystem build_system(const ExperimentConfig& cfg) {
  CouplingModel model = cfg.system.model;
  if (auto* random = std::get_if<RandomAllToAllCouplings>(&model.variant)) random->seed = cfg.seed;
  try {
    return couplings_from_model(model, cfg.system.n_spins);
  } catch (const Error& e) {
    fail(ErrorKind::config, std::string("system: ") + e.what());
  }
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::config, std::string("cannot parse config: ") + e.what());
  }

  std::map<std::string, std::map<std::string, std::string>> values;
  for (const auto& [section, body] : tree) {
    const auto known = schema().find(section);
    if (known == schema().end()) {
      if (body.empty()) fail(ErrorKind::config, "key '" + section + "' must live inside a section");
      fail(ErrorKind::config, "unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!known->second.count(key)) fail(ErrorKind::config, "unknown key '" + section + "." + key + "'");
      values[section][key] = trim(value.data());
    }
  }
  auto get = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
    const auto s = values.find(section);
    if (s == values.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  };

  ExperimentConfig cfg;

  if (auto v = get("system", "n_spins")) cfg.system.n_spins = static_cast<int>(to_integer("system.n_spins", *v));
  const std::string coupling = get("system", "coupling").value_or("random");
  if (coupling == "random") {
    RandomAllToAllCouplings r;
    if (auto v = get("system", "random_scale")) r.scale = to_double("system.random_scale", *v);
    cfg.system.model.variant = r;
  } else if (coupling == "chain") {
    ChainCouplings c;
    if (auto v = get("system", "chain_strength")) c.nearest_neighbor_strength = to_double("system.chain_strength", *v);
    cfg.system.model.variant = c;
  } else if (coupling == "geometric") {
    GeometricCouplings g;
    if (auto v = get("system", "prefactor")) g.prefactor = to_double("system.prefactor", *v);
    const auto positions = get("system", "positions");
    if (!positions) fail(ErrorKind::config, "system.positions is required for geometric couplings");
    for (const auto& triple : split(*positions, ';')) {
      const auto xyz = split(triple, ' ');
      if (xyz.size() != 3) fail(ErrorKind::config, "system.positions entries need 3 coordinates: '" + triple + "'");
      g.positions.push_back({to_double("system.positions", xyz[0]), to_double("system.positions", xyz[1]),
                             to_double("system.positions", xyz[2])});
    }
    cfg.system.model.variant = std::move(g);
  } else {
    fail(ErrorKind::config, "system.coupling must be random, chain or geometric, got '" + coupling + "'");
  }
  if (auto v = get("system", "rms_hz")) {
    const double hz = to_double("system.rms_hz", *v);
    if (hz < 0.0) fail(ErrorKind::config, "system.rms_hz must be >= 0");
    cfg.system.model.target_second_moment = hz > 0.0 ? std::optional<double>(hz * kTwoPi) : std::nullopt;
  }

  if (auto v = get("schedule", "tau0_us")) cfg.schedule.tau0 = to_double("schedule.tau0_us", *v) * 1e-6;
  if (auto v = get("schedule", "n_cycles")) cfg.schedule.n_cycles = static_cast<int>(to_integer("schedule.n_cycles", *v));
  if (auto v = get("schedule", "p_values")) {
    cfg.schedule.p_values.clear();
    for (const auto& item : split(*v, ',')) cfg.schedule.p_values.push_back(to_double("schedule.p_values", item));
  }
  if (auto v = get("schedule", "prep_cycles")) {
    cfg.schedule.prep_cycles.clear();
    for (const auto& item : split(*v, ',')) {
      cfg.schedule.prep_cycles.push_back(static_cast<int>(to_integer("schedule.prep_cycles", item)));
    }
  }

  if (auto v = get("analysis", "window_fraction")) cfg.analysis.plateau.window_fraction = to_double("analysis.window_fraction", *v);
  if (auto v = get("analysis", "slope_tol")) cfg.analysis.plateau.slope_tol = to_double("analysis.slope_tol", *v);
  if (auto v = get("analysis", "settle_band")) cfg.analysis.plateau.settle_band = to_double("analysis.settle_band", *v);
  if (auto v = get("analysis", "n_phi")) cfg.analysis.n_phi = static_cast<int>(to_integer("analysis.n_phi", *v));

  if (auto v = get("output", "dir")) cfg.output.dir = *v;
  if (auto v = get("output", "formats")) {
    cfg.output.csv = cfg.output.svg = false;
    for (const auto& f : split(*v, ',')) {
      if (f == "csv") cfg.output.csv = true;
      else if (f == "svg") cfg.output.svg = true;
      else fail(ErrorKind::config, "output.formats entries must be csv or svg, got '" + f + "'");
    }
  }

  if (auto v = get("run", "seed")) cfg.seed = to_u64("run.seed", *v);
  if (auto v = get("run", "backend")) cfg.backend.kind = backend_from_string(*v);
  if (auto v = get("run", "trotter_step_us")) cfg.backend.trotter_step = to_double("run.trotter_step_us", *v) * 1e-6;

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open config file " + path.string());
  return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& cfg) {
  out << "[system]\n"
      << "n_spins = " << cfg.system.n_spins << '\n';
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RandomAllToAllCouplings>) {
          out << "coupling = random\nrandom_scale = " << format_double(v.scale) << '\n';
        } else if constexpr (std::is_same_v<T, ChainCouplings>) {
          out << "coupling = chain\nchain_strength = " << format_double(v.nearest_neighbor_strength) << '\n';
        } else {
          std::vector<std::string> triples;
          for (const auto& r : v.positions) {
            triples.push_back(format_double(r[0]) + " " + format_double(r[1]) + " " + format_double(r[2]));
          }
          out << "coupling = geometric\nprefactor = " << format_double(v.prefactor) << '\n'
              << "positions = " << join(triples, "; ") << '\n';
        }
      },
      cfg.system.model.variant);
  out << "rms_hz = "
      << (cfg.system.model.target_second_moment ? scaled(*cfg.system.model.target_second_moment, kTwoPi) : "0")
      << "\n\n[schedule]\n"
      << "tau0_us = " << scaled(cfg.schedule.tau0, 1e-6) << '\n'
      << "n_cycles = " << cfg.schedule.n_cycles << '\n';
  std::vector<std::string> ps, n0s;
  for (double p : cfg.schedule.p_values) ps.push_back(format_double(p));
  for (int n0 : cfg.schedule.prep_cycles) n0s.push_back(std::to_string(n0));
  out << "p_values = " << join(ps, ", ") << '\n'
      << "prep_cycles = " << join(n0s, ", ") << "\n\n[analysis]\n"
      << "window_fraction = " << format_double(cfg.analysis.plateau.window_fraction) << '\n'
      << "slope_tol = " << format_double(cfg.analysis.plateau.slope_tol) << '\n'
      << "settle_band = " << format_double(cfg.analysis.plateau.settle_band) << '\n'
      << "n_phi = " << cfg.analysis.n_phi << "\n\n[output]\n"
      << "dir = " << cfg.output.dir.string() << '\n';
  std::vector<std::string> formats;
  if (cfg.output.csv) formats.emplace_back("csv");
  if (cfg.output.svg) formats.emplace_back("svg");
  out << "formats = " << join(formats, ", ") << "\n\n[run]\n"
      << "seed = " << cfg.seed << '\n'
      << "backend = " << to_string(cfg.backend.kind) << '\n'
      << "trotter_step_us = " << scaled(cfg.backend.trotter_step, 1e-6) << '\n';
}

}  // namespace mqcloc
