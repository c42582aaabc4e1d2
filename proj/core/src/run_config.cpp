#include "biotsim/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace biotsim {

namespace {

using Kind = ConfigKey::Kind;

constexpr ConfigKey kSchema[] = {
    {"E", Kind::Real, "9010", "Young's modulus [Pa]"},
    {"nu", Kind::Real, "0.35", "Poisson ratio, in (0, 0.5)"},
    {"alpha", Kind::Real, "1", "Biot-Willis coefficient, in (0, 1]"},
    {"c0", Kind::Real, "4.5e-07", "constrained specific storage [1/Pa]"},
    {"kappa", Kind::Real, "1.4e-09", "permeability [mm^2]"},
    {"mu_f", Kind::Real, "1.48e-05", "fluid viscosity [Pa*min]"},
    {"c_b", Kind::Real, "3e-05", "skull-wall conductance [mm/(min*Pa)]"},
    {"p_sas", Kind::Real, "1070", "subarachnoid pressure [Pa]"},
    {"p_vent", Kind::Real, "1100", "ventricular pressure [Pa]"},
    {"q_injured", Kind::Real, "0.009", "CSF absorption rate density on the injured region"},
    {"dt", Kind::Real, "1", "time step [min]"},
    {"t_max", Kind::Real, "3000", "maximum simulated time [min]"},
    {"plateau_tol", Kind::Real, "1e-06", "relative per-step max-ICP change that ends a run"},
    {"algorithm", Kind::Word, "coupled", "time stepper: coupled | decoupled"},
    {"outer_width", Kind::Real, "124", "synthetic brain outer width [mm]"},
    {"outer_height", Kind::Real, "104", "synthetic brain outer height [mm]"},
    {"ventricle_scale", Kind::Real, "0.25", "ventricle size as a fraction of the outer ellipse"},
    {"injured_fraction", Kind::Real, "0.018", "fraction of elements tagged injured"},
    {"target_elements", Kind::Int, "9155", "synthetic mesh element-count target"},
    {"rates", Kind::RealList, "0.00225,0.0045,0.009,0.018,0.036",
     "absorption rates for the rate sweep"},
    {"sweep_param", Kind::Word, "kappa", "swept parameter: E | nu | kappa"},
    {"sweep_factors", Kind::RealList, "0.1,1,10",
     "multipliers of the baseline value (E and kappa sweeps)"},
    {"sweep_values", Kind::RealList, "0.3,0.35,0.499", "absolute values (nu sweep)"},
};

int key_index(const std::string& key) {
  for (size_t i = 0; i < std::size(kSchema); ++i)
    if (key == kSchema[i].name) return static_cast<int>(i);
  return -1;
}

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::runtime_error("config key '" + key + "': expected a real number, got '" + text +
                             "'");
  return value;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  const auto end = s.find_last_not_of(" \t\r");
  return begin == std::string::npos ? std::string() : s.substr(begin, end - begin + 1);
}

}  // namespace

std::span<const ConfigKey> config_schema() { return kSchema; }

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  cfg.values_.reserve(std::size(kSchema));
  for (const auto& key : kSchema) cfg.values_.push_back(key.default_value);
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const int idx = key_index(key);
  if (idx < 0) throw std::runtime_error("unknown config key '" + key + "'");
  const ConfigKey& schema = kSchema[idx];
  const std::string trimmed = trim(value);
  switch (schema.kind) {
    case Kind::Real:
      parse_real(key, trimmed);
      break;
    case Kind::Int: {
      int v = 0;
      auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
      if (ec != std::errc() || ptr != trimmed.data() + trimmed.size())
        throw std::runtime_error("config key '" + key + "': expected an integer, got '" +
                                 trimmed + "'");
      break;
    }
    case Kind::Word:
      if (trimmed.empty() || trimmed.find_first_of(" \t") != std::string::npos)
        throw std::runtime_error("config key '" + key + "': expected a single word");
      break;
    case Kind::RealList: {
      std::stringstream ss(trimmed);
      std::string item;
      bool any = false;
      while (std::getline(ss, item, ',')) {
        parse_real(key, trim(item));
        any = true;
      }
      if (!any) throw std::runtime_error("config key '" + key + "': empty list");
      break;
    }
  }
  values_[idx] = trimmed;
}

const std::string& RunConfig::get(const std::string& key) const {
  const int idx = key_index(key);
  if (idx < 0) throw std::logic_error("unknown config key '" + key + "'");
  return values_[idx];
}

double RunConfig::get_real(const std::string& key) const { return parse_real(key, get(key)); }

int RunConfig::get_int(const std::string& key) const {
  return static_cast<int>(parse_real(key, get(key)));
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, trim(item)));
  return out;
}

RunConfig RunConfig::from_string(const std::string& content) {
  RunConfig cfg = defaults();
  std::istringstream in(content);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_number) +
                               ": expected 'key = value'");
    try {
      cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const std::runtime_error& err) {
      throw std::runtime_error("config line " + std::to_string(line_number) + ": " + err.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream content;
  content << in.rdbuf();
  return from_string(content.str());
}

std::string config_help_text() {
  std::string out = "Configuration keys (key = value, '#' comments):\n";
  for (const auto& key : kSchema) {
    out += "  ";
    out += key.name;
    out += " (default ";
    out += key.default_value;
    out += "): ";
    out += key.doc;
    out += "\n";
  }
  return out;
}

}  // namespace biotsim
