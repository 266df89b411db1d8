#include "lyapqc/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

namespace lyapqc {

namespace {

constexpr double kPi = std::numbers::pi;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"system", {"omega", "s_max"}},
      {"initial", {"gamma", "phi"}},
      {"policy", {"kind", "dt_free", "kick_angle"}},
      {"simulation", {"sample_interval", "eps_target", "max_switches", "max_time", "stop_at_fsc"}},
      {"sweep",
       {"kind", "gamma_min", "gamma_max", "gamma_count", "phi_min", "phi_max", "phi_count",
        "s_values"}},
  };
  return s;
}

std::string trim(std::string_view v) {
  const auto b = v.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = v.find_last_not_of(" \t\r");
  return std::string(v.substr(b, e - b + 1));
}

struct Entry {
  std::string value;
  int line = 0;
};

class Document {
 public:
  Document(std::string_view text, std::string source) : source_(std::move(source)) {
    std::string section;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string line = raw;
      if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(line_no, "malformed section header '" + line + "'");
        section = trim(std::string_view(line).substr(1, line.size() - 2));
        if (!schema().contains(section)) fail(line_no, "unknown section [" + section + "]");
        sections_.insert(section);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail(line_no, "expected 'key = value', got '" + line + "'");
      if (section.empty()) fail(line_no, "key outside of any section");
      const std::string key = trim(std::string_view(line).substr(0, eq));
      const std::string value = trim(std::string_view(line).substr(eq + 1));
      if (!schema().at(section).contains(key)) {
        fail(line_no, "unknown key '" + key + "' in [" + section + "]");
      }
      if (value.empty()) fail(line_no, "empty value for '" + key + "'");
      auto [it, inserted] = entries_.try_emplace(section + "." + key, Entry{value, line_no});
      if (!inserted) fail(line_no, "duplicate key '" + key + "' in [" + section + "]");
    }
  }

  bool has_section(const std::string& s) const { return sections_.contains(s); }

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto it = entries_.find(section + "." + key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  double number(const std::string& section, const std::string& key, double fallback) const {
    const Entry* e = find(section, key);
    return e ? parse_double(*e, key) : fallback;
  }

  long integer(const std::string& section, const std::string& key, long fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    long v = 0;
    const auto* end = e->value.data() + e->value.size();
    const auto [p, ec] = std::from_chars(e->value.data(), end, v);
    if (ec != std::errc() || p != end) fail(e->line, "'" + key + "' expects an integer");
    return v;
  }

  bool boolean(const std::string& section, const std::string& key, bool fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
    if (e->value == "false" || e->value == "no" || e->value == "0") return false;
    fail(e->line, "'" + key + "' expects true or false");
  }

  std::vector<double> list(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    std::vector<double> out;
    if (!e) return out;
    std::string item;
    std::istringstream in(e->value);
    while (std::getline(in, item, ',')) {
      out.push_back(parse_double(Entry{trim(item), e->line}, key));
    }
    return out;
  }

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& msg) const {
    const Entry* e = find(section, key);
    if (e) fail(e->line, msg);
    throw ConfigError(source_ + ": [" + section + "] " + msg);
  }

 private:
  double parse_double(const Entry& e, const std::string& key) const {
    double v = 0;
    const auto* end = e.value.data() + e.value.size();
    const auto [p, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v)) {
      fail(e.line, "'" + key + "' expects a finite number, got '" + e.value + "'");
    }
    return v;
  }

  std::string source_;
  std::set<std::string> sections_;
  std::map<std::string, Entry> entries_;
};

SweepKind parse_sweep_kind(const Document& doc) {
  const Entry* e = doc.find("sweep", "kind");
  if (!e) doc.fail("sweep", "kind", "missing 'kind'");
  if (e->value == "first_segment") return SweepKind::FirstSegment;
  if (e->value == "ssc_fidelity") return SweepKind::SscFidelity;
  if (e->value == "fidelity_vs_strength") return SweepKind::FidelityVsStrength;
  if (e->value == "phase_alignment") return SweepKind::PhaseAlignment;
  doc.fail(e->line, "unknown sweep kind '" + e->value + "'");
}

}  // namespace

std::string_view to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::FirstSegment: return "first_segment";
    case SweepKind::SscFidelity: return "ssc_fidelity";
    case SweepKind::FidelityVsStrength: return "fidelity_vs_strength";
    case SweepKind::PhaseAlignment: return "phase_alignment";
  }
  return "?";
}

Scenario parse_scenario(std::string_view text, const std::string& source) {
  const Document doc(text, source);

  auto params = [&] {
    const double omega = doc.number("system", "omega", 1.0);
    const double s_max = doc.number("system", "s_max", 0.1);
    try {
      return Params(omega, s_max);
    } catch (const DomainError& e) {
      doc.fail("system", "omega", e.what());
    }
  }();

  Angles initial;
  {
    const double gamma = doc.number("initial", "gamma", 0.5) * kPi;
    const double phi = doc.number("initial", "phi", 0.0) * kPi;
    try {
      initial = Angles(gamma, phi);
    } catch (const DomainError& e) {
      doc.fail("initial", "gamma", e.what());
    }
  }

  Policy policy = Policy::Standard;
  if (const Entry* e = doc.find("policy", "kind")) {
    if (e->value == "standard") policy = Policy::Standard;
    else if (e->value == "extended") policy = Policy::Extended;
    else doc.fail(e->line, "policy kind must be 'standard' or 'extended'");
  }

  Scenario sc;
  SimConfig& cfg = sc.sim;
  cfg = SimConfig::make(params, initial, policy);
  cfg.dt_free = doc.number("policy", "dt_free", cfg.dt_free);
  cfg.kick_angle = doc.number("policy", "kick_angle", cfg.kick_angle / kPi) * kPi;
  cfg.sample_interval = doc.number("simulation", "sample_interval", cfg.sample_interval);
  cfg.eps_target = doc.number("simulation", "eps_target", cfg.eps_target);
  cfg.max_switches = doc.integer("simulation", "max_switches", cfg.max_switches);
  cfg.max_time = doc.number("simulation", "max_time", cfg.max_time);
  cfg.stop_at_fsc = doc.boolean("simulation", "stop_at_fsc", cfg.stop_at_fsc);
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }

  if (doc.has_section("sweep")) {
    SweepSpec spec;
    spec.kind = parse_sweep_kind(doc);
    SweepGrid& g = spec.grid;
    g.omega = params.omega();

    double gmin = 0.01 / kPi;
    double gmax = (kPi - 0.01) / kPi;
    if (spec.kind == SweepKind::PhaseAlignment) {
      gmin = 1e-3 / kPi;
      gmax = 2 * params.theta_max() / kPi;
    }
    gmin = doc.number("sweep", "gamma_min", gmin);
    gmax = doc.number("sweep", "gamma_max", gmax);
    const long gcount = doc.integer("sweep", "gamma_count", 101);
    const double pmin = doc.number("sweep", "phi_min", 0.0);
    const double pmax = doc.number("sweep", "phi_max", 2.0);
    const long pcount = doc.integer("sweep", "phi_count", 101);
    if (gcount < 1) doc.fail("sweep", "gamma_count", "empty grid: gamma_count must be at least 1");
    if (pcount < 1) doc.fail("sweep", "phi_count", "empty grid: phi_count must be at least 1");

    g.gamma_axis = linspace(gmin * kPi, gmax * kPi, static_cast<std::size_t>(gcount), true);
    g.phi_axis = linspace(pmin * kPi, pmax * kPi, static_cast<std::size_t>(pcount), false);
    g.s_values = doc.list("sweep", "s_values");
    if (g.s_values.empty()) g.s_values = {params.s_max()};
    try {
      g.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(source + ": " + e.what());
    }
    sc.sweep = std::move(spec);
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

}  // namespace lyapqc
