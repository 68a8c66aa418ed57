#include "stca/config.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <variant>

namespace stca {

std::vector<double> SweepConfig::snr_values() const {
  if (!(snr_step_db > 0) || snr_max_db < snr_min_db) throw ConfigError("sweep: need snr_step_db > 0 and snr_max_db >= snr_min_db");
  std::vector<double> out;
  const auto n = static_cast<int>(std::floor((snr_max_db - snr_min_db) / snr_step_db + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(snr_min_db + i * snr_step_db);
  return out;
}

PresumedTarget ScenarioConfig::presumed_target() const {
  if (presumed) return *presumed;
  if (target) return {target->angle_deg, target->range_m};
  return {};
}

void ScenarioConfig::validate() const {
  radar.validate();
  thresholds.validate();
  const int occ = radar.pulse_bins();
  auto check_bin = [&](int bin, const std::string& what) {
    if (bin < 0 || bin + occ > radar.num_range_bins)
      throw ConfigError(fmt::format("{}: range_bin {} does not fit in {} bins", what, bin, radar.num_range_bins));
  };
  if (target) check_bin(target->range_bin, "target");
  for (std::size_t q = 0; q < jammers.size(); ++q) {
    check_bin(jammers[q].range_bin, fmt::format("jammer {}", q + 1));
    check_bin(jammers[q].range_bin + errors.range_bin_error, fmt::format("jammer {} with range error", q + 1));
  }
  if (!(beam.mainlobe_half_width > 0) || !(beam.null_half_width > 0)) throw ConfigError("beam control half-widths must be positive");
  if (!(beam.ripple_db > 0)) throw ConfigError("mainlobe ripple_db must be positive");
  if (!(beam.solver.grid_step > 0) || beam.solver.max_iter < 1) throw ConfigError("solver: grid_step > 0 and max_iter >= 1 required");
  if (!(pattern_step > 0) || pattern_step > 0.5) throw ConfigError("pattern_step must lie in (0, 0.5]");
  sweep.snr_values();
}

ScenarioConfig default_scenario() {
  ScenarioConfig c;
  c.jammers = {{0.0, 64e3, 30.0, 321, {}}, {0.0, 66e3, 30.0, 431, {}}, {0.0, 84e3, 30.0, 1601, {}}};
  return c;
}

namespace {

using Value = std::variant<double, bool, std::string, std::vector<std::string>>;

struct Entry {
  Value value;
  int line;
};

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(fmt::format("{}:{}: {}", origin, line, msg));
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

Value parse_value(const std::string& raw, const std::string& origin, int line) {
  if (raw.empty()) fail(origin, line, "missing value");
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') fail(origin, line, "unterminated string");
    return raw.substr(1, raw.size() - 2);
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') fail(origin, line, "unterminated array");
    std::vector<std::string> items;
    std::stringstream ss(raw.substr(1, raw.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      if (item.size() < 2 || item.front() != '"' || item.back() != '"') fail(origin, line, "arrays hold quoted strings only");
      items.push_back(item.substr(1, item.size() - 2));
    }
    return items;
  }
  std::string num;
  for (char ch : raw)
    if (ch != '_') num.push_back(ch);
  double d = 0.0;
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), d);
  if (ec != std::errc() || ptr != num.data() + num.size()) fail(origin, line, fmt::format("cannot parse value '{}'", raw));
  return d;
}

class Table {
 public:
  Table(std::string name, std::string origin, int line) : name_(std::move(name)), origin_(std::move(origin)), line_(line) {}

  void set(const std::string& key, Entry e) {
    if (entries_.count(key)) fail(origin_, e.line, fmt::format("duplicate key '{}'", key));
    entries_.emplace(key, std::move(e));
  }

  void number(const std::string& key, double& out) {
    if (auto* e = take(key)) out = as<double>(key, *e);
  }
  void integer(const std::string& key, int& out) {
    if (auto* e = take(key)) {
      const double d = as<double>(key, *e);
      if (d != std::floor(d) || std::abs(d) > 1e9) fail(origin_, e->line, fmt::format("'{}' must be an integer", key));
      out = static_cast<int>(d);
    }
  }
  void flag(const std::string& key, bool& out) {
    if (auto* e = take(key)) out = as<bool>(key, *e);
  }
  void text(const std::string& key, std::string& out) {
    if (auto* e = take(key)) out = as<std::string>(key, *e);
  }
  void list(const std::string& key, std::vector<std::string>& out) {
    if (auto* e = take(key)) out = as<std::vector<std::string>>(key, *e);
  }
  std::optional<double> optional_number(const std::string& key) {
    if (auto* e = take(key)) return as<double>(key, *e);
    return std::nullopt;
  }
  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  int line() const { return line_; }
  const std::string& origin() const { return origin_; }

  void finish() const {
    for (const auto& [key, e] : entries_)
      if (!used_.count(key)) fail(origin_, e.line, fmt::format("unknown key '{}' in [{}]", key, name_));
  }

 private:
  Entry* take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    used_[key] = true;
    return &it->second;
  }
  template <typename V>
  const V& as(const std::string& key, const Entry& e) const {
    if (const auto* v = std::get_if<V>(&e.value)) return *v;
    fail(origin_, e.line, fmt::format("'{}' in [{}] has the wrong type", key, name_));
  }

  std::string name_;
  std::string origin_;
  int line_;
  std::map<std::string, Entry> entries_;
  std::map<std::string, bool> used_;
};

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
  std::map<std::string, Table> singles;
  std::map<std::string, std::vector<Table>> arrays;
  const std::vector<std::string> single_names{"radar", "target", "presumed", "errors", "thresholds", "mainlobe_region", "solver", "sweep", "output"};
  const std::vector<std::string> array_names{"jammer", "null_region"};
  auto known = [](const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); };

  Table root("", origin, 0);
  Table* current = &root;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.rfind("[[", 0) == 0) {
      if (s.size() < 4 || s.substr(s.size() - 2) != "]]") fail(origin, line, "malformed array-table header");
      const std::string name = trim(s.substr(2, s.size() - 4));
      if (!known(array_names, name)) fail(origin, line, fmt::format("unknown array table [[{}]]", name));
      arrays[name].emplace_back(name, origin, line);
      current = &arrays[name].back();
    } else if (s.front() == '[') {
      if (s.back() != ']') fail(origin, line, "malformed table header");
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (!known(single_names, name)) fail(origin, line, fmt::format("unknown table [{}]", name));
      if (singles.count(name)) fail(origin, line, fmt::format("table [{}] defined twice", name));
      current = &singles.emplace(name, Table(name, origin, line)).first->second;
    } else {
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(origin, line, "expected key = value");
      const std::string key = trim(s.substr(0, eq));
      if (key.empty()) fail(origin, line, "empty key");
      current->set(key, {parse_value(trim(s.substr(eq + 1)), origin, line), line});
    }
  }
  root.finish();

  ScenarioConfig cfg = default_scenario();
  auto section = [&](const std::string& name) -> Table* {
    auto it = singles.find(name);
    return it == singles.end() ? nullptr : &it->second;
  };

  if (Table* t = section("radar")) {
    auto& r = cfg.radar;
    t->integer("num_tx", r.num_tx);
    t->integer("num_rx", r.num_rx);
    t->number("carrier_freq", r.carrier_freq);
    if (auto d = t->optional_number("element_spacing")) r.element_spacing = *d;
    t->number("bandwidth", r.bandwidth);
    t->number("pulse_width", r.pulse_width);
    t->number("sample_rate", r.sample_rate);
    t->number("transmit_delay", r.transmit_delay);
    t->number("prf", r.prf);
    t->integer("num_range_bins", r.num_range_bins);
    t->integer("num_pulses", r.num_pulses);
    t->finish();
  }
  if (Table* t = section("target")) {
    bool present = true;
    t->flag("present", present);
    TargetSpec ts;
    t->number("angle_deg", ts.angle_deg);
    t->number("range_m", ts.range_m);
    t->number("snr_db", ts.snr_db);
    t->integer("range_bin", ts.range_bin);
    t->finish();
    cfg.target = present ? std::optional<TargetSpec>(ts) : std::nullopt;
  }
  if (Table* t = section("presumed")) {
    PresumedTarget p = cfg.presumed_target();
    t->number("angle_deg", p.angle_deg);
    t->number("range_m", p.range_m);
    t->finish();
    cfg.presumed = p;
  }
  if (auto it = arrays.find("jammer"); it != arrays.end()) {
    cfg.jammers.clear();
    for (auto& t : it->second) {
      FalseTargetSpec j;
      t.number("angle_deg", j.angle_deg);
      t.number("jnr_db", j.jnr_db);
      t.integer("range_bin", j.range_bin);
      const bool has_range = t.has("range_m");
      const bool has_delay = t.has("forward_delay");
      if (has_range == has_delay) fail(origin, t.line(), "[[jammer]] needs exactly one of range_m or forward_delay");
      if (has_range) {
        t.number("range_m", j.range_m);
      } else {
        double jammer_range = 0.0, delay = 0.0;
        if (!t.has("jammer_range_m")) fail(origin, t.line(), "forward_delay requires jammer_range_m");
        t.number("jammer_range_m", jammer_range);
        t.number("forward_delay", delay);
        j = FalseTargetSpec::from_forward_delay(j.angle_deg, jammer_range, delay, j.jnr_db, j.range_bin);
      }
      t.finish();
      cfg.jammers.push_back(j);
    }
  }
  if (Table* t = section("errors")) {
    t->number("doa_error_deg", cfg.errors.doa_error_deg);
    t->integer("range_bin_error", cfg.errors.range_bin_error);
    t->finish();
  }
  if (Table* t = section("thresholds")) {
    std::string mode = "normalized";
    t->text("mode", mode);
    if (mode == "raw") cfg.thresholds = DetectionThresholds::raw_defaults();
    else if (mode != "normalized") fail(origin, t->line(), fmt::format("thresholds.mode must be raw or normalized, got '{}'", mode));
    t->number("eta_db", cfg.thresholds.eta_db);
    t->number("chi", cfg.thresholds.chi);
    t->number("zeta", cfg.thresholds.zeta);
    t->finish();
  }
  if (Table* t = section("mainlobe_region")) {
    t->number("half_width", cfg.beam.mainlobe_half_width);
    t->number("ripple_db", cfg.beam.ripple_db);
    t->number("margin", cfg.beam.solver.mainlobe_margin);
    t->integer("points", cfg.beam.solver.mainlobe_points);
    t->finish();
  }
  if (auto it = arrays.find("null_region"); it != arrays.end()) {
    for (auto& t : it->second) {
      NullRegionSpec n;
      if (!t.has("center")) fail(origin, t.line(), "[[null_region]] needs center");
      t.number("center", n.center);
      t.number("half_width", n.half_width);
      t.number("depth_db", n.depth_db);
      t.finish();
      cfg.beam.null_regions.push_back(n);
    }
  }
  if (Table* t = section("solver")) {
    t->number("grid_step", cfg.beam.solver.grid_step);
    t->integer("max_iter", cfg.beam.solver.max_iter);
    t->integer("null_points", cfg.beam.solver.null_points);
    t->flag("adaptive_targets", cfg.beam.solver.adaptive_targets);
    t->number("null_half_width", cfg.beam.null_half_width);
    t->number("depth_db", cfg.beam.depth_db);
    t->finish();
  }
  if (Table* t = section("sweep")) {
    t->number("snr_min_db", cfg.sweep.snr_min_db);
    t->number("snr_max_db", cfg.sweep.snr_max_db);
    t->number("snr_step_db", cfg.sweep.snr_step_db);
    t->list("methods", cfg.sweep.methods);
    t->finish();
  }
  if (Table* t = section("output")) {
    t->number("pattern_step", cfg.pattern_step);
    t->finish();
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

}  // namespace stca
