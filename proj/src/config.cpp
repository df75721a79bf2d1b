#include "rbqr/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rbqr/types.hpp"

namespace rbqr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::map<std::string, std::string>& Config::schema() {
  static const std::map<std::string, std::string> keys = {
      {"matrix.source", "model"},  // model | random | path to a snapshot file
      {"matrix.format", "npy"},
      {"matrix.rows", "200"},
      {"matrix.cols", "100"},
      {"model.name", "damped_chirp"},
      {"model.param_file", ""},
      {"model.x_min", "0"},
      {"model.x_max", "10"},
      {"model.x_points", "2000"},
      {"model.p1_min", "1"},
      {"model.p1_max", "3"},
      {"model.p1_points", "25"},
      {"model.p2_min", "0"},
      {"model.p2_max", "0.5"},
      {"model.p2_points", "20"},
      {"greedy.tau", "1e-8"},
      {"greedy.k_max", "100"},
      {"greedy.workers", "1"},
      {"greedy.seed", "1"},
      {"validate.source", "training"},  // training | model | path to a snapshot file
      {"validate.format", "npy"},
      {"validate.param_file", ""},
      {"validate.density", "3"},
      {"enrich.rounds", "2"},
      {"eim.enabled", "true"},
      {"output.dir", "rbqr_out"},
      {"output.formats", "npy,text"},
      {"reconstruct.tau1", "1e-8"},
      {"reconstruct.tau2", "1e-8"},
      {"bench.mode", "strong"},
      {"bench.worker_counts", "1,2,4"},
      {"bench.k", "100"},
      {"bench.rows", "10000"},
      {"bench.cols_per_worker", "100"},
  };
  return keys;
}

Config::Config() : values_(schema()) {}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& source) {
  Config c;
  c.parse(text, source);
  return c;
}

void Config::parse(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line, section;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto where = source + ":" + std::to_string(lineno) + ": ";
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InputError(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw InputError(where + "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(where + "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw InputError(where + "missing key");
    if (!section.empty()) key = section + "." + key;
    if (!schema().count(key)) throw InputError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw InputError(where + "duplicate key '" + key + "'");
    values_[key] = value;
  }
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw InputError("override '" + assignment + "' is not key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
  if (!schema().count(key)) throw InputError("unknown key '" + key + "'");
  values_[key] = value;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string& Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InputError("unknown key '" + key + "'");
  return it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string& v = get(key);
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || !std::isfinite(d)) throw InputError(key + ": '" + v + "' is not a number");
  return d;
}

long long Config::get_int(const std::string& key) const {
  const std::string& v = get(key);
  std::size_t used = 0;
  long long n = 0;
  try {
    n = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size()) throw InputError(key + ": '" + v + "' is not an integer");
  return n;
}

bool Config::get_bool(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InputError(key + ": '" + v + "' is not a boolean");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  std::vector<std::string> out;
  std::istringstream in(get(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<long long> Config::get_int_list(const std::string& key) const {
  std::vector<long long> out;
  for (const auto& item : get_list(key)) {
    std::size_t used = 0;
    long long n = 0;
    try {
      n = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw InputError(key + ": '" + item + "' is not an integer");
    out.push_back(n);
  }
  return out;
}

std::string Config::to_string() const {
  std::ostringstream os;
  std::string section;
  for (const auto& [key, value] : values_) {
    const auto dot = key.find('.');
    const std::string s = key.substr(0, dot);
    if (s != section) {
      if (!section.empty()) os << "\n";
      os << "[" << s << "]\n";
      section = s;
    }
    os << key.substr(dot + 1) << " = " << value << "\n";
  }
  return os.str();
}

}  // namespace rbqr
