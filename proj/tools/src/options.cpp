#include "options.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "silt/csv.hpp"

namespace silt::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_true(const std::string& v) {
  std::string lower(v);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "true" || lower == "1" || lower == "yes" || lower == "on") return true;
  if (lower == "false" || lower == "0" || lower == "no" || lower == "off") return false;
  throw UsageError("config: expected a boolean, got '" + v + "'");
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::map<std::string, std::string>& config, CLI::App& command) {
  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) != 0) continue;
    given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  std::vector<std::string> out = args;
  for (const auto& [key, value] : config) {
    if (key == "config") throw UsageError("config: nested config files are not supported");
    const CLI::Option* opt = command.get_option_no_throw("--" + key);
    if (opt == nullptr) throw UsageError("config: unknown key '" + key + "' for command " + command.get_name());
    if (given.count(key) != 0) continue;
    if (opt->get_expected_min() == 0) {
      if (is_true(value)) out.push_back("--" + key);
    } else {
      out.push_back("--" + key + "=" + value);
    }
  }
  return out;
}

std::uint64_t config_hash(const CLI::App& command) {
  static const std::set<std::string> skip{"help", "out", "config", "workers", "seed"};
  std::vector<std::pair<std::string, std::string>> entries;
  for (const CLI::Option* opt : command.get_options()) {
    const std::string name = opt->get_name(false, true);
    const std::string key = name.rfind("--", 0) == 0 ? name.substr(2) : name;
    if (skip.count(key) != 0) continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    entries.emplace_back(key, value);
  }
  std::sort(entries.begin(), entries.end());
  std::string canonical = "command=" + command.get_name() + "\n";
  for (const auto& [k, v] : entries) canonical += k + "=" + v + "\n";
  return fnv1a64(canonical);
}

double parse_number(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw UsageError("expected a number");
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("malformed number '" + text + "'");
    }
    if (used != s.size()) throw UsageError("malformed number '" + text + "'");
    return v;
  };
  const auto caret = text.find('^');
  const double v = caret == std::string::npos
                       ? to_double(text)
                       : std::pow(to_double(text.substr(0, caret)), to_double(text.substr(caret + 1)));
  if (!std::isfinite(v)) throw UsageError("number '" + text + "' is not finite");
  return v;
}

std::vector<double> parse_sweep(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) return {};
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
    return out;
  }
  const std::string lo = trim(text.substr(0, dots)), hi = trim(text.substr(dots + 2));
  const auto c1 = lo.find('^'), c2 = hi.find('^');
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw UsageError("malformed range '" + text + "': expected B^E1..B^E2");
  }
  const double b1 = parse_number(lo.substr(0, c1)), b2 = parse_number(hi.substr(0, c2));
  const double e1 = parse_number(lo.substr(c1 + 1)), e2 = parse_number(hi.substr(c2 + 1));
  if (b1 != b2 || !(b1 > 0.0)) throw UsageError("malformed range '" + text + "': bases must match and be positive");
  if (e1 != std::round(e1) || e2 != std::round(e2)) {
    throw UsageError("malformed range '" + text + "': exponents must be integers");
  }
  const int a = static_cast<int>(e1), b = static_cast<int>(e2);
  if (std::abs(b - a) > 10000) throw UsageError("range '" + text + "' is too long");
  const int step = b >= a ? 1 : -1;
  std::vector<double> out;
  for (int e = a;; e += step) {
    out.push_back(std::pow(b1, e));
    if (e == b) break;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& raw) {
  std::vector<int> out;
  std::stringstream ss(trim(raw));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw UsageError("malformed integer '" + item + "'");
    }
    if (used != item.size()) throw UsageError("malformed integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace silt::cli
