#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace silt::cli {

/// Bad command line, config file or parameter value; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat "key = value" file; '#' starts a comment, blank lines are ignored.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Appends "--key value" for every config entry whose option was not given
/// on the command line, so flags always win over the file. Unknown keys are
/// a UsageError.
std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::map<std::string, std::string>& config, CLI::App& command);

/// FNV-1a over "name=value" lines of the resolved options of `command`,
/// skipping the ones that do not change results (out, config, workers, seed).
std::uint64_t config_hash(const CLI::App& command);

/// Parses "2^-3", "0.25", "1e-3".
double parse_number(const std::string& text);

/// Sweep syntax: "" (empty), comma list "0.1,0.2", or power range
/// "B^E1..B^E2" stepping the integer exponent by one toward E2.
std::vector<double> parse_sweep(const std::string& text);

/// Comma list of non-negative integers.
std::vector<int> parse_int_list(const std::string& text);

}  // namespace silt::cli
