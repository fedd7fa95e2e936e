#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "silt/csv.hpp"

namespace CLI {
class App;
}

namespace silt::cli {

struct Context {
  std::uint64_t seed = 1;
  int workers = 0;
};

class Command {
 public:
  virtual ~Command() = default;
  virtual std::string name() const = 0;
  virtual std::string description() const = 0;
  virtual void add_options(CLI::App& app) = 0;
  /// Writes the column header, the rows and any "#" footer lines.
  virtual void run(const Context& ctx, CsvWriter& csv) = 0;
};

std::vector<std::unique_ptr<Command>> make_commands();

}  // namespace silt::cli
