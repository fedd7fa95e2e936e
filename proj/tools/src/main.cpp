#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "options.hpp"
#include "silt/errors.hpp"

namespace {

struct Common {
  std::string out = ".";
  std::string config;
  std::uint64_t seed = 1;
  int workers = 0;
};

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace silt;
  using namespace silt::cli;

  CLI::App app{"Self-intersection local time toolkit", "silt"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(SILT_VERSION));
  app.require_subcommand(1);

  auto commands = make_commands();
  std::vector<CLI::App*> subs;
  Common common;
  for (auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd->name(), cmd->description());
    sub->add_option("--out", common.out, "Output directory; writes <out>/<command>.csv");
    sub->add_option("--seed", common.seed, "Master seed");
    sub->add_option("--config", common.config, "key = value file; command-line flags take precedence");
    sub->add_option("--workers", common.workers, "Worker threads (0: SILT_WORKERS or hardware)");
    cmd->add_options(*sub);
    subs.push_back(sub);
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const std::string cfg = config_path(args);
    if (!cfg.empty()) {
      auto it = std::find_if(args.begin(), args.end(), [&](const std::string& a) {
        return std::any_of(subs.begin(), subs.end(), [&](CLI::App* s) { return s->get_name() == a; });
      });
      if (it == args.end()) throw UsageError("--config needs a command");
      CLI::App* sub = app.get_subcommand(*it);
      std::vector<std::string> head(args.begin(), it + 1);
      std::vector<std::string> tail(it + 1, args.end());
      tail = merge_config(tail, read_config_file(cfg), *sub);
      head.insert(head.end(), tail.begin(), tail.end());
      args = std::move(head);
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "silt: " << e.what() << "\n";
    return 2;
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    Command& cmd = *commands[i];
    std::ostringstream buffer;
    try {
      if (common.workers < 0) throw UsageError("workers must be >= 0");
      CsvWriter csv(buffer);
      csv.comment("silt " + std::string(SILT_VERSION));
      csv.comment("command=" + cmd.name());
      csv.comment("config_hash=" + hex16(config_hash(*subs[i])));
      csv.comment("seed=" + std::to_string(common.seed));
      cmd.run(Context{common.seed, common.workers}, csv);
    } catch (const UsageError& e) {
      std::cerr << "silt " << cmd.name() << ": " << e.what() << "\n";
      return 2;
    } catch (const DomainError& e) {
      std::cerr << "silt " << cmd.name() << ": " << e.what() << "\n";
      return 2;
    } catch (const ConvergenceError& e) {
      std::cerr << "silt " << cmd.name() << ": " << e.what() << " (last residual " << e.last_residual() << ")\n";
      return 3;
    } catch (const DegenerateProposal& e) {
      std::cerr << "silt " << cmd.name() << ": " << e.what() << "\n";
      return 3;
    }

    std::error_code ec;
    std::filesystem::create_directories(common.out, ec);
    const auto file = std::filesystem::path(common.out) / (cmd.name() + ".csv");
    std::ofstream os(file, std::ios::binary);
    os << buffer.str();
    if (!os) {
      std::cerr << "silt: cannot write " << file << "\n";
      return 1;
    }
  }
  return 0;
}
