// Copyright 2026 The qhomog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qhomog: run the homogenizer, analysis, circuit and reservoir experiments and
// write their CSV/SVG artifacts plus a manifest that reproduces the run.

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qhomog/cli/experiments.hpp"

namespace {

using namespace qhomog;

struct Common {
  std::string config_path;
  std::string output_dir;
  bool force = false;
  bool plot = false;
  std::size_t threads = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "flat key = value config file; flags override it");
  sub->add_option("--output,-o", c.output_dir, "output directory (default results/<experiment>)");
  sub->add_flag("--force", c.force, "overwrite existing output files");
  sub->add_flag("--plot", c.plot, "also write an SVG line plot per result series");
  sub->add_option("--threads", c.threads, "worker threads for sweeps and searches (results do not depend on it)")
      ->check(CLI::PositiveNumber);
}

int execute(const std::string& experiment, const Common& c, const std::vector<cli::RawSetting>& flags) {
  const auto file = c.config_path.empty() ? std::vector<cli::RawSetting>{} : cli::load_config_file(c.config_path);
  const auto cfg = cli::resolve_config(experiment, file, flags);
  const auto result = cli::run_experiment(cfg, {c.threads, c.plot});
  const std::filesystem::path dir = c.output_dir.empty() ? std::filesystem::path("results") / experiment : std::filesystem::path(c.output_dir);
  for (const auto& p : cli::write_artifacts(dir, result, c.force)) std::printf("wrote %s\n", p.string().c_str());
  for (const auto& note : result.notes) std::printf("%s\n", note.c_str());
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qhomog: quantum homogenizer experiments"};
  app.set_version_flag("--version", std::string(cli::kVersion));
  app.require_subcommand(1);

  std::map<std::string, Common> common;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;

  for (const auto& name : cli::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    add_common(sub, common[name]);
    for (const auto& key : cli::schema(name)) {
      auto& slot = values[name][key.name];
      std::string help = key.help + " [default: " + key.default_value + "]";
      if (!key.choices.empty()) {
        help += " {";
        for (std::size_t i = 0; i < key.choices.size(); ++i) help += (i ? "," : "") + key.choices[i];
        help += "}";
      }
      auto* opt = sub->add_option("--" + key.name, slot, help);
      if (key.kind == cli::Kind::Bool) opt->expected(0, 1);  // bare flag means true
      options[name][key.name] = opt;
    }
  }
  Common run_common;
  auto* run = app.add_subcommand("run", "rerun an experiment from a config or manifest with an `experiment` line");
  add_common(run, run_common);
  run->get_option("--config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;  // --help and --version exit 0
  }

  try {
    if (run->parsed()) {
      const auto file = cli::load_config_file(run_common.config_path);
      const auto line = cli::experiment_line(file);
      if (!line) throw ConfigError(run_common.config_path + ": no 'experiment = ...' line");
      return execute(line->value, run_common, {});
    }
    for (const auto& name : cli::experiment_names()) {
      auto* sub = app.get_subcommand(name);
      if (!sub->parsed()) continue;
      std::vector<cli::RawSetting> flags;
      for (const auto& key : cli::schema(name)) {
        auto* opt = options[name][key.name];
        if (opt->count() == 0) continue;
        std::string v = values[name][key.name];
        if (key.kind == cli::Kind::Bool && v.empty()) v = "true";
        flags.push_back({key.name, v, "--" + key.name});
      }
      return execute(name, common[name], flags);
    }
  } catch (const InvariantError& e) {
    std::fprintf(stderr, "qhomog: invariant violated: %s\n", e.what());
    return cli::kExitInvariant;
  } catch (const SingularSystemError& e) {
    std::fprintf(stderr, "qhomog: numerical failure: %s\n", e.what());
    return cli::kExitInvariant;
  } catch (const Error& e) {
    std::fprintf(stderr, "qhomog: error: %s\n", e.what());
    return cli::kExitConfig;
  }
  return cli::kExitConfig;
}
