// Copyright 2026 The IQAE Authors
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


#include <CLI11.hpp>

#include <exception>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "iqae/config.hpp"
#include "iqae/error.hpp"
#include "iqae/runner.hpp"

namespace {

enum Exit { kOk = 0, kConfigError = 1, kNumericalError = 2 };

iqae::RunConfig load(const std::string& path, const std::vector<std::string>& overrides) {
  iqae::RawConfig raw = iqae::load_config(path);
  for (const auto& o : overrides) iqae::apply_override(raw, o);
  return iqae::validate_config(raw);
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const iqae::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative moment-expansion ground-state solver"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Run config file")->required();
    sub->add_option("--override", overrides, "section.key=value, may be repeated");
  };
  CLI::App* run = app.add_subcommand("run", "Execute the configured mode");
  CLI::App* bench = app.add_subcommand("bench", "Execute a bench-mode config");
  CLI::App* validate = app.add_subcommand("validate", "Check a config without running it");
  add_common(run);
  add_common(bench);
  add_common(validate);

  CLI11_PARSE(app, argc, argv);

  return guarded([&] {
    const iqae::RunConfig cfg = load(config_path, overrides);
    if (validate->parsed()) {
      std::cout << "config ok: mode " << cfg.mode.kind << "\n";
      return int{kOk};
    }
    if (bench->parsed() && cfg.mode.kind != "bench") {
      throw iqae::ConfigError("mode.kind must be \"bench\" for the bench subcommand");
    }
    const iqae::RunResult result = iqae::run(cfg);
    std::cout << result.summary << " -> " << cfg.output.path << "\n";
    return int{kOk};
  });
}
