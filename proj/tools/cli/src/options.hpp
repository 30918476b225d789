// Copyright 2026 The staleness-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STALENESS_CLI_OPTIONS_HPP
#define STALENESS_CLI_OPTIONS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace staleness::cli {

/// Bad flags, bad config or a bad combination of either. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { kNumber, kInteger, kText, kNumberList, kTextList };

struct OptionSpec {
  std::string name;
  Kind kind;
  std::string help;
  std::vector<std::string> defaults = {};
  bool positional = false;
};

enum class Source { kDefault, kEnv, kConfig, kFlag };

/// Option values after applying flags over config over defaults.
class Resolved {
 public:
  struct Value {
    std::vector<std::string> items;
    Source source = Source::kDefault;
  };

  bool has(const std::string& name) const { return values_.count(name) != 0; }
  bool given(const std::string& name) const;
  Source source(const std::string& name) const;

  double number(const std::string& name) const;
  long integer(const std::string& name) const;
  std::string text(const std::string& name) const;
  std::vector<double> numbers(const std::string& name) const;
  const std::vector<std::string>& texts(const std::string& name) const;

  double number_or(const std::string& name, double fallback) const;
  std::optional<long> integer_if(const std::string& name) const;
  std::string text_or(const std::string& name, const std::string& fallback) const;

  /// Typed JSON object in declaration order; absent options are left out.
  nlohmann::ordered_json to_json() const;

  void set(const std::string& name, Value value) { values_[name] = std::move(value); }
  void set_specs(std::vector<OptionSpec> specs) { specs_ = std::move(specs); }

 private:
  const Value& at(const std::string& name) const;
  const OptionSpec& spec(const std::string& name) const;

  std::vector<OptionSpec> specs_;
  std::map<std::string, Value> values_;
};

/// Declares options on a CLI11 subcommand plus a --config option, and merges
/// whatever was parsed with a JSON config and the defaults.
class CommandOptions {
 public:
  CommandOptions(CLI::App& app, std::vector<OptionSpec> specs);

  /// `env_defaults` replace built-in defaults (the seed variable).
  Resolved resolve(const std::map<std::string, std::string>& env_defaults = {}) const;

  const std::vector<OptionSpec>& specs() const noexcept { return specs_; }

 private:
  CLI::App& app_;
  std::vector<OptionSpec> specs_;
  std::map<std::string, std::vector<std::string>> raw_;
  std::string config_path_;
};

}  // namespace staleness::cli

#endif  // STALENESS_CLI_OPTIONS_HPP
