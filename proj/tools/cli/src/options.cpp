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

#include "options.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "staleness/format.hpp"

namespace staleness::cli {
namespace {

bool is_list(Kind kind) { return kind == Kind::kNumberList || kind == Kind::kTextList; }

void check_value(const OptionSpec& spec, const std::string& item) {
  try {
    if (spec.kind == Kind::kNumber || spec.kind == Kind::kNumberList) {
      (void)parse_double(item);
    } else if (spec.kind == Kind::kInteger) {
      (void)parse_long(item);
    }
  } catch (const std::exception&) {
    throw UsageError("--" + spec.name + ": '" + item + "' is not a valid " +
                     (spec.kind == Kind::kInteger ? "integer" : "number"));
  }
}

std::vector<std::string> json_items(const std::string& key, const nlohmann::json& v) {
  std::vector<std::string> items;
  auto scalar = [&](const nlohmann::json& s) {
    if (s.is_string()) {
      items.push_back(s.get<std::string>());
    } else if (s.is_number_integer()) {
      items.push_back(std::to_string(s.get<long long>()));
    } else if (s.is_number()) {
      items.push_back(format_double(s.get<double>()));
    } else if (s.is_boolean()) {
      items.push_back(s.get<bool>() ? "true" : "false");
    } else {
      throw UsageError("config key '" + key + "': unsupported value " + s.dump());
    }
  };
  if (v.is_array()) {
    for (const auto& e : v) scalar(e);
  } else {
    scalar(v);
  }
  return items;
}

nlohmann::json load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  auto j = nlohmann::json::parse(buf.str(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw UsageError("config file '" + path + "' is not a JSON object");
  }
  // A run manifest carries its configuration under "config".
  if (j.contains("command") && j.contains("config")) {
    if (j["command"] != command) {
      throw UsageError("manifest '" + path + "' was written by '" +
                       j["command"].get<std::string>() + "', not '" + command + "'");
    }
    j = j["config"];
    if (!j.is_object()) throw UsageError("manifest '" + path + "': config is not an object");
  }
  return j;
}

}  // namespace

bool Resolved::given(const std::string& name) const {
  const auto it = values_.find(name);
  return it != values_.end() && it->second.source >= Source::kConfig;
}

Source Resolved::source(const std::string& name) const { return at(name).source; }

const Resolved::Value& Resolved::at(const std::string& name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw UsageError("missing required option --" + name);
  return it->second;
}

const OptionSpec& Resolved::spec(const std::string& name) const {
  for (const auto& s : specs_) {
    if (s.name == name) return s;
  }
  throw std::logic_error("undeclared option " + name);
}

double Resolved::number(const std::string& name) const {
  const auto& v = at(name);
  if (v.items.size() != 1) throw UsageError("--" + name + " takes exactly one value");
  return parse_double(v.items.front());
}

long Resolved::integer(const std::string& name) const {
  const auto& v = at(name);
  if (v.items.size() != 1) throw UsageError("--" + name + " takes exactly one value");
  return parse_long(v.items.front());
}

std::string Resolved::text(const std::string& name) const {
  const auto& v = at(name);
  if (v.items.size() != 1) throw UsageError("--" + name + " takes exactly one value");
  return v.items.front();
}

std::vector<double> Resolved::numbers(const std::string& name) const {
  std::vector<double> out;
  for (const auto& item : at(name).items) out.push_back(parse_double(item));
  return out;
}

const std::vector<std::string>& Resolved::texts(const std::string& name) const {
  return at(name).items;
}

double Resolved::number_or(const std::string& name, double fallback) const {
  return has(name) ? number(name) : fallback;
}

std::optional<long> Resolved::integer_if(const std::string& name) const {
  if (!has(name)) return std::nullopt;
  return integer(name);
}

std::string Resolved::text_or(const std::string& name, const std::string& fallback) const {
  return has(name) ? text(name) : fallback;
}

nlohmann::ordered_json Resolved::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& s : specs_) {
    const auto it = values_.find(s.name);
    if (it == values_.end()) continue;
    auto one = [&](const std::string& item) -> nlohmann::ordered_json {
      switch (s.kind) {
        case Kind::kNumber:
        case Kind::kNumberList: return parse_double(item);
        case Kind::kInteger: return parse_long(item);
        default: return item;
      }
    };
    if (is_list(s.kind)) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& item : it->second.items) arr.push_back(one(item));
      j[s.name] = std::move(arr);
    } else {
      j[s.name] = one(it->second.items.front());
    }
  }
  return j;
}

CommandOptions::CommandOptions(CLI::App& app, std::vector<OptionSpec> specs)
    : app_(app), specs_(std::move(specs)) {
  for (const auto& s : specs_) {
    auto& slot = raw_[s.name];
    std::string help = s.help;
    if (!s.defaults.empty()) {
      std::string joined;
      for (const auto& d : s.defaults) joined += (joined.empty() ? "" : ",") + d;
      help += " (default " + joined + ")";
    }
    CLI::Option* opt = app.add_option(s.positional ? s.name : "--" + s.name, slot, help);
    opt->allow_extra_args(false);
    opt->expected(1);
    opt->type_name(s.kind == Kind::kInteger                                   ? "INT"
                   : s.kind == Kind::kNumber || s.kind == Kind::kNumberList ? "NUMBER"
                                                                             : "TEXT");
    if (s.kind == Kind::kNumberList) opt->delimiter(',');
    opt->multi_option_policy(is_list(s.kind) ? CLI::MultiOptionPolicy::TakeAll
                                             : CLI::MultiOptionPolicy::Throw);
  }
  app.add_option("--config", config_path_,
                 "JSON file with option values (keys are option names); a run manifest "
                 "is accepted and its recorded configuration reused");
}

Resolved CommandOptions::resolve(const std::map<std::string, std::string>& env_defaults) const {
  Resolved r;
  r.set_specs(specs_);
  nlohmann::json config = nlohmann::json::object();
  if (!config_path_.empty()) config = load_config(config_path_, app_.get_name());
  for (const auto& [key, value] : config.items()) {
    const bool known = std::any_of(specs_.begin(), specs_.end(),
                                   [&](const OptionSpec& s) { return s.name == key; });
    if (!known) throw UsageError("config key '" + key + "' is not an option of " + app_.get_name());
  }

  for (const auto& s : specs_) {
    Resolved::Value v;
    const auto& flag = raw_.at(s.name);
    if (!flag.empty()) {
      v = {flag, Source::kFlag};
    } else if (config.contains(s.name) && !config[s.name].is_null()) {
      v = {json_items(s.name, config[s.name]), Source::kConfig};
    } else if (const auto e = env_defaults.find(s.name); e != env_defaults.end()) {
      v = {{e->second}, Source::kEnv};
    } else if (!s.defaults.empty()) {
      v = {s.defaults, Source::kDefault};
    } else {
      continue;
    }
    if (v.items.empty()) continue;
    if (!is_list(s.kind) && v.items.size() != 1) {
      throw UsageError("--" + s.name + " takes exactly one value");
    }
    for (const auto& item : v.items) check_value(s, item);
    r.set(s.name, std::move(v));
  }
  return r;
}

}  // namespace staleness::cli
