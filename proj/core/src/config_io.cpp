#include "aloha/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aloha/errors.hpp"

namespace aloha {
namespace {

using nlohmann::json;

double require_number(const json& obj, const std::string& key,
                      const std::string& where) {
  if (!obj.contains(key))
    throw ValidationError("config: missing field \"" + key + "\" " + where);
  const json& v = obj.at(key);
  if (!v.is_number())
    throw ValidationError("config: field \"" + key + "\" " + where +
                          " must be a number");
  return v.get<double>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok)
      throw ValidationError("config: unknown field \"" + it.key() + "\" " +
                            where);
  }
}

}  // namespace

NetworkConfig config_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: JSON parse error: ") + e.what());
  }
  if (!root.is_object())
    throw ValidationError("config: top level must be a JSON object");
  reject_unknown(root, {"alpha", "classes"}, "at top level");

  NetworkConfig config;
  config.alpha = require_number(root, "alpha", "at top level");

  if (!root.contains("classes") || !root.at("classes").is_array())
    throw ValidationError("config: \"classes\" must be an array");
  const json& classes = root.at("classes");
  if (classes.empty())
    throw ValidationError("config: \"classes\" must be non-empty");

  for (std::size_t n = 0; n < classes.size(); ++n) {
    const json& jc = classes[n];
    const std::string where = "in classes[" + std::to_string(n) + "]";
    if (!jc.is_object())
      throw ValidationError("config: classes[" + std::to_string(n) +
                            "] must be an object");
    reject_unknown(jc,
                   {"lambda", "power", "mean_link_distance", "sir_threshold",
                    "arrival_rate", "access_prob"},
                   where);
    TrafficClass c;
    c.lambda = require_number(jc, "lambda", where);
    c.power = require_number(jc, "power", where);
    c.mean_link_distance = require_number(jc, "mean_link_distance", where);
    c.sir_threshold = require_number(jc, "sir_threshold", where);
    c.arrival_rate = require_number(jc, "arrival_rate", where);
    c.access_prob = require_number(jc, "access_prob", where);
    config.classes.push_back(c);
  }

  // Range validation in the loosest mode; commands that need stricter modes
  // (e.g. all access probabilities equal to 1) re-validate for their mode.
  return validate_config(std::move(config), AnalysisMode::SingleClass);
}

NetworkConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw ValidationError("config: cannot open file " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

std::string config_to_json(const NetworkConfig& config) {
  json root;
  root["alpha"] = config.alpha;
  root["classes"] = json::array();
  for (const TrafficClass& c : config.classes) {
    root["classes"].push_back({{"lambda", c.lambda},
                               {"power", c.power},
                               {"mean_link_distance", c.mean_link_distance},
                               {"sir_threshold", c.sir_threshold},
                               {"arrival_rate", c.arrival_rate},
                               {"access_prob", c.access_prob}});
  }
  return root.dump(2) + "\n";
}

}  // namespace aloha
