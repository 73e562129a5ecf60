#include "aquachain/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "aquachain/errors.hpp"

namespace aquachain {

namespace {

using nlohmann::json;

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  return j;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (auto k : known) found = found || key == k;
    if (!found) throw ConfigError(join(path, key), "unknown key");
  }
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

template <typename Int>
Int as_integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
  if (j.is_number_unsigned()) {
    const auto v = j.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(std::numeric_limits<Int>::max()))
      throw ConfigError(field, "out of range");
    return static_cast<Int>(v);
  }
  const auto v = j.get<std::int64_t>();
  if (v < 0 && !std::numeric_limits<Int>::is_signed) throw ConfigError(field, "must be >= 0");
  if (v > static_cast<std::int64_t>(std::numeric_limits<Int>::max()) ||
      v < static_cast<std::int64_t>(std::numeric_limits<Int>::min()))
    throw ConfigError(field, "out of range");
  return static_cast<Int>(v);
}

Eigen::Vector3d as_vec3(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(field, "expected [x, y, z]");
  return {as_number(j[0], field), as_number(j[1], field), as_number(j[2], field)};
}

Range as_range(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(field, "expected [lo, hi]");
  return {as_number(j[0], field), as_number(j[1], field)};
}

std::string as_string(const json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError(field, "expected a string");
  return j.get<std::string>();
}

// Calls `read` with the value when `key` is present.
template <typename F>
void optional_field(const json& obj, const std::string& path, std::string_view key, F read) {
  if (const auto it = obj.find(std::string(key)); it != obj.end()) read(*it, join(path, key));
}

void read_network(const json& obj, NetworkConfig& net) {
  const std::string path = "network";
  require_object(obj, path);
  reject_unknown(obj, path,
                 {"n", "area", "bs_position", "comm_range", "initial_energy", "drift_sigma",
                  "localization_interval", "adaptive_energy", "rng_seed", "congestion_init",
                  "failure_prob_init"});
  if (!obj.contains("n")) throw ConfigError("network.n", "missing required field");
  if (!obj.contains("area")) throw ConfigError("network.area", "missing required field");
  net.n = as_integer<std::size_t>(obj["n"], "network.n");
  net.area = as_vec3(obj["area"], "network.area");
  net.bs_position = NetworkConfig::default_bs_position(net.area);
  optional_field(obj, path, "bs_position",
                 [&](const json& j, const std::string& f) { net.bs_position = as_vec3(j, f); });
  optional_field(obj, path, "comm_range",
                 [&](const json& j, const std::string& f) { net.comm_range = as_number(j, f); });
  optional_field(obj, path, "initial_energy", [&](const json& j, const std::string& f) {
    net.initial_energy = as_number(j, f);
  });
  optional_field(obj, path, "drift_sigma",
                 [&](const json& j, const std::string& f) { net.drift_sigma = as_number(j, f); });
  optional_field(obj, path, "localization_interval", [&](const json& j, const std::string& f) {
    net.localization_interval = as_integer<int>(j, f);
  });
  optional_field(obj, path, "adaptive_energy", [&](const json& j, const std::string& f) {
    net.adaptive_energy = as_number(j, f);
  });
  optional_field(obj, path, "rng_seed", [&](const json& j, const std::string& f) {
    net.rng_seed = as_integer<std::uint64_t>(j, f);
  });
  optional_field(obj, path, "congestion_init", [&](const json& j, const std::string& f) {
    net.congestion_init = as_range(j, f);
  });
  optional_field(obj, path, "failure_prob_init", [&](const json& j, const std::string& f) {
    net.failure_prob_init = as_range(j, f);
  });
}

void read_energy(const json& obj, EnergyParams& e, double comm_range) {
  const std::string path = "energy";
  require_object(obj, path);
  reject_unknown(obj, path, {"e_elec", "e_amp", "alpha", "threshold", "packet_bits"});
  optional_field(obj, path, "e_elec",
                 [&](const json& j, const std::string& f) { e.e_elec = as_number(j, f); });
  optional_field(obj, path, "e_amp",
                 [&](const json& j, const std::string& f) { e.e_amp = as_number(j, f); });
  optional_field(obj, path, "alpha",
                 [&](const json& j, const std::string& f) { e.alpha = as_number(j, f); });
  optional_field(obj, path, "packet_bits", [&](const json& j, const std::string& f) {
    e.packet_bits = as_integer<std::size_t>(j, f);
  });
  bool explicit_threshold = false;
  optional_field(obj, path, "threshold", [&](const json& j, const std::string& f) {
    e.threshold = as_number(j, f);
    explicit_threshold = true;
  });
  if (!explicit_threshold && e.packet_bits > 0)
    e.threshold = EnergyParams::default_threshold(e, comm_range);
}

void read_sim(const json& obj, SimParams& s) {
  const std::string path = "sim";
  require_object(obj, path);
  reject_unknown(obj, path, {"max_rounds", "mode", "congestion_delta", "congestion_decay"});
  optional_field(obj, path, "max_rounds", [&](const json& j, const std::string& f) {
    s.max_rounds = as_integer<std::size_t>(j, f);
  });
  optional_field(obj, path, "mode", [&](const json& j, const std::string& f) {
    try {
      s.mode = parse_routing_mode(as_string(j, f));
    } catch (const std::invalid_argument&) {
      throw ConfigError(f, "expected \"parametric\" or \"baseline\"");
    }
  });
  optional_field(obj, path, "congestion_delta", [&](const json& j, const std::string& f) {
    s.congestion_delta = as_number(j, f);
  });
  optional_field(obj, path, "congestion_decay", [&](const json& j, const std::string& f) {
    s.congestion_decay = as_number(j, f);
  });
}

void read_output(const json& obj, OutputPaths& o) {
  const std::string path = "output";
  require_object(obj, path);
  reject_unknown(obj, path, {"rounds_csv", "summary_json", "trace_json"});
  optional_field(obj, path, "rounds_csv",
                 [&](const json& j, const std::string& f) { o.rounds_csv = as_string(j, f); });
  optional_field(obj, path, "summary_json",
                 [&](const json& j, const std::string& f) { o.summary_json = as_string(j, f); });
  optional_field(obj, path, "trace_json",
                 [&](const json& j, const std::string& f) { o.trace_json = as_string(j, f); });
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  require_object(root, "");
  reject_unknown(root, "", {"network", "energy", "sim", "output"});
  if (!root.contains("network")) throw ConfigError("network.n", "missing required field");

  Scenario s;
  read_network(root["network"], s.network);
  s.network.validate();
  s.energy.threshold = EnergyParams::default_threshold(s.energy, s.network.comm_range);
  if (root.contains("energy")) read_energy(root["energy"], s.energy, s.network.comm_range);
  if (root.contains("sim")) read_sim(root["sim"], s.sim);
  if (root.contains("output")) read_output(root["output"], s.output);

  s.energy.validate();
  s.sim.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace aquachain
