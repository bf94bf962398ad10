#include "vmsched/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vmsched/errors.hpp"

namespace vmsched {

using nlohmann::json;

namespace {

// Contention units per running job of each default class. Mixes whose summed
// load stays within what the node absorbs run at the base coefficient. Just
// past that knee sits a shallow tier (two reconstruction jobs plus two
// simulation jobs) that erodes deadlines slowly; mixes dominated by three or
// four reconstruction jobs jump to a coefficient that dooms every resident
// job within hours. Removing a single job from any surcharged mix brings it
// back under the knee, which is what gives a termination policy its leverage.
constexpr double kBaseDynamicCoefficient = 0.02;
constexpr double kUnitEventGeneration = 0.10;
constexpr double kUnitSimulation = 0.19;
constexpr double kUnitReconstruction = 0.32;
constexpr double kContentionKnee = 1.0;
constexpr double kContentionHotKnee = 1.03;
constexpr double kContentionWarmExtra = 0.05;
constexpr double kContentionJump = 0.30;
constexpr double kContentionSlope = 0.50;
constexpr double kContentionCap = 0.36;
constexpr int kTableMaxJobs = 4;

double round4(double value) {
    return std::round(value * 10000.0) / 10000.0;
}

void check_keys(const json& object, std::initializer_list<const char*> allowed,
                const std::string& section) {
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (const char* name : allowed) {
            if (key == name) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("config: unknown key '" + key + "' in " + section);
        }
    }
}

OverheadMode overhead_mode_from(const std::string& text) {
    if (text == "off") return OverheadMode::Off;
    if (text == "static") return OverheadMode::Static;
    if (text == "dynamic") return OverheadMode::Dynamic;
    throw ConfigError("config: overhead.mode must be off|static|dynamic, got '" + text + "'");
}

std::string to_string(OverheadMode mode) {
    switch (mode) {
    case OverheadMode::Off: return "off";
    case OverheadMode::Static: return "static";
    case OverheadMode::Dynamic: return "dynamic";
    }
    return "off";
}

PolicyKind policy_kind_from(const std::string& text) {
    if (text == "none") return PolicyKind::None;
    if (text == "fixed") return PolicyKind::Fixed;
    if (text == "adaptive") return PolicyKind::Adaptive;
    if (text == "statistical") return PolicyKind::Statistical;
    throw ConfigError("config: policy.kind must be none|fixed|adaptive|statistical, got '" +
                      text + "'");
}

std::string to_string(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::None: return "none";
    case PolicyKind::Fixed: return "fixed";
    case PolicyKind::Adaptive: return "adaptive";
    case PolicyKind::Statistical: return "statistical";
    }
    return "none";
}

MissDefinition miss_definition_from(const std::string& text) {
    if (text == "late_and_terminated") return MissDefinition::LateAndTerminated;
    if (text == "late_only") return MissDefinition::LateOnly;
    if (text == "terminated_only") return MissDefinition::TerminatedOnly;
    throw ConfigError(
        "config: miss_definition must be late_and_terminated|late_only|terminated_only, got '" +
        text + "'");
}

std::string to_string(MissDefinition definition) {
    switch (definition) {
    case MissDefinition::LateAndTerminated: return "late_and_terminated";
    case MissDefinition::LateOnly: return "late_only";
    case MissDefinition::TerminatedOnly: return "terminated_only";
    }
    return "late_and_terminated";
}

void parse_node(const json& object, NodeConfig& node) {
    check_keys(object, {"cpu_cores", "memory_gb"}, "node");
    node.cpu_cores = object.value("cpu_cores", node.cpu_cores);
    node.memory_gb = object.value("memory_gb", node.memory_gb);
}

void parse_workload(const json& object, WorkloadConfig& workload) {
    check_keys(object, {"classes", "buffer_fraction", "total_hours"}, "workload");
    workload.buffer_fraction = object.value("buffer_fraction", workload.buffer_fraction);
    workload.total_hours = object.value("total_hours", workload.total_hours);
    if (object.contains("classes")) {
        workload.classes.clear();
        for (const auto& entry : object.at("classes")) {
            check_keys(entry,
                       {"name", "duration_hours", "cpu_demand", "mem_demand_gb", "mix_weight"},
                       "workload.classes[]");
            JobClass cls;
            cls.name = entry.at("name").get<std::string>();
            const auto& range = entry.at("duration_hours");
            if (!range.is_array() || range.size() != 2) {
                throw ConfigError("config: duration_hours must be [min, max] for class '" +
                                  cls.name + "'");
            }
            cls.duration_min_h = range[0].get<double>();
            cls.duration_max_h = range[1].get<double>();
            cls.cpu_demand = entry.value("cpu_demand", 1);
            cls.mem_demand_gb = entry.at("mem_demand_gb").get<double>();
            cls.mix_weight = entry.at("mix_weight").get<double>();
            workload.classes.push_back(std::move(cls));
        }
    }
}

void parse_overhead(const json& object, OverheadModel& overhead) {
    check_keys(object, {"mode", "base_coefficient", "contention_table"}, "overhead");
    if (object.contains("mode")) {
        overhead.mode = overhead_mode_from(object.at("mode").get<std::string>());
    }
    overhead.base_coefficient = object.value("base_coefficient", overhead.base_coefficient);
    if (object.contains("contention_table")) {
        overhead.contention_table.clear();
        for (const auto& row : object.at("contention_table")) {
            check_keys(row, {"mix", "extra"}, "overhead.contention_table[]");
            ClassMix mix;
            for (const auto& [name, count] : row.at("mix").items()) {
                mix[name] = count.get<int>();
            }
            overhead.contention_table[mix] = row.at("extra").get<double>();
        }
    }
}

void parse_policy(const json& object, PolicyConfig& policy) {
    check_keys(object,
               {"kind", "initial_threshold", "threshold_min", "threshold_max", "delta_step",
                "alpha", "target_failure_rate", "target_probability", "min_samples",
                "bin_width", "refresh_period"},
               "policy");
    if (object.contains("kind")) {
        policy.kind = policy_kind_from(object.at("kind").get<std::string>());
    }
    policy.initial_threshold = object.value("initial_threshold", policy.initial_threshold);
    policy.threshold_min = object.value("threshold_min", policy.threshold_min);
    policy.threshold_max = object.value("threshold_max", policy.threshold_max);
    policy.delta_step = object.value("delta_step", policy.delta_step);
    policy.alpha = object.value("alpha", policy.alpha);
    policy.target_failure_rate = object.value("target_failure_rate", policy.target_failure_rate);
    policy.target_probability = object.value("target_probability", policy.target_probability);
    policy.min_samples = object.value("min_samples", policy.min_samples);
    policy.bin_width = object.value("bin_width", policy.bin_width);
    policy.refresh_period = object.value("refresh_period", policy.refresh_period);
}

} // namespace

void NodeConfig::validate() const {
    if (cpu_cores < 1) {
        throw ConfigError("node: cpu_cores must be >= 1");
    }
    if (!(memory_gb > 0.0)) {
        throw ConfigError("node: memory_gb must be > 0");
    }
}

void ScenarioConfig::validate() const {
    node.validate();
    workload.validate();
    overhead.validate();
    policy.validate();
    clock.validate();
    for (const auto& cls : workload.classes) {
        if (cls.cpu_demand > node.cpu_cores) {
            throw ConfigError("scenario: class '" + cls.name + "' demands " +
                              std::to_string(cls.cpu_demand) + " cores but the node has " +
                              std::to_string(node.cpu_cores));
        }
        if (cls.mem_demand_gb > node.memory_gb) {
            throw ConfigError("scenario: class '" + cls.name + "' does not fit node memory");
        }
    }
}

std::map<ClassMix, double> default_contention_table() {
    const std::array<std::pair<std::string, double>, 3> units = {{
        {"EventGeneration", kUnitEventGeneration},
        {"Simulation", kUnitSimulation},
        {"Reconstruction", kUnitReconstruction},
    }};

    std::map<ClassMix, double> table;
    for (int eg = 0; eg <= kTableMaxJobs; ++eg) {
        for (int sim = 0; sim + eg <= kTableMaxJobs; ++sim) {
            for (int rec = 0; rec + sim + eg <= kTableMaxJobs; ++rec) {
                if (eg + sim + rec == 0) {
                    continue;
                }
                const double load = eg * units[0].second + sim * units[1].second +
                                    rec * units[2].second;
                if (load <= kContentionKnee) {
                    continue;
                }
                const double extra =
                    load <= kContentionHotKnee
                        ? kContentionWarmExtra
                        : round4(std::min(kContentionJump +
                                              (load - kContentionHotKnee) * kContentionSlope,
                                          kContentionCap));
                ClassMix mix;
                if (eg > 0) mix[units[0].first] = eg;
                if (sim > 0) mix[units[1].first] = sim;
                if (rec > 0) mix[units[2].first] = rec;
                table[mix] = extra;
            }
        }
    }
    return table;
}

ScenarioConfig default_scenario() {
    ScenarioConfig config;
    config.name = "default";
    config.seed = 42;
    config.node = NodeConfig{4, 8.0};
    config.workload = default_workload();
    config.overhead.mode = OverheadMode::Dynamic;
    config.overhead.base_coefficient = kBaseDynamicCoefficient;
    config.overhead.contention_table = default_contention_table();
    config.policy.kind = PolicyKind::Adaptive;
    config.clock.tick_h = 0.1;
    return config;
}

ScenarioConfig parse_scenario(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& error) {
        throw ConfigError(std::string("config: invalid JSON: ") + error.what());
    }
    check_keys(root,
               {"name", "seed", "node", "workload", "overhead", "policy", "clock",
                "miss_definition"},
               "scenario");

    ScenarioConfig config = default_scenario();
    config.name = root.value("name", config.name);
    config.seed = root.value("seed", config.seed);
    if (root.contains("node")) {
        parse_node(root.at("node"), config.node);
    }
    if (root.contains("workload")) {
        parse_workload(root.at("workload"), config.workload);
    }
    if (root.contains("overhead")) {
        parse_overhead(root.at("overhead"), config.overhead);
    }
    if (root.contains("policy")) {
        parse_policy(root.at("policy"), config.policy);
    }
    if (root.contains("clock")) {
        check_keys(root.at("clock"), {"tick_hours"}, "clock");
        config.clock.tick_h = root.at("clock").value("tick_hours", config.clock.tick_h);
    }
    if (root.contains("miss_definition")) {
        config.miss_definition =
            miss_definition_from(root.at("miss_definition").get<std::string>());
    }
    config.validate();
    return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
    std::ifstream input(file);
    if (!input) {
        throw IoError("cannot open scenario file: " + file.string());
    }
    std::ostringstream buffer;
    buffer << input.rdbuf();
    try {
        return parse_scenario(buffer.str());
    } catch (const ConfigError& error) {
        throw ConfigError(file.string() + ": " + error.what());
    }
}

std::string scenario_to_json(const ScenarioConfig& config) {
    json root;
    root["name"] = config.name;
    root["seed"] = config.seed;
    root["node"] = {{"cpu_cores", config.node.cpu_cores}, {"memory_gb", config.node.memory_gb}};

    json classes = json::array();
    for (const auto& cls : config.workload.classes) {
        classes.push_back({{"name", cls.name},
                           {"duration_hours", {cls.duration_min_h, cls.duration_max_h}},
                           {"cpu_demand", cls.cpu_demand},
                           {"mem_demand_gb", cls.mem_demand_gb},
                           {"mix_weight", cls.mix_weight}});
    }
    root["workload"] = {{"classes", classes},
                        {"buffer_fraction", config.workload.buffer_fraction},
                        {"total_hours", config.workload.total_hours}};

    json table = json::array();
    for (const auto& [mix, extra] : config.overhead.contention_table) {
        json mix_object = json::object();
        for (const auto& [name, count] : mix) {
            mix_object[name] = count;
        }
        table.push_back({{"mix", mix_object}, {"extra", extra}});
    }
    root["overhead"] = {{"mode", to_string(config.overhead.mode)},
                        {"base_coefficient", config.overhead.base_coefficient},
                        {"contention_table", table}};

    root["policy"] = {{"kind", to_string(config.policy.kind)},
                      {"initial_threshold", config.policy.initial_threshold},
                      {"threshold_min", config.policy.threshold_min},
                      {"threshold_max", config.policy.threshold_max},
                      {"delta_step", config.policy.delta_step},
                      {"alpha", config.policy.alpha},
                      {"target_failure_rate", config.policy.target_failure_rate},
                      {"target_probability", config.policy.target_probability},
                      {"min_samples", config.policy.min_samples},
                      {"bin_width", config.policy.bin_width},
                      {"refresh_period", config.policy.refresh_period}};

    root["clock"] = {{"tick_hours", config.clock.tick_h}};
    root["miss_definition"] = to_string(config.miss_definition);
    return root.dump(2) + "\n";
}

} // namespace vmsched
