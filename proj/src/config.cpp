#include "climctl/config.hpp"

#include <fstream>

#include <json.hpp>

namespace climctl {

namespace {

using nlohmann::json;

json to_json_tree(const RunConfig& cfg) {
    const ScenarioConfig& s = cfg.scenario;
    return json{
        {"model",
         {{"c_a", s.params.c_a},
          {"c_s", s.params.c_s},
          {"q", s.params.q},
          {"delta", s.params.delta},
          {"a", s.params.a},
          {"eps", s.params.eps},
          {"alpha_s", s.params.alpha_s},
          {"alpha_a", s.params.alpha_a},
          {"h", s.params.h}}},
        {"region",
         {{"t_a_min", s.region.t_a_min},
          {"t_a_max", s.region.t_a_max},
          {"t_s_min", s.region.t_s_min},
          {"t_s_max", s.region.t_s_max}}},
        {"grid", {{"n_a", s.n_a}, {"n_s", s.n_s}}},
        {"control", {{"u_max", s.u_max}, {"segments", s.segments}}},
        {"step", {{"tau_s", s.step.tau}, {"substeps", s.step.substeps}}},
        {"initial", {{"t_a", s.initial.t_a}, {"t_s", s.initial.t_s}}},
        {"target", {{"t_a", s.target_state.t_a}, {"t_s", s.target_state.t_s}}},
        {"target_radius", s.target_radius},
        {"max_steps", s.max_steps},
        {"hold", s.hold},
        {"threads", s.n_threads},
        {"out_dir", cfg.out_dir.string()},
    };
}

void merge_strict(json& base, const json& overlay, const std::string& path) {
    if (!overlay.is_object()) {
        throw ConfigError("config: expected an object at '" + path + "'");
    }
    for (auto it = overlay.begin(); it != overlay.end(); ++it) {
        const std::string key_path = path.empty() ? it.key() : path + "." + it.key();
        if (!base.contains(it.key())) {
            throw ConfigError("config: unknown key '" + key_path + "'");
        }
        json& slot = base[it.key()];
        if (slot.is_object()) {
            merge_strict(slot, it.value(), key_path);
        } else {
            if (it.value().is_object() || it.value().is_array()) {
                throw ConfigError("config: scalar expected at '" + key_path + "'");
            }
            slot = it.value();
        }
    }
}

double num(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError("config: number expected at '" + path + "'");
    return j.get<double>();
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) {
        throw ConfigError("config: integer expected at '" + path + "'");
    }
    return j.get<int>();
}

RunConfig from_json_tree(const json& t) {
    RunConfig cfg;
    ScenarioConfig& s = cfg.scenario;
    const json& m = t.at("model");
    s.params.c_a = num(m.at("c_a"), "model.c_a");
    s.params.c_s = num(m.at("c_s"), "model.c_s");
    s.params.q = num(m.at("q"), "model.q");
    s.params.delta = num(m.at("delta"), "model.delta");
    s.params.a = num(m.at("a"), "model.a");
    s.params.eps = num(m.at("eps"), "model.eps");
    s.params.alpha_s = num(m.at("alpha_s"), "model.alpha_s");
    s.params.alpha_a = num(m.at("alpha_a"), "model.alpha_a");
    s.params.h = num(m.at("h"), "model.h");
    const json& r = t.at("region");
    s.region = {num(r.at("t_a_min"), "region.t_a_min"), num(r.at("t_a_max"), "region.t_a_max"),
                num(r.at("t_s_min"), "region.t_s_min"), num(r.at("t_s_max"), "region.t_s_max")};
    s.n_a = integer(t.at("grid").at("n_a"), "grid.n_a");
    s.n_s = integer(t.at("grid").at("n_s"), "grid.n_s");
    s.u_max = num(t.at("control").at("u_max"), "control.u_max");
    s.segments = integer(t.at("control").at("segments"), "control.segments");
    s.step.tau = num(t.at("step").at("tau_s"), "step.tau_s");
    s.step.substeps = integer(t.at("step").at("substeps"), "step.substeps");
    s.initial = {num(t.at("initial").at("t_a"), "initial.t_a"),
                 num(t.at("initial").at("t_s"), "initial.t_s")};
    s.target_state = {num(t.at("target").at("t_a"), "target.t_a"),
                      num(t.at("target").at("t_s"), "target.t_s")};
    s.target_radius = integer(t.at("target_radius"), "target_radius");
    s.max_steps = integer(t.at("max_steps"), "max_steps");
    s.hold = integer(t.at("hold"), "hold");
    s.n_threads = integer(t.at("threads"), "threads");
    if (!t.at("out_dir").is_string()) throw ConfigError("config: string expected at 'out_dir'");
    cfg.out_dir = t.at("out_dir").get<std::string>();
    return cfg;
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path, const ScenarioConfig& base) {
    RunConfig defaults;
    defaults.scenario = base;
    json tree = to_json_tree(defaults);
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
        json overlay;
        try {
            overlay = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("config: " + path.string() + ": " + e.what());
        }
        merge_strict(tree, overlay, "");
    }
    return from_json_tree(tree);
}

void apply_override(RunConfig& cfg, const std::string& key_value) {
    const size_t eq = key_value.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override: expected key=value, got '" + key_value + "'");
    }
    const std::string key = key_value.substr(0, eq);
    const std::string value = key_value.substr(eq + 1);

    json tree = to_json_tree(cfg);
    json* node = &tree;
    size_t pos = 0;
    for (;;) {
        const size_t dot = key.find('.', pos);
        const std::string part = key.substr(pos, dot - pos);
        if (!node->contains(part)) {
            throw ConfigError("override: unknown key '" + key + "'");
        }
        node = &(*node)[part];
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    if (node->is_object()) {
        throw ConfigError("override: '" + key + "' is not a scalar key");
    }
    if (node->is_string()) {
        *node = value;
    } else {
        try {
            *node = json::parse(value);
        } catch (const json::parse_error&) {
            throw ConfigError("override: cannot parse value '" + value + "' for '" + key + "'");
        }
    }
    cfg = from_json_tree(tree);
}

void validate(const RunConfig& cfg) {
    const ScenarioConfig& s = cfg.scenario;
    try {
        s.params.validate();
        Region reg = s.region;
        reg.validate();
        CellGrid grid{s.region, s.n_a, s.n_s};
        grid.validate();
        s.step.validate();
        control_levels(s.u_max, s.segments);
        require_plausible(s.initial, "initial");
        require_plausible(s.target_state, "target");
    } catch (const ModelError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (s.target_radius < 0) throw ConfigError("config: target_radius must be >= 0");
    if (s.max_steps < 0) throw ConfigError("config: max_steps must be >= 0");
    if (s.hold < 0) throw ConfigError("config: hold must be >= 0");
    if (s.n_threads < 1) throw ConfigError("config: threads must be >= 1");
}

std::string config_to_json(const RunConfig& cfg) {
    return to_json_tree(cfg).dump(2);
}

}  // namespace climctl
