#include "qtraj/config.hpp"

#include <fstream>

#include <json.hpp>

namespace qtraj {

namespace {

using nlohmann::json;

double get_num(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number())
        throw std::invalid_argument("config key '" + key + "' must be a number");
    return j[key].get<double>();
}

ModelKind parse_model(const std::string& s) {
    if (s == "duffing_pair") return ModelKind::duffing_pair;
    if (s == "squid_pair") return ModelKind::squid_pair;
    if (s == "single_mode_test") return ModelKind::single_mode_test;
    throw std::invalid_argument("config key 'model': unknown value '" + s + "'");
}

RunMethod parse_method(const std::string& s) {
    if (s == "qsd") return RunMethod::qsd;
    if (s == "jumps") return RunMethod::jumps;
    if (s == "lindblad_oracle") return RunMethod::lindblad_oracle;
    throw std::invalid_argument("config key 'unravelling': unknown value '" + s + "'");
}

const char* model_name(ModelKind m) {
    switch (m) {
        case ModelKind::duffing_pair: return "duffing_pair";
        case ModelKind::squid_pair: return "squid_pair";
        case ModelKind::single_mode_test: return "single_mode_test";
    }
    return "?";
}

const char* method_name(RunMethod m) {
    switch (m) {
        case RunMethod::qsd: return "qsd";
        case RunMethod::jumps: return "jumps";
        case RunMethod::lindblad_oracle: return "lindblad_oracle";
    }
    return "?";
}

}  // namespace

RunConfig parse_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }

    RunConfig c;
    if (j.contains("model")) c.model = parse_model(j["model"].get<std::string>());
    if (j.contains("unravelling")) c.method = parse_method(j["unravelling"].get<std::string>());
    c.n_levels = static_cast<int>(get_num(j, "n_levels", c.n_levels));
    c.dt = get_num(j, "dt", c.dt);
    if (j.contains("t_span")) {
        if (!j["t_span"].is_array() || j["t_span"].size() != 2)
            throw std::invalid_argument("config key 't_span' must be [t0, t1]");
        c.t0 = j["t_span"][0].get<double>();
        c.t1 = j["t_span"][1].get<double>();
    }
    c.n_trajectories = static_cast<int>(get_num(j, "n_trajectories", c.n_trajectories));
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    c.record_every = static_cast<int>(get_num(j, "record_every", c.record_every));
    c.transient_fraction = get_num(j, "transient_fraction", c.transient_fraction);
    c.settle_tolerance = get_num(j, "settle_tolerance", c.settle_tolerance);
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();

    if (j.contains("squid")) {
        const json& s = j["squid"];
        SquidPhysicalParams& p = c.squid.phys;
        p.C = get_num(s, "C_farads", p.C);
        p.L = get_num(s, "L_henries", p.L);
        p.R = get_num(s, "R_ohms", p.R);
        p.I_c = get_num(s, "I_c_amperes", p.I_c);
        p.I_d = get_num(s, "I_d_amperes", p.I_d);
        p.omega_d = get_num(s, "omega_d_rad_per_s", p.omega_d);
        p.Phi_x = get_num(s, "Phi_x_webers", p.Phi_x);
        c.squid.scale_a = get_num(s, "scale_a", c.squid.scale_a);
        c.squid.scale_b = get_num(s, "scale_b", c.squid.scale_b);
        c.squid.mu = get_num(s, "mu", c.squid.mu);
    }
    if (j.contains("duffing")) {
        const json& d = j["duffing"];
        c.duffing.beta = get_num(d, "beta", c.duffing.beta);
        c.duffing.g = get_num(d, "g", c.duffing.g);
        c.duffing.gamma = get_num(d, "gamma", c.duffing.gamma);
        c.duffing.mu = get_num(d, "mu", c.duffing.mu);
    }
    if (j.contains("single_mode")) {
        const json& s = j["single_mode"];
        c.single_mode.zeta = get_num(s, "zeta", c.single_mode.zeta);
        c.single_mode.drive_amp = get_num(s, "drive_amp", c.single_mode.drive_amp);
        c.single_mode.omega = get_num(s, "omega", c.single_mode.omega);
    }
    if (j.contains("initial_state")) {
        const json& s = j["initial_state"];
        if (s.contains("type")) c.initial_state.type = s["type"].get<std::string>();
        if (s.contains("alpha"))
            for (const auto& a : s["alpha"])
                c.initial_state.alpha.emplace_back(a[0].get<double>(), a[1].get<double>());
        if (s.contains("n"))
            for (const auto& n : s["n"]) c.initial_state.fock_n.push_back(n.get<int>());
    }
    if (j.contains("sweep")) {
        for (const auto& e : j["sweep"]) {
            SweepEntry entry;
            entry.path = e.at("path").get<std::string>();
            for (const auto& v : e.at("values")) entry.values.push_back(v.get<double>());
            c.sweep.push_back(std::move(entry));
        }
    }
    return c;
}

RunConfig parse_config(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw std::invalid_argument("cannot open config file " + file.string());
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

std::string config_to_json(const RunConfig& c) {
    json j;
    j["model"] = model_name(c.model);
    j["unravelling"] = method_name(c.method);
    j["n_levels"] = c.n_levels;
    j["dt"] = c.dt;
    j["t_span"] = {c.t0, c.t1};
    j["n_trajectories"] = c.n_trajectories;
    j["seed"] = c.seed;
    j["record_every"] = c.record_every;
    j["transient_fraction"] = c.transient_fraction;
    j["settle_tolerance"] = c.settle_tolerance;
    j["output_dir"] = c.output_dir;
    j["squid"] = {{"C_farads", c.squid.phys.C},
                  {"L_henries", c.squid.phys.L},
                  {"R_ohms", c.squid.phys.R},
                  {"I_c_amperes", c.squid.phys.I_c},
                  {"I_d_amperes", c.squid.phys.I_d},
                  {"omega_d_rad_per_s", c.squid.phys.omega_d},
                  {"Phi_x_webers", c.squid.phys.Phi_x},
                  {"scale_a", c.squid.scale_a},
                  {"scale_b", c.squid.scale_b},
                  {"mu", c.squid.mu}};
    j["duffing"] = {{"beta", c.duffing.beta},
                    {"g", c.duffing.g},
                    {"gamma", c.duffing.gamma},
                    {"mu", c.duffing.mu}};
    j["single_mode"] = {{"zeta", c.single_mode.zeta},
                        {"drive_amp", c.single_mode.drive_amp},
                        {"omega", c.single_mode.omega}};
    json init;
    init["type"] = c.initial_state.type;
    if (!c.initial_state.alpha.empty()) {
        json alphas = json::array();
        for (Complex a : c.initial_state.alpha) alphas.push_back({a.real(), a.imag()});
        init["alpha"] = alphas;
    }
    if (!c.initial_state.fock_n.empty()) init["n"] = c.initial_state.fock_n;
    j["initial_state"] = init;
    if (!c.sweep.empty()) {
        json sweeps = json::array();
        for (const auto& e : c.sweep) sweeps.push_back({{"path", e.path}, {"values", e.values}});
        j["sweep"] = sweeps;
    }
    return j.dump(2);
}

namespace {

const std::vector<std::string> kSweepPaths = {
    "squid.scale_a", "squid.scale_b", "squid.mu",
    "duffing.beta",  "duffing.mu",    "single_mode.zeta",
    "single_mode.drive_amp"};

}  // namespace

void validate_config(const RunConfig& c) {
    if (c.n_levels < 2) throw std::invalid_argument("config key 'n_levels' must be >= 2");
    if (c.dt <= 0.0) throw std::invalid_argument("config key 'dt' must be positive");
    if (c.t1 <= c.t0) throw std::invalid_argument("config key 't_span' must have t1 > t0");
    if (c.n_trajectories < 1)
        throw std::invalid_argument("config key 'n_trajectories' must be >= 1");
    if (c.record_every < 1)
        throw std::invalid_argument("config key 'record_every' must be >= 1");
    if (c.transient_fraction < 0.0 || c.transient_fraction >= 1.0)
        throw std::invalid_argument("config key 'transient_fraction' must be in [0, 1)");

    if (c.model == ModelKind::squid_pair) {
        const SquidPhysicalParams& p = c.squid.phys;
        if (p.C <= 0) throw std::invalid_argument("config key 'squid.C_farads' must be positive");
        if (p.L <= 0) throw std::invalid_argument("config key 'squid.L_henries' must be positive");
        if (p.R <= 0) throw std::invalid_argument("config key 'squid.R_ohms' must be positive");
        if (p.I_c <= 0)
            throw std::invalid_argument("config key 'squid.I_c_amperes' must be positive");
        if (c.squid.scale_a <= 0 || c.squid.scale_b <= 0)
            throw std::invalid_argument("config keys 'squid.scale_a/scale_b' must be positive");
    }
    if (c.model == ModelKind::duffing_pair) {
        if (c.duffing.beta <= 0)
            throw std::invalid_argument("config key 'duffing.beta' must be positive");
        if (c.duffing.gamma < 0)
            throw std::invalid_argument("config key 'duffing.gamma' must be >= 0");
    }

    const std::string& t = c.initial_state.type;
    if (t != "coherent" && t != "fock" && t != "bias_minimum")
        throw std::invalid_argument("config key 'initial_state.type': unknown value '" + t + "'");
    if (t == "bias_minimum" && c.model == ModelKind::duffing_pair)
        throw std::invalid_argument(
            "config key 'initial_state.type': bias_minimum applies to SQUID models only");

    for (const auto& e : c.sweep) {
        bool known = false;
        for (const auto& p : kSweepPaths) known = known || p == e.path;
        if (!known)
            throw std::invalid_argument("config key 'sweep.path': unknown path '" + e.path + "'");
        if (e.values.empty())
            throw std::invalid_argument("config key 'sweep.values' must be non-empty for '" +
                                        e.path + "'");
    }
}

RunConfig with_sweep_value(const RunConfig& config, const std::string& path, double value) {
    RunConfig c = config;
    if (path == "squid.scale_a") c.squid.scale_a = value;
    else if (path == "squid.scale_b") c.squid.scale_b = value;
    else if (path == "squid.mu") c.squid.mu = value;
    else if (path == "duffing.beta") c.duffing.beta = value;
    else if (path == "duffing.mu") c.duffing.mu = value;
    else if (path == "single_mode.zeta") c.single_mode.zeta = value;
    else if (path == "single_mode.drive_amp") c.single_mode.drive_amp = value;
    else throw std::invalid_argument("unknown sweep path '" + path + "'");
    return c;
}

}  // namespace qtraj
