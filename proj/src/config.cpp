#include "qoc/config.hpp"

#include "qoc/errors.hpp"
#include "qoc/jsonio.hpp"
#include "qoc/targets.hpp"

namespace qoc {

namespace {

const json& require(const json& j, const char* key) {
    if (!j.contains(key))
        throw ValidationError(std::string("missing required key '") + key + "'");
    return j[key];
}

VectorXd number_array(const json& j, const char* key) {
    const json& a = require(j, key);
    if (!a.is_array() || a.empty())
        throw ValidationError(std::string("key '") + key + "' must be a non-empty array");
    VectorXd v(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number())
            throw ValidationError(std::string("key '") + key + "' must hold numbers");
        v[i] = a[i].get<double>();
    }
    return v;
}

double get_number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number())
        throw ValidationError(std::string("key '") + key + "' must be a number");
    return j[key].get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer())
        throw ValidationError(std::string("key '") + key + "' must be an integer");
    return j[key].get<int>();
}

bool get_bool(const json& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean())
        throw ValidationError(std::string("key '") + key + "' must be a boolean");
    return j[key].get<bool>();
}

std::string get_string(const json& j, const char* key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string())
        throw ValidationError(std::string("key '") + key + "' must be a string");
    return j[key].get<std::string>();
}

}  // namespace

RunConfig load_config(const std::string& path) {
    const json j = read_json_file(path);
    if (!j.is_object()) throw ValidationError("config root must be a JSON object");

    RunConfig rc;
    rc.device.n_qubits = get_int(j, "n_qubits", -1);
    if (rc.device.n_qubits < 0) throw ValidationError("missing required key 'n_qubits'");
    rc.device.ec = number_array(j, "ec_ghz");
    rc.device.ej = number_array(j, "ej_ghz");
    rc.device.em = rc.device.n_qubits >= 2 ? number_array(j, "em_ghz") : VectorXd(0);
    rc.device.ng0 = number_array(j, "ng0");
    rc.device.validate();

    rc.target_name = get_string(j, "target", rc.target_name);
    rc.n_slices = get_int(j, "n_slices", rc.n_slices);
    rc.dt = get_number(j, "dt_ps", rc.dt);
    rc.step_size = get_number(j, "step_size", rc.step_size);
    rc.max_iters = get_int(j, "max_iters", rc.max_iters);
    rc.fidelity_goal = get_number(j, "fidelity_goal", rc.fidelity_goal);
    rc.gradient_tol = get_number(j, "gradient_tol", rc.gradient_tol);
    rc.init = get_string(j, "init", rc.init);
    if (rc.init != "smooth" && rc.init != "uniform" && rc.init != "zero")
        throw ValidationError("key 'init' must be one of smooth|uniform|zero");
    rc.init_amplitude = get_number(j, "init_amplitude", rc.init_amplitude);
    rc.palindromic = get_bool(j, "palindromic", rc.palindromic);
    rc.restarts = get_int(j, "restarts", rc.restarts);
    rc.harmonic_polish = get_bool(j, "harmonic_polish", rc.harmonic_polish);
    rc.out_dir = get_string(j, "out_dir", rc.out_dir);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer())
            throw ValidationError("key 'seed' must be an integer");
        rc.seed = j["seed"].get<std::uint64_t>();
    }

    if (j.contains("bounds")) {
        const json& b = j["bounds"];
        if (!b.is_object()) throw ValidationError("key 'bounds' must be an object");
        BoxBounds bounds;
        bounds.ng_lo = get_number(b, "ng_lo", 0.0);
        bounds.ng_hi = get_number(b, "ng_hi", 1.0);
        rc.bounds = bounds;
    }
    if (j.contains("charge_range")) {
        const json& r = j["charge_range"];
        if (!r.is_object()) throw ValidationError("key 'charge_range' must be an object");
        rc.range.lo = get_int(r, "lo", rc.range.lo);
        rc.range.hi = get_int(r, "hi", rc.range.hi);
        rc.range.validate();
    }
    if (j.contains("analysis")) {
        const json& a = j["analysis"];
        if (!a.is_object()) throw ValidationError("key 'analysis' must be an object");
        rc.analysis.leakage = get_bool(a, "leakage", rc.analysis.leakage);
        rc.analysis.harmonics = get_bool(a, "harmonics", rc.analysis.harmonics);
        rc.analysis.spectrum = get_bool(a, "spectrum", rc.analysis.spectrum);
        rc.analysis.weyl = get_bool(a, "weyl", rc.analysis.weyl);
        rc.analysis.bloch = get_bool(a, "bloch", rc.analysis.bloch);
        rc.analysis.transitions = get_bool(a, "transitions", rc.analysis.transitions);
        if (a.contains("harmonic_terms")) {
            const VectorXd terms = number_array(a, "harmonic_terms");
            rc.analysis.harmonic_terms.clear();
            for (int i = 0; i < terms.size(); ++i)
                rc.analysis.harmonic_terms.push_back(static_cast<int>(terms[i]));
        }
    }
    if (j.contains("filter")) {
        const json& f = j["filter"];
        if (!f.is_object()) throw ValidationError("key 'filter' must be an object");
        rc.filter.n_pairs = get_int(f, "n_pairs", rc.filter.n_pairs);
        rc.filter.n_real = get_int(f, "n_real", rc.filter.n_real);
        rc.filter.rect_ps = get_number(f, "rect_ps", rc.filter.rect_ps);
        rc.filter.oversample = get_int(f, "oversample", rc.filter.oversample);
    }

    to_optimization(rc).validate();  // surfaces bad targets and run settings now
    return rc;
}

OptimizationConfig to_optimization(const RunConfig& rc) {
    OptimizationConfig cfg;
    cfg.params = rc.device;
    cfg.target = standard_target(rc.target_name, rc.device.n_qubits);
    cfg.n_slices = rc.n_slices;
    cfg.dt = rc.dt;
    cfg.step_size = rc.step_size;
    cfg.max_iters = rc.max_iters;
    cfg.fidelity_goal = rc.fidelity_goal;
    cfg.gradient_tol = rc.gradient_tol;
    cfg.init = rc.init == "zero"      ? InitPolicy::Zero
               : rc.init == "uniform" ? InitPolicy::RandomUniform
                                      : InitPolicy::RandomSmooth;
    cfg.init_amplitude = rc.init_amplitude;
    cfg.palindromic = rc.palindromic;
    cfg.bounds = rc.bounds;
    cfg.rng_seed = rc.seed;
    return cfg;
}

}  // namespace qoc
