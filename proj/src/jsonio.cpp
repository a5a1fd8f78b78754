#include "qoc/jsonio.hpp"

#include <fstream>

#include "qoc/errors.hpp"

namespace qoc {

namespace {

json complex_list(const std::vector<cplx>& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(json::array({z.real(), z.imag()}));
    return out;
}

std::vector<cplx> complex_list_from(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array())
        throw ValidationError(std::string("missing or non-array key '") + key + "'");
    std::vector<cplx> out;
    for (const auto& e : j[key]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw ValidationError(std::string("key '") + key + "' needs [re, im] pairs");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

}  // namespace

json transfer_to_json(const TransferFunction& tf) {
    json j;
    j["poles"] = complex_list(tf.poles);
    j["residues"] = complex_list(tf.residues);
    j["direct"] = tf.direct;
    return j;
}

TransferFunction transfer_from_json(const json& j) {
    TransferFunction tf;
    tf.poles = complex_list_from(j, "poles");
    tf.residues = complex_list_from(j, "residues");
    if (j.contains("direct")) {
        if (!j["direct"].is_number()) throw ValidationError("key 'direct' must be a number");
        tf.direct = j["direct"].get<double>();
    }
    tf.validate();
    return tf;
}

json harmonic_fit_to_json(const HarmonicFit& fit) {
    json channels = json::array();
    for (const auto& ch : fit.channels) {
        json terms = json::array();
        for (const auto& t : ch)
            terms.push_back({{"a", t.a}, {"omega", t.omega}, {"phi", t.phi}});
        channels.push_back(terms);
    }
    json j;
    j["channels"] = channels;
    j["T_ps"] = fit.T;
    j["chi2"] = fit.chi2;
    return j;
}

HarmonicFit harmonic_fit_from_json(const json& j) {
    HarmonicFit fit;
    if (!j.contains("T_ps") || !j["T_ps"].is_number())
        throw ValidationError("missing or non-numeric key 'T_ps'");
    fit.T = j["T_ps"].get<double>();
    if (!j.contains("channels") || !j["channels"].is_array())
        throw ValidationError("missing or non-array key 'channels'");
    for (const auto& ch : j["channels"]) {
        std::vector<HarmonicTerm> terms;
        for (const auto& t : ch) {
            for (const char* key : {"a", "omega", "phi"})
                if (!t.contains(key) || !t[key].is_number())
                    throw ValidationError(std::string("harmonic term needs numeric '") + key +
                                          "'");
            terms.push_back(
                {t["a"].get<double>(), t["omega"].get<double>(), t["phi"].get<double>()});
        }
        fit.channels.push_back(std::move(terms));
    }
    if (j.contains("chi2")) fit.chi2 = j["chi2"].get<std::vector<double>>();
    else fit.chi2.assign(fit.channels.size(), 0.0);
    fit.validate();
    return fit;
}

json report_to_json(const OptimizationReport& rep, const std::vector<double>& restart_fidelities) {
    json j;
    j["fidelity"] = rep.fidelity;
    j["frobenius"] = rep.frobenius;
    j["iterations"] = rep.iterations;
    j["termination"] = to_string(rep.termination);
    j["seed"] = rep.seed;
    j["fidelity_history"] = rep.fidelity_history;
    j["restart_fidelities"] = restart_fidelities;
    j["n_slices"] = rep.sequence.n_slices;
    j["dt_ps"] = rep.sequence.dt;
    j["duration_ps"] = rep.sequence.duration();
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed for '" + path + "'");
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("JSON parse error in '") + path + "': " + e.what());
    }
}

}  // namespace qoc
