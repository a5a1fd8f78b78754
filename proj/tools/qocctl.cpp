// qocctl: optimize / analyze / filter-fit / simulate for the charge-qubit
// control toolkit.  Exit codes: 0 success, 1 I/O, 2 validation, 3 numerical.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "qoc/config.hpp"
#include "qoc/csvio.hpp"
#include "qoc/dynamics.hpp"
#include "qoc/errors.hpp"
#include "qoc/grape.hpp"
#include "qoc/harmonics.hpp"
#include "qoc/jsonio.hpp"
#include "qoc/leakage.hpp"
#include "qoc/pipeline.hpp"
#include "qoc/spectrum.hpp"
#include "qoc/targets.hpp"
#include "qoc/transfer.hpp"
#include "qoc/transitions.hpp"
#include "qoc/weyl.hpp"

namespace {

using namespace qoc;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir;  // overrides the config when set
    std::optional<std::uint64_t> seed;
    bool verbose = false;
};

RunConfig load_run(const GlobalOpts& g) {
    RunConfig rc = load_config(g.config_path);
    if (!g.out_dir.empty()) rc.out_dir = g.out_dir;
    if (g.seed) rc.seed = *g.seed;
    return rc;
}

std::string out_path(const RunConfig& rc, const std::string& name) {
    std::filesystem::create_directories(rc.out_dir);
    return (std::filesystem::path(rc.out_dir) / name).string();
}

void log_history(const OptimizationReport& rep) {
    for (size_t i = 0; i < rep.fidelity_history.size(); ++i)
        std::fprintf(stderr, "iter %zu fidelity %.12f\n", i, rep.fidelity_history[i]);
}

std::vector<int> harmonic_terms(const RunConfig& rc) {
    if (!rc.analysis.harmonic_terms.empty()) {
        if (static_cast<int>(rc.analysis.harmonic_terms.size()) != rc.device.n_qubits)
            throw ValidationError("key 'harmonic_terms' must list one count per qubit");
        return rc.analysis.harmonic_terms;
    }
    return std::vector<int>(rc.device.n_qubits, 6);
}

// ---- optimize -------------------------------------------------------------

int cmd_optimize(const GlobalOpts& g, bool polish) {
    const RunConfig rc = load_run(g);
    const OptimizationConfig cfg = to_optimization(rc);
    polish = polish || rc.harmonic_polish;

    std::vector<double> restart_fids;
    OptimizationReport rep = optimize_restarts(cfg, rc.restarts, &restart_fids);

    json extra;
    if (polish) {
        const PolishResult pol =
            polish_harmonics(cfg, rep, harmonic_terms(rc), 0.05, 40);
        rep = pol.report;
        extra["polish_rounds"] = pol.rounds;
        extra["polish_reached"] = pol.reached;
        extra["polish_chi2"] = pol.fit.chi2;
        write_json_file(out_path(rc, "harmonics.json"), harmonic_fit_to_json(pol.fit));
    }
    if (g.verbose) log_history(rep);

    write_pulse_csv(out_path(rc, "pulse.csv"), rep.sequence);
    json j = report_to_json(rep, restart_fids);
    for (auto& [key, value] : extra.items()) j[key] = value;
    write_json_file(out_path(rc, "report.json"), j);

    std::printf("fidelity %.12f after %d iterations (%s), best of %d restarts\n",
                rep.fidelity, rep.iterations, to_string(rep.termination).c_str(),
                rc.restarts);
    return 0;
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeFlags {
    bool leakage = false, harmonics = false, spec = false, weyl = false, bloch = false,
         transitions = false;
    std::string harmonic_terms_csv;
    int sweep_points = 0;
};

int cmd_analyze(const GlobalOpts& g, const std::string& pulse_path, AnalyzeFlags fl) {
    RunConfig rc = load_run(g);
    const ControlSequence seq = read_pulse_csv(pulse_path);
    if (seq.n_qubits() != rc.device.n_qubits)
        throw ValidationError("pulse channel count does not match the device");

    // no explicit flags -> fall back to the config's analysis block
    if (!fl.leakage && !fl.harmonics && !fl.spec && !fl.weyl && !fl.bloch &&
        !fl.transitions && fl.sweep_points == 0) {
        fl.leakage = rc.analysis.leakage;
        fl.harmonics = rc.analysis.harmonics;
        fl.spec = rc.analysis.spectrum;
        fl.weyl = rc.analysis.weyl;
        fl.bloch = rc.analysis.bloch;
        fl.transitions = rc.analysis.transitions;
    }
    if (!fl.harmonic_terms_csv.empty()) {
        rc.analysis.harmonic_terms.clear();
        std::stringstream ss(fl.harmonic_terms_csv);
        std::string tok;
        while (std::getline(ss, tok, ','))
            rc.analysis.harmonic_terms.push_back(std::stoi(tok));
        fl.harmonics = true;
    }

    const MatrixXcd target = standard_target(rc.target_name, rc.device.n_qubits);

    if (fl.leakage) {
        const LeakageReport lr = leakage_report(rc.device, seq, rc.range, target);
        json j;
        j["projected_fidelity"] = lr.projected_fidelity;
        j["max_leakage"] = lr.max_leakage;
        j["states"] = lr.state_labels;
        write_json_file(out_path(rc, "leakage.json"), j);

        std::vector<std::string> header{"t_ps"};
        for (const auto& s : lr.state_labels) header.push_back(s);
        std::vector<std::vector<double>> rows;
        for (int k = 0; k <= seq.n_slices; ++k) {
            std::vector<double> row{k * seq.dt};
            for (const auto& curve : lr.leakage_curves) row.push_back(curve[k]);
            rows.push_back(std::move(row));
        }
        write_csv_numeric(out_path(rc, "leakage.csv"), header, rows);
        std::printf("leakage: projected fidelity %.6f, max leakage %.6f\n",
                    lr.projected_fidelity, lr.max_leakage);
    }

    if (fl.harmonics) {
        const HarmonicFit fit = fit_harmonics(seq, harmonic_terms(rc), rc.seed);
        write_json_file(out_path(rc, "harmonics.json"), harmonic_fit_to_json(fit));
        std::printf("harmonics: chi2 per channel");
        for (double c : fit.chi2) std::printf(" %.6g", c);
        std::printf("\n");
    }

    if (fl.spec || fl.transitions) {
        std::vector<Spectrum> spectra;
        for (int v = 0; v < seq.n_qubits(); ++v) spectra.push_back(spectrum(seq, v, 8));
        if (fl.spec) {
            std::vector<std::string> header{"freq_ghz"};
            for (int v = 0; v < seq.n_qubits(); ++v)
                header.push_back("mag" + std::to_string(v + 1));
            std::vector<std::vector<double>> rows;
            for (int m = 0; m < spectra[0].freq_ghz.size(); ++m) {
                std::vector<double> row{spectra[0].freq_ghz[m]};
                for (const auto& sp : spectra) row.push_back(sp.magnitude[m]);
                rows.push_back(std::move(row));
            }
            write_csv_numeric(out_path(rc, "spectrum.csv"), header, rows);
        }
        if (fl.transitions) {
            const TransitionTable table =
                transition_table(rc.device, rc.device.ng0, rc.range);
            const auto scores = spectral_overlap(spectra, table);
            std::vector<std::vector<std::string>> rows;
            for (const auto& sc : scores) {
                const Transition& t = sc.transition;
                rows.push_back({std::to_string(t.channel + 1), std::to_string(t.i),
                                std::to_string(t.f), format_double(t.freq_ghz),
                                format_double(t.element), to_string(t.cls),
                                format_double(sc.overlap)});
            }
            write_csv(out_path(rc, "transitions.csv"),
                      {"channel", "i", "f", "freq_ghz", "element", "class", "overlap"},
                      rows);
        }
    }

    if (fl.weyl) {
        if (rc.device.n_qubits != 2)
            throw ValidationError("weyl trajectories need a two-qubit device");
        VectorXcd initial = VectorXcd::Zero(4);
        initial[0] = 1.0;
        const Trajectory tr = simulate_trajectory(rc.device, seq, initial, false);
        std::vector<std::vector<double>> rows;
        for (int k = 0; k <= seq.n_slices; ++k) {
            const Vector3d c = weyl_coordinates(tr.propagators[k]);
            rows.push_back({tr.t[k], c[0], c[1], c[2]});
        }
        write_csv_numeric(out_path(rc, "weyl.csv"), {"t_ps", "c1", "c2", "c3"}, rows);
    }

    if (fl.bloch) {
        VectorXcd initial = VectorXcd::Zero(rc.device.dim());
        initial[0] = 1.0;
        const Trajectory tr = simulate_trajectory(rc.device, seq, initial, false);
        std::vector<std::string> header{"t_ps"};
        for (int v = 1; v <= rc.device.n_qubits; ++v)
            for (const char* axis : {"bx", "by", "bz"})
                header.push_back(axis + std::to_string(v));
        std::vector<std::vector<double>> rows;
        for (int k = 0; k <= seq.n_slices; ++k) {
            std::vector<double> row{tr.t[k]};
            for (int v = 0; v < rc.device.n_qubits; ++v) {
                const Vector3d b = reduced_bloch(tr.states[k], v, rc.device.n_qubits);
                row.insert(row.end(), {b[0], b[1], b[2]});
            }
            rows.push_back(std::move(row));
        }
        write_csv_numeric(out_path(rc, "bloch.csv"), header, rows);
    }

    if (fl.sweep_points > 0) {
        if (rc.device.n_qubits != 2)
            throw ValidationError("transition sweeps need a two-qubit device");
        VectorXd grid(fl.sweep_points);
        for (int i = 0; i < fl.sweep_points; ++i)
            grid[i] = fl.sweep_points == 1 ? 0.5
                                           : static_cast<double>(i) / (fl.sweep_points - 1);
        const auto rows = transition_sweep(rc.device, rc.range, grid, grid);
        std::vector<std::vector<std::string>> cells;
        for (const auto& r : rows)
            cells.push_back({format_double(r.ng1), format_double(r.ng2),
                             std::to_string(r.transition_id), format_double(r.freq_ghz),
                             format_double(r.element)});
        write_csv(out_path(rc, "sweep.csv"),
                  {"ng1", "ng2", "transition_id", "freq_ghz", "element"}, cells);
    }
    return 0;
}

// ---- filter-fit -----------------------------------------------------------

int cmd_filter_fit(const GlobalOpts& g, const std::string& pulse_path, int pairs, int reals,
                   double rect_ps, int oversample) {
    const RunConfig rc = load_run(g);
    const ControlSequence seq = read_pulse_csv(pulse_path);
    if (seq.n_qubits() != rc.device.n_qubits)
        throw ValidationError("pulse channel count does not match the device");
    if (pairs < 0) pairs = rc.filter.n_pairs;
    if (reals < 0) reals = rc.filter.n_real;
    if (rect_ps <= 0.0) rect_ps = rc.filter.rect_ps;
    if (oversample < 1) oversample = rc.filter.oversample;

    const int fine = seq.n_slices * oversample;
    const double fdt = seq.dt / oversample;
    const Waveform input = rect_pulse(rect_ps, 1.0, fdt, fine);

    ControlSequence filtered_seq = seq;
    json summary;
    summary["channels"] = json::array();
    for (int v = 0; v < seq.n_qubits(); ++v) {
        Waveform target;
        target.dt = fdt;
        target.samples.resize(fine);
        for (int i = 0; i < fine; ++i)
            target.samples[i] = seq.amplitudes(i / oversample, v);

        const TransferFitResult fit = fit_transfer(input, target, pairs, reals, rc.seed);
        const Waveform response = apply_transfer(fit.tf, input);
        for (int k = 0; k < seq.n_slices; ++k) {
            double acc = 0.0;
            for (int i = 0; i < oversample; ++i) acc += response.samples[k * oversample + i];
            filtered_seq.amplitudes(k, v) = acc / oversample;
        }

        const std::string suffix = "_ch" + std::to_string(v + 1);
        write_json_file(out_path(rc, "transfer" + suffix + ".json"),
                        transfer_to_json(fit.tf));

        const auto stages = realize_stages(fit.tf);
        std::vector<std::vector<std::string>> stage_rows;
        for (const auto& st : stages)
            stage_rows.push_back({st.kind == Stage::LCR ? "lcr" : "rc",
                                  format_double(st.freq_ghz), format_double(st.damping),
                                  format_double(st.gain), format_double(st.phase_rad)});
        write_csv(out_path(rc, "stages" + suffix + ".csv"),
                  {"kind", "freq_ghz", "damping", "gain", "phase_rad"}, stage_rows);

        std::vector<std::vector<double>> pole_rows;
        for (size_t i = 0; i < fit.tf.poles.size(); ++i)
            pole_rows.push_back({fit.tf.poles[i].real(), fit.tf.poles[i].imag(),
                                 std::abs(fit.tf.residues[i])});
        write_csv_numeric(out_path(rc, "poles" + suffix + ".csv"),
                          {"re_s", "im_s", "abs_residue"}, pole_rows);

        summary["channels"].push_back({{"residual", fit.residual},
                                       {"n_pairs", pairs},
                                       {"n_real", reals}});
    }

    write_pulse_csv(out_path(rc, "pulse_filtered.csv"), filtered_seq);

    const MatrixXcd target = standard_target(rc.target_name, rc.device.n_qubits);
    const double fid =
        trace_fidelity(propagate_unitary(rc.device, filtered_seq), target);
    summary["filtered_fidelity"] = fid;
    write_json_file(out_path(rc, "filter.json"), summary);
    std::printf("filtered gate fidelity %.6f\n", fid);
    return 0;
}

// ---- simulate -------------------------------------------------------------

int cmd_simulate(const GlobalOpts& g, const std::string& pulse_path, int state_index,
                 bool extended) {
    const RunConfig rc = load_run(g);
    const ControlSequence seq = read_pulse_csv(pulse_path);
    if (seq.n_qubits() != rc.device.n_qubits)
        throw ValidationError("pulse channel count does not match the device");
    if (state_index < 0 || state_index >= rc.device.dim())
        throw ValidationError("initial state index out of range");

    VectorXcd initial = VectorXcd::Zero(rc.device.dim());
    initial[state_index] = 1.0;
    const Trajectory tr =
        simulate_trajectory(rc.device, seq, initial, extended, rc.range);

    const int dim = static_cast<int>(tr.states.front().size());
    std::vector<std::string> header{"t_ps"};
    for (int b = 0; b < dim; ++b) header.push_back("p" + std::to_string(b));
    if (extended) header.push_back("p_comp");
    const MatrixXd P = embedding(rc.range, rc.device.n_qubits);

    std::vector<std::vector<double>> rows;
    for (int k = 0; k <= seq.n_slices; ++k) {
        std::vector<double> row{tr.t[k]};
        for (int b = 0; b < dim; ++b) row.push_back(std::norm(tr.states[k][b]));
        if (extended) row.push_back((P.transpose() * tr.states[k]).squaredNorm());
        rows.push_back(std::move(row));
    }
    write_csv_numeric(out_path(rc, "trajectory.csv"), header, rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulse synthesis and analysis for coupled charge qubits"};
    app.require_subcommand(1);

    GlobalOpts g;
    std::string pulse_path;
    bool polish = false;
    AnalyzeFlags fl;
    int pairs = -1, reals = -1, oversample = -1, state_index = 0;
    double rect_ps = -1.0;
    bool extended = false;

    const auto add_global = [&](CLI::App* cmd, bool needs_pulse) {
        cmd->add_option("--config", g.config_path, "run configuration JSON")->required();
        cmd->add_option("--seed", g.seed, "override the config's rng seed");
        cmd->add_option("--out", g.out_dir, "override the config's output directory");
        cmd->add_flag("--verbose", g.verbose, "log per-iteration fidelity to stderr");
        if (needs_pulse)
            cmd->add_option("--pulse", pulse_path, "pulse CSV to analyze")->required();
    };

    CLI::App* opt = app.add_subcommand("optimize", "synthesize a pulse for the target gate");
    add_global(opt, false);
    opt->add_flag("--polish", polish,
                  "refine the winner toward the harmonic model class after the restarts");

    CLI::App* ana = app.add_subcommand("analyze", "characterize an existing pulse");
    add_global(ana, true);
    ana->add_flag("--leakage", fl.leakage, "extended-space leakage report");
    ana->add_flag("--spectrum", fl.spec, "magnitude spectrum CSV");
    ana->add_flag("--weyl", fl.weyl, "Weyl-chamber trajectory CSV");
    ana->add_flag("--bloch", fl.bloch, "per-qubit Bloch trajectories from |0...0>");
    ana->add_flag("--transitions", fl.transitions, "transition table with spectral overlaps");
    ana->add_option("--harmonics", fl.harmonic_terms_csv,
                    "harmonic fit with the given per-channel term counts, e.g. 6,7");
    ana->add_option("--sweep", fl.sweep_points,
                    "gate-charge sweep of the transition structure (points per axis)");

    CLI::App* flt = app.add_subcommand("filter-fit", "synthesize pulse-shaping filters");
    add_global(flt, true);
    flt->add_option("--pairs", pairs, "conjugate pole pairs per channel");
    flt->add_option("--real", reals, "real poles per channel");
    flt->add_option("--rect", rect_ps, "input rectangle length, ps");
    flt->add_option("--oversample", oversample, "output grid refinement factor");

    CLI::App* sim = app.add_subcommand("simulate", "propagate a basis state under a pulse");
    add_global(sim, true);
    sim->add_option("--state", state_index, "initial computational basis index");
    sim->add_flag("--extended", extended, "propagate in the extended charge space");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*opt) return cmd_optimize(g, polish);
        if (*ana) return cmd_analyze(g, pulse_path, fl);
        if (*flt) return cmd_filter_fit(g, pulse_path, pairs, reals, rect_ps, oversample);
        if (*sim) return cmd_simulate(g, pulse_path, state_index, extended);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
