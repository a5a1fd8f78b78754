// Release gate: twelve numbered end-to-end checks, one pass/fail line each.
// Run with no arguments for the full set, or list criterion numbers to run a
// subset while iterating.  Exits nonzero if anything fails.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qoc/device.hpp"
#include "qoc/dynamics.hpp"
#include "qoc/grape.hpp"
#include "qoc/hamiltonian.hpp"
#include "qoc/harmonics.hpp"
#include "qoc/leakage.hpp"
#include "qoc/pipeline.hpp"
#include "qoc/targets.hpp"
#include "qoc/transfer.hpp"
#include "qoc/transitions.hpp"
#include "qoc/weyl.hpp"

using namespace qoc;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

DeviceParams cnot_device() {
    DeviceParams p;
    p.n_qubits = 2;
    p.ec = (VectorXd(2) << 140.2, 162.2).finished();
    p.ej = (VectorXd(2) << 10.9, 9.9).finished();
    p.em = (VectorXd(1) << 23.0).finished();
    p.ng0 = (VectorXd(2) << 0.24, 0.26).finished();
    return p;
}

DeviceParams toffoli_device() {
    DeviceParams p;
    p.n_qubits = 3;
    p.ec = (VectorXd(3) << 140.2, 120.9, 184.3).finished();
    p.ej = (VectorXd(3) << 10.9, 9.9, 9.4).finished();
    p.em = (VectorXd(2) << 23.0, 23.0).finished();
    p.ng0 = (VectorXd(3) << 0.24, 0.26, 0.28).finished();
    return p;
}

OptimizationConfig cnot_config() {
    OptimizationConfig cfg;
    cfg.params = cnot_device();
    cfg.target = standard_target("cnot", 2);
    cfg.n_slices = 50;
    cfg.dt = 1.1;  // T = 55 ps
    cfg.max_iters = 10000;
    cfg.fidelity_goal = 0.9999;
    cfg.init = InitPolicy::RandomSmooth;
    cfg.init_amplitude = 0.05;
    cfg.rng_seed = 0;
    return cfg;
}

DeviceParams random_two_qubit(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ec(80.0, 200.0), ej(5.0, 15.0), em(10.0, 30.0),
        ng(0.2, 0.3);
    DeviceParams p;
    p.n_qubits = 2;
    p.ec = (VectorXd(2) << ec(rng), ec(rng)).finished();
    p.ej = (VectorXd(2) << ej(rng), ej(rng)).finished();
    p.em = (VectorXd(1) << em(rng)).finished();
    p.ng0 = (VectorXd(2) << ng(rng), ng(rng)).finished();
    return p;
}

MatrixXcd random_unitary(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss;
    MatrixXcd G(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) G(r, c) = cplx(gauss(rng), gauss(rng));
    return Eigen::HouseholderQR<MatrixXcd>(G).householderQ();
}

Eigen::Matrix2cd random_su2(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::Vector4d q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
    q.normalize();
    Eigen::Matrix2cd u;
    u << cplx(q[0], q[3]), cplx(q[2], q[1]), cplx(-q[2], q[1]), cplx(q[0], -q[3]);
    return u;
}

MatrixXcd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    MatrixXcd out(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

// Converged CNOT artifacts shared by criteria 1, 5, 9, and 11: the restart
// winner plus the harmonic refinement of it.
struct CnotArtifacts {
    std::vector<double> restart_fids;
    OptimizationReport raw;
    PolishResult pol;
    double wall_restarts = 0.0;
    double wall_polish = 0.0;
};

const CnotArtifacts& cnot_artifacts() {
    static std::optional<CnotArtifacts> cache;
    if (!cache) {
        CnotArtifacts a;
        const OptimizationConfig cfg = cnot_config();
        auto t0 = clock_type::now();
        a.raw = optimize_restarts(cfg, 8, &a.restart_fids);
        a.wall_restarts = seconds_since(t0);
        t0 = clock_type::now();
        a.pol = polish_harmonics(cfg, a.raw, {6, 7}, 0.05, 40);
        a.wall_polish = seconds_since(t0);
        cache = std::move(a);
    }
    return *cache;
}

int failures = 0;

void line(int n, bool ok, const std::string& detail) {
    std::printf("criterion %2d %s: %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

// ---- criteria ---------------------------------------------------------------

void criterion_1() {
    const CnotArtifacts& a = cnot_artifacts();
    double best = 0.0;
    for (double f : a.restart_fids) best = std::max(best, f);
    const bool ok = best >= 0.9999 && a.raw.iterations <= 10000 && a.wall_restarts <= 300.0;
    line(1, ok,
         fmt("CNOT at T = 55 ps: best fidelity %.7f of 8 restarts, winner seed %llu after "
             "%d iterations, %.1f s (need >= 0.9999 within 1e4 iterations, <= 300 s)",
             best, (unsigned long long)a.raw.seed, a.raw.iterations, a.wall_restarts));
}

void criterion_2() {
    OptimizationConfig cfg = cnot_config();
    cfg.dt = 0.6;  // T = 30 ps, below the sequential-duration bound
    cfg.fidelity_goal = 0.99;
    std::vector<double> fids;
    const auto t0 = clock_type::now();
    optimize_restarts(cfg, 8, &fids);
    double best = 0.0;
    for (double f : fids) best = std::max(best, f);
    line(2, best < 0.99,
         fmt("CNOT at T = 30 ps stays infeasible: best fidelity %.4f across 8 restarts "
             "(need < 0.99), %.1f s",
             best, seconds_since(t0)));
}

void criterion_3() {
    const DurationBounds b = duration_bounds(cnot_device());
    const double t_zz = b.t_zz[0], t_x1 = b.t_x[0], t_x2 = b.t_x[1];
    const bool ok = std::abs(t_zz - 21.7) <= 0.1 && std::abs(t_x1 - 22.9) <= 0.1 &&
                    std::abs(t_x2 - 25.3) <= 0.1;
    line(3, ok,
         fmt("duration bounds %.3f / %.3f / %.3f ps (need 21.7 / 22.9 / 25.3, each +- 0.1)",
             t_zz, t_x1, t_x2));
}

void criterion_4() {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> amp(-0.15, 0.15), dts(0.5, 1.5);
    const double h = 1e-6;
    double worst = 0.0;
    const auto t0 = clock_type::now();
    for (int trial = 0; trial < 100; ++trial) {
        OptimizationConfig cfg;
        cfg.params = random_two_qubit(rng);
        cfg.target = random_unitary(rng, 4);
        cfg.n_slices = 10;
        cfg.dt = dts(rng);

        ControlSequence seq;
        seq.n_slices = 10;
        seq.dt = cfg.dt;
        seq.amplitudes.resize(10, 2);
        for (int k = 0; k < 10; ++k)
            for (int v = 0; v < 2; ++v) seq.amplitudes(k, v) = amp(rng);

        const MatrixXd g = gradient(cfg, seq);
        const double scale = g.cwiseAbs().maxCoeff();
        for (int k = 0; k < 10; ++k)
            for (int v = 0; v < 2; ++v) {
                ControlSequence up = seq, dn = seq;
                up.amplitudes(k, v) += h;
                dn.amplitudes(k, v) -= h;
                const double fd = (quality(cfg, up) - quality(cfg, dn)) / (2.0 * h);
                // componentwise relative error, floored so that components
                // far below the gradient's own scale cannot dominate
                const double rel =
                    std::abs(fd - g(k, v)) / std::max(std::abs(g(k, v)), 1e-2 * scale);
                worst = std::max(worst, rel);
            }
    }
    line(4, worst <= 1e-6,
         fmt("exact gradient vs central differences (h = 1e-6): max componentwise relative "
             "deviation %.2e over 100 random 2-qubit/10-slice instances (need <= 1e-6), "
             "%.1f s",
             worst, seconds_since(t0)));
}

void criterion_5() {
    const CnotArtifacts& a = cnot_artifacts();
    const LeakageReport lr = leakage_report(cnot_device(), a.pol.report.sequence, {-1, 2},
                                            standard_target("cnot", 2));
    const bool ok = lr.projected_fidelity > 0.99 && lr.max_leakage <= 0.01;
    line(5, ok,
         fmt("converged CNOT in the {-1..2}^2 charge space: projected fidelity %.5f "
             "(need > 0.99), max instantaneous leakage %.5f (need <= 0.01)",
             lr.projected_fidelity, lr.max_leakage));
}

void criterion_6() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> amp(-0.2, 0.2);
    const ChargeRange range{-1, 2};
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const DeviceParams p = random_two_qubit(rng);
        VectorXd dn(2);
        dn << amp(rng), amp(rng);

        const MatrixXd h_comp = build_drift(p) + build_control(p, dn);
        const MatrixXd h_ext = build_extended(p, range, p.ng0 + dn);
        const MatrixXd P = embedding(range, 2);
        MatrixXd r = P.transpose() * h_ext * P - h_comp;
        r -= (r.trace() / 4.0) * MatrixXd::Identity(4, 4);  // scalar offset is free
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
    line(6, worst <= 1e-10,
         fmt("extended Hamiltonian restricted to {0,1}^2 equals the two-level model up to "
             "a scalar: max residual %.2e rad/ps over 100 draws (need <= 1e-10)",
             worst));
}

void criterion_7() {
    const DeviceParams p = cnot_device();
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> amp(-0.2, 0.2);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        ControlSequence seq;
        seq.n_slices = 21;
        seq.dt = 0.9;
        seq.amplitudes.resize(21, 2);
        for (int k = 0; k < 21; ++k)
            for (int v = 0; v < 2; ++v) seq.amplitudes(k, v) = amp(rng);
        const MatrixXcd fwd = propagate(p, seq).total;
        const MatrixXcd rev = propagate(p, reversed(seq)).total;
        worst = std::max(worst, (rev - fwd.transpose()).cwiseAbs().maxCoeff());
    }

    OptimizationConfig cfg = cnot_config();
    cfg.n_slices = 20;
    cfg.max_iters = 60;
    cfg.fidelity_goal = 1.0;
    cfg.palindromic = true;
    const OptimizationReport rep = optimize(cfg);
    double mirror = 0.0;
    for (int k = 0; k < cfg.n_slices; ++k)
        mirror = std::max(mirror, (rep.sequence.amplitudes.row(k) -
                                   rep.sequence.amplitudes.row(cfg.n_slices - 1 - k))
                                      .cwiseAbs()
                                      .maxCoeff());
    const bool ok = worst <= 1e-10 && mirror == 0.0;
    line(7, ok,
         fmt("time-reversal symmetry: max |U(reversed) - U^T| = %.2e over 20 random "
             "sequences (need <= 1e-10); palindromic-mode mirror deviation %.1e (need "
             "exactly 0)",
             worst, mirror));
}

void criterion_8() {
    const MatrixXcd cnot = standard_target("cnot", 2);
    const MatrixXcd swap = standard_target("swap", 2);
    const MatrixXcd ident = standard_target("identity", 2);
    const double pi_2 = std::numbers::pi / 2.0;

    double corner = 0.0;
    corner = std::max(corner, (weyl_coordinates(cnot) - Vector3d(pi_2, 0, 0)).norm());
    corner = std::max(corner, weyl_coordinates(ident).norm());
    corner = std::max(corner,
                      (weyl_coordinates(swap) - Vector3d(pi_2, pi_2, pi_2)).norm());

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> phase(0.0, 6.28);
    const MatrixXcd bases[3] = {cnot, swap, ident};
    double invar = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const MatrixXcd& base = bases[trial % 3];
        const Vector3d ref = weyl_coordinates(base);
        const MatrixXcd dressed = std::exp(cplx(0.0, phase(rng))) *
                                  kron2(random_su2(rng), random_su2(rng)) * base *
                                  kron2(random_su2(rng), random_su2(rng));
        invar = std::max(invar, (weyl_coordinates(dressed) - ref).norm());
    }
    const bool ok = corner <= 1e-8 && invar <= 1e-8;
    line(8, ok,
         fmt("Weyl coordinates: corner deviation %.2e for CNOT/identity/SWAP, invariance "
             "deviation %.2e over 100 local dressings (need <= 1e-8 each)",
             corner, invar));
}

void criterion_9() {
    // roundtrip on a signal inside the model class
    HarmonicFit model;
    model.T = 55.0;
    model.channels = {{{1.2, 0.0, 0.0}, {0.9, 1.3, 0.4}, {0.6, 2.6, 2.2}, {0.3, 3.4, 5.1}},
                      {{-0.8, 0.0, 0.0}, {1.1, 0.9, 1.0}, {0.5, 3.1, 3.3}}};
    model.chi2 = {0.0, 0.0};
    const ControlSequence probe = harmonic_sequence(model, 50);
    const HarmonicFit round = fit_harmonics(probe, {4, 3}, 5);
    const double round_chi2 = std::max(round.chi2[0], round.chi2[1]);

    const CnotArtifacts& a = cnot_artifacts();
    const double c1 = a.pol.fit.chi2[0], c2 = a.pol.fit.chi2[1];
    const bool ok = round_chi2 < 1e-10 && a.pol.reached && c1 <= 0.05 && c2 <= 0.05 &&
                    a.pol.report.fidelity >= 0.9999;
    line(9, ok,
         fmt("harmonic fits: in-model roundtrip chi2 %.1e (need < 1e-10); converged CNOT "
             "pulse chi2 %.4f / %.4f with 6/7 terms (need <= 0.05 each) at fidelity %.6f "
             "after %d refinement rounds, %.1f s",
             round_chi2, c1, c2, a.pol.report.fidelity, a.pol.rounds, a.wall_polish));
}

void criterion_10() {
    OptimizationConfig cfg;
    cfg.params = toffoli_device();
    cfg.target = standard_target("toffoli", 3);
    cfg.n_slices = 240;
    cfg.dt = 0.75;  // T = 180 ps
    cfg.max_iters = 20000;
    cfg.fidelity_goal = 0.999;
    cfg.init = InitPolicy::RandomUniform;
    cfg.init_amplitude = 0.10;

    const auto t0 = clock_type::now();
    OptimizationReport best;
    best.fidelity = 0.0;
    int tried = 0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        OptimizationConfig c = cfg;
        c.rng_seed = seed;
        const OptimizationReport rep = optimize(c);
        ++tried;
        if (rep.fidelity > best.fidelity) best = rep;
        if (best.fidelity >= cfg.fidelity_goal) break;  // best-of-8 already decided
    }
    const double wall = seconds_since(t0);
    const bool ok = best.fidelity >= 0.999 && best.iterations <= 20000 && wall <= 1800.0;
    line(10, ok,
         fmt("Toffoli at T = 180 ps: fidelity %.6f (seed %llu, %d iterations, %d of 8 "
             "restarts used) in %.0f s (need >= 0.999 within 2e4 iterations, <= 1800 s)",
             best.fidelity, (unsigned long long)best.seed, best.iterations, tried, wall));
}

void criterion_11() {
    // pole/residue recovery on an in-model target
    TransferFunction model;
    model.poles = {cplx(-0.08, 0.9), cplx(-0.08, -0.9), cplx(-0.3, 2.2), cplx(-0.3, -2.2),
                   cplx(-0.41, 0.0)};
    model.residues = {cplx(0.4, -0.1), cplx(0.4, 0.1), cplx(0.2, 0.35), cplx(0.2, -0.35),
                      cplx(0.27, 0.0)};
    const Waveform input = rect_pulse(1.1, 1.0, 0.1375, 400);
    const Waveform target = apply_transfer(model, input);
    const TransferFitResult fit = fit_transfer(input, target, 2, 1, 3);

    double pole_err = 0.0, res_err = 0.0;
    for (size_t i = 0; i < model.poles.size(); ++i) {
        double nearest = 1e30;
        size_t at = 0;
        for (size_t j = 0; j < fit.tf.poles.size(); ++j) {
            const double d = std::abs(fit.tf.poles[j] - model.poles[i]);
            if (d < nearest) nearest = d, at = j;
        }
        pole_err = std::max(pole_err, nearest);
        res_err = std::max(res_err, std::abs(fit.tf.residues[at] - model.residues[i]));
    }

    // end to end: filter the converged CNOT drive lines through fitted networks
    const CnotArtifacts& a = cnot_artifacts();
    const ControlSequence& seq = a.pol.report.sequence;
    const int oversample = 8;
    const int fine = seq.n_slices * oversample;
    const double fdt = seq.dt / oversample;
    const Waveform rect = rect_pulse(1.1, 1.0, fdt, fine);

    const auto t0 = clock_type::now();
    ControlSequence filtered = seq;
    for (int v = 0; v < 2; ++v) {
        Waveform want;
        want.dt = fdt;
        want.samples.resize(fine);
        for (int i = 0; i < fine; ++i) want.samples[i] = seq.amplitudes(i / oversample, v);
        const TransferFitResult chfit = fit_transfer(rect, want, 8, 2, 0);
        const Waveform response = apply_transfer(chfit.tf, rect);
        for (int k = 0; k < seq.n_slices; ++k) {
            double acc = 0.0;
            for (int i = 0; i < oversample; ++i) acc += response.samples[k * oversample + i];
            filtered.amplitudes(k, v) = acc / oversample;
        }
    }
    const double fid =
        trace_fidelity(propagate_unitary(cnot_device(), filtered), standard_target("cnot", 2));

    const bool ok = pole_err <= 1e-4 && res_err <= 1e-4 && fid >= 0.90;
    line(11, ok,
         fmt("filter synthesis: in-model pole recovery %.1e, residue recovery %.1e (need "
             "<= 1e-4); CNOT through 8-pair/2-real fitted networks driven by 1.1 ps "
             "rectangles: fidelity %.4f (need >= 0.90), %.1f s",
             pole_err, res_err, fid, seconds_since(t0)));
}

void criterion_12() {
    DeviceParams frozen = cnot_device();
    frozen.ej.setZero();
    const TransitionTable silent = transition_table(frozen, frozen.ng0, {-1, 2});
    double max_offdiag = 0.0;
    for (const Transition& t : silent.rows) max_offdiag = std::max(max_offdiag, t.element);

    const TransitionTable table = transition_table(cnot_device(), cnot_device().ng0, {-1, 2});
    double max_allowed = 0.0, max_forbidden = 0.0;
    for (const Transition& t : table.rows) {
        if (t.cls == TransitionClass::AllowedLeakage)
            max_allowed = std::max(max_allowed, t.element);
        if (t.cls == TransitionClass::Forbidden)
            max_forbidden = std::max(max_forbidden, t.element);
    }
    const bool ok = max_offdiag <= 1e-12 && max_forbidden < max_allowed;
    line(12, ok,
         fmt("transition elements: max off-diagonal %.1e with E_J = 0 (need <= 1e-12); "
             "max forbidden %.4f < max allowed %.4f with the working parameters",
             max_offdiag, max_forbidden, max_allowed));
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    const auto want = [&](int n) { return only.empty() || only.count(n) != 0; };

    if (want(1)) criterion_1();
    if (want(2)) criterion_2();
    if (want(3)) criterion_3();
    if (want(4)) criterion_4();
    if (want(5)) criterion_5();
    if (want(6)) criterion_6();
    if (want(7)) criterion_7();
    if (want(8)) criterion_8();
    if (want(9)) criterion_9();
    if (want(10)) criterion_10();
    if (want(11)) criterion_11();
    if (want(12)) criterion_12();

    const int total = only.empty() ? 12 : static_cast<int>(only.size());
    std::printf("%d of %d criteria passed\n", total - failures, total);
    return failures == 0 ? 0 : 1;
}
