#include "qoc/grape.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "qoc/errors.hpp"
#include "qoc/hamiltonian.hpp"

namespace qoc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// H_control is affine in the deviations, so every slice Hamiltonian is the
// static part (drift + control at zero deviation) plus per-channel diagonal
// shifts.  Assembled once per optimization.
struct Model {
    MatrixXd h_static;
    std::vector<VectorXd> dirs;  // control_direction per channel
    MatrixXcd target_adj;
    int dim = 0;
    int n = 0;  // slices
    int q = 0;  // channels
    double dt = 0.0;
};

Model make_model(const OptimizationConfig& cfg) {
    Model m;
    m.dim = cfg.params.dim();
    m.n = cfg.n_slices;
    m.q = cfg.params.n_qubits;
    m.dt = cfg.dt;
    m.h_static = build_drift(cfg.params) + build_control(cfg.params, VectorXd::Zero(m.q));
    m.dirs.reserve(m.q);
    for (int v = 0; v < m.q; ++v) m.dirs.push_back(control_direction(cfg.params, v));
    m.target_adj = cfg.target.adjoint();
    return m;
}

struct Forward {
    std::vector<MatrixXd> V;
    std::vector<VectorXd> lam;
    std::vector<MatrixXcd> U;
    MatrixXcd total;
};

void slice_eig(const Model& m, const MatrixXd& u, int k, MatrixXd& V, VectorXd& lam) {
    MatrixXd H = m.h_static;
    for (int v = 0; v < m.q; ++v) H.diagonal() += u(k, v) * m.dirs[v];
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigendecomposition failed at slice " + std::to_string(k));
    V = es.eigenvectors();
    lam = es.eigenvalues();
}

MatrixXcd slice_unitary(const MatrixXd& V, const VectorXd& lam, double dt) {
    const VectorXcd phases = (lam.array().cast<cplx>() * cplx(0.0, -dt)).exp().matrix();
    return V * phases.asDiagonal() * V.transpose();
}

Forward forward_pass(const Model& m, const MatrixXd& u, bool parallel, bool store) {
    Forward f;
    f.U.resize(m.n);
    if (store) {
        f.V.resize(m.n);
        f.lam.resize(m.n);
    }
    std::atomic<int> bad{-1};
#ifdef QOC_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int k = 0; k < m.n; ++k) {
        if (bad.load(std::memory_order_relaxed) >= 0) continue;
        try {
            MatrixXd V;
            VectorXd lam;
            slice_eig(m, u, k, V, lam);
            f.U[k] = slice_unitary(V, lam, m.dt);
            if (store) {
                f.V[k] = std::move(V);
                f.lam[k] = std::move(lam);
            }
        } catch (const std::exception&) {
            int expected = -1;
            bad.compare_exchange_strong(expected, k);
        }
    }
    if (bad.load() >= 0)
        throw NumericalError("forward propagation failed at slice " + std::to_string(bad.load()));
    f.total = MatrixXcd::Identity(m.dim, m.dim);
    for (int k = 0; k < m.n; ++k) f.total = f.U[k] * f.total;
    return f;
}

double quality_of(const Model& m, const MatrixXcd& total) {
    return std::abs((m.target_adj * total).trace()) / static_cast<double>(m.dim);
}

// Exact derivative of |tr(target^dag U_N...U_1)|/dim.  For one slice in its
// eigenbasis, d exp(-i dt H)/du = V (F o (V^T D V)) V^T with
//   F_pq = -i dt e^{-i dt (l_p + l_q)/2} sinc(dt (l_p - l_q)/2),
// the sinc limit covering degenerate eigenvalues.
MatrixXd gradient_of(const Model& m, const MatrixXd& u, bool parallel) {
    const Forward f = forward_pass(m, u, parallel, true);

    // prefix[k] = U_{k-1}...U_0 (identity at 0), suffix[k] = U_{n-1}...U_k
    std::vector<MatrixXcd> prefix(m.n + 1), suffix(m.n + 1);
    prefix[0] = MatrixXcd::Identity(m.dim, m.dim);
    for (int k = 0; k < m.n; ++k) prefix[k + 1] = f.U[k] * prefix[k];
    suffix[m.n] = MatrixXcd::Identity(m.dim, m.dim);
    for (int k = m.n - 1; k >= 0; --k) suffix[k] = suffix[k + 1] * f.U[k];

    const cplx overlap = (m.target_adj * f.total).trace();
    const double mag = std::abs(overlap);
    const cplx phase = mag > 0.0 ? std::conj(overlap) / mag : cplx(1.0, 0.0);

    MatrixXd grad(m.n, m.q);
#ifdef QOC_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int k = 0; k < m.n; ++k) {
        const MatrixXd& V = f.V[k];
        const VectorXd& lam = f.lam[k];

        MatrixXcd F(m.dim, m.dim);
        for (int p = 0; p < m.dim; ++p)
            for (int s = 0; s < m.dim; ++s) {
                const double diff = 0.5 * m.dt * (lam[p] - lam[s]);
                const double avg = 0.5 * m.dt * (lam[p] + lam[s]);
                const double sinc =
                    std::abs(diff) < 1e-4 ? 1.0 - diff * diff / 6.0 : std::sin(diff) / diff;
                F(p, s) = cplx(0.0, -m.dt) * std::exp(cplx(0.0, -avg)) * sinc;
            }

        // d tr / dU_k contracted in the slice eigenbasis
        const MatrixXcd W = prefix[k] * m.target_adj * suffix[k + 1];
        const MatrixXcd B = V.transpose() * W * V;
        const MatrixXcd BtF = B.transpose().cwiseProduct(F);
        for (int v = 0; v < m.q; ++v) {
            const MatrixXd M = V.transpose() * m.dirs[v].asDiagonal() * V;
            const cplx dG = BtF.cwiseProduct(M.cast<cplx>()).sum();
            grad(k, v) = (phase * dG).real() / static_cast<double>(m.dim);
        }
    }
    return grad;
}

ControlSequence initial_sequence(const OptimizationConfig& cfg, std::uint64_t seed) {
    ControlSequence seq;
    seq.n_slices = cfg.n_slices;
    seq.dt = cfg.dt;
    seq.amplitudes = MatrixXd::Zero(cfg.n_slices, cfg.params.n_qubits);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, two_pi);
    std::uniform_real_distribution<double> cycles(0.25, 3.75);

    switch (cfg.init) {
        case InitPolicy::Zero:
            break;
        case InitPolicy::RandomUniform:
            for (int k = 0; k < cfg.n_slices; ++k)
                for (int v = 0; v < cfg.params.n_qubits; ++v)
                    seq.amplitudes(k, v) = cfg.init_amplitude * sym(rng);
            break;
        case InitPolicy::RandomSmooth: {
            // a few random low-frequency cosines per channel: rough enough to
            // spread the restarts, smooth enough that converged pulses stay
            // within reach of the harmonic and filter models
            constexpr int n_harm = 4;
            const double T = cfg.n_slices * cfg.dt;
            for (int v = 0; v < cfg.params.n_qubits; ++v) {
                double a[n_harm], w[n_harm], ph[n_harm];
                for (int j = 0; j < n_harm; ++j) {
                    a[j] = sym(rng);
                    w[j] = cycles(rng);
                    ph[j] = angle(rng);
                }
                const double dc = 0.3 * sym(rng);
                for (int k = 0; k < cfg.n_slices; ++k) {
                    const double t = seq.slice_mid(k);
                    double x = dc;
                    for (int j = 0; j < n_harm; ++j)
                        x += 0.5 * a[j] * std::cos(two_pi * w[j] * t / T + ph[j]);
                    seq.amplitudes(k, v) = cfg.init_amplitude * x;
                }
            }
            break;
        }
        case InitPolicy::Supplied:
            seq.amplitudes = *cfg.init_sequence;
            break;
    }
    return seq;
}

void clamp_to_bounds(const OptimizationConfig& cfg, MatrixXd& u) {
    if (!cfg.bounds) return;
    for (int v = 0; v < cfg.params.n_qubits; ++v) {
        const double lo = cfg.bounds->ng_lo - cfg.params.ng0[v];
        const double hi = cfg.bounds->ng_hi - cfg.params.ng0[v];
        u.col(v) = u.col(v).cwiseMax(lo).cwiseMin(hi);
    }
}

// Mirror-symmetrized ascent direction: stepping along it preserves an exactly
// palindromic sequence, and it is the gradient with respect to the free half
// of the parameters, mirrored back.
MatrixXd palindromic_direction(const MatrixXd& g) {
    MatrixXd d = g + g.colwise().reverse();
    if (g.rows() % 2 == 1) d.row(g.rows() / 2) = g.row(g.rows() / 2);
    return d;
}

void mirror_first_half(MatrixXd& u) {
    const int n = static_cast<int>(u.rows());
    for (int k = 0; k < n / 2; ++k) u.row(n - 1 - k) = u.row(k);
}

}  // namespace

void OptimizationConfig::validate() const {
    params.validate();
    if (target.rows() != params.dim() || target.cols() != params.dim())
        throw ValidationError("target dimension must be 2^n_qubits");
    if ((target.adjoint() * target - MatrixXcd::Identity(target.rows(), target.cols()))
            .cwiseAbs()
            .maxCoeff() > 1e-8)
        throw ValidationError("target must be unitary");
    if (n_slices < 1) throw ValidationError("n_slices must be positive");
    if (!(dt > 0.0)) throw ValidationError("dt must be positive");
    if (!(step_size > 0.0)) throw ValidationError("step_size must be positive");
    if (max_iters < 1) throw ValidationError("max_iters must be positive");
    if (!(fidelity_goal > 0.0 && fidelity_goal <= 1.0))
        throw ValidationError("fidelity_goal must lie in (0, 1]");
    if (gradient_tol < 0.0) throw ValidationError("gradient_tol must be nonnegative");
    if (init_amplitude < 0.0) throw ValidationError("init_amplitude must be nonnegative");
    if (init == InitPolicy::Supplied) {
        if (!init_sequence)
            throw ValidationError("init policy 'supplied' needs init_sequence");
        if (init_sequence->rows() != n_slices || init_sequence->cols() != params.n_qubits)
            throw ValidationError("init_sequence must be n_slices x n_qubits");
    }
    if (bounds) {
        if (!(bounds->ng_lo < bounds->ng_hi))
            throw ValidationError("bounds must satisfy ng_lo < ng_hi");
        for (int v = 0; v < params.n_qubits; ++v)
            if (params.ng0[v] < bounds->ng_lo || params.ng0[v] > bounds->ng_hi)
                throw ValidationError("bounds must contain the working point ng0");
    }
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::GoalReached: return "goal_reached";
        case Termination::GradientTol: return "gradient_tol";
        case Termination::MaxIters: return "max_iters";
        case Termination::Stalled: return "stalled";
    }
    return "unknown";
}

double quality(const OptimizationConfig& cfg, const ControlSequence& seq) {
    cfg.validate();
    seq.validate();
    const Model m = make_model(cfg);
    return quality_of(m, forward_pass(m, seq.amplitudes, true, false).total);
}

MatrixXd gradient(const OptimizationConfig& cfg, const ControlSequence& seq) {
    cfg.validate();
    seq.validate();
    return gradient_of(make_model(cfg), seq.amplitudes, true);
}

MatrixXd gradient_reference(const OptimizationConfig& cfg, const ControlSequence& seq) {
    cfg.validate();
    seq.validate();
    return gradient_of(make_model(cfg), seq.amplitudes, false);
}

OptimizationReport optimize(const OptimizationConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const Model m = make_model(cfg);
    ControlSequence seq = initial_sequence(cfg, cfg.rng_seed);
    if (cfg.palindromic) mirror_first_half(seq.amplitudes);
    clamp_to_bounds(cfg, seq.amplitudes);

    double fid = quality_of(m, forward_pass(m, seq.amplitudes, true, false).total);

    OptimizationReport rep;
    rep.seed = cfg.rng_seed;
    rep.fidelity_history.push_back(fid);
    rep.termination = Termination::MaxIters;

    // Expand-or-backtrack search along an ascent direction, warm-started
    // from the last accepted step so the scale carries across iterations.
    const auto line_search = [&](const MatrixXd& dir, double eps0, double fid_now,
                                 double& f_out, MatrixXd& u_out, double& eps_out) {
        const auto trial = [&](double eps) {
            MatrixXd u = seq.amplitudes + eps * dir;
            clamp_to_bounds(cfg, u);
            return std::make_pair(quality_of(m, forward_pass(m, u, true, false).total),
                                  std::move(u));
        };
        double eps = eps0;
        auto [f_new, u_new] = trial(eps);
        if (f_new > fid_now) {
            // expand while it keeps paying off
            for (int grow = 0; grow < 8; ++grow) {
                auto [f2, u2] = trial(eps * 2.0);
                if (f2 <= f_new) break;
                eps *= 2.0;
                f_new = f2;
                u_new = std::move(u2);
            }
        } else {
            bool improved = false;
            for (int shrink = 0; shrink < 40; ++shrink) {
                eps *= 0.5;
                std::tie(f_new, u_new) = trial(eps);
                if (f_new > fid_now) {
                    improved = true;
                    break;
                }
            }
            if (!improved) return false;
        }
        f_out = f_new;
        u_out = std::move(u_new);
        eps_out = eps;
        return true;
    };

    // Plain gradient ascent crawls once the landscape narrows into a curved
    // valley, so successive steps are combined Polak-Ribiere style; any
    // rejected conjugate direction falls back to steepest ascent before the
    // run is declared stalled.
    MatrixXd prev_g, prev_dir;
    double eps_start = cfg.step_size;

    int it = 0;
    while (it < cfg.max_iters) {
        if (fid >= cfg.fidelity_goal) {
            rep.termination = Termination::GoalReached;
            break;
        }
        const MatrixXd g = gradient_of(m, seq.amplitudes, true);
        if (g.cwiseAbs().maxCoeff() <= cfg.gradient_tol) {
            rep.termination = Termination::GradientTol;
            break;
        }

        MatrixXd dir;
        if (prev_g.size() == 0) {
            dir = g;
        } else {
            const double denom = prev_g.squaredNorm();
            const double beta =
                denom > 0.0 ? std::max(0.0, g.cwiseProduct(g - prev_g).sum() / denom) : 0.0;
            dir = g + beta * prev_dir;
        }
        if (cfg.palindromic) dir = palindromic_direction(dir);

        ++it;
        double f_new = 0.0, eps_used = 0.0;
        MatrixXd u_new;
        bool accepted = line_search(dir, eps_start, fid, f_new, u_new, eps_used);
        if (!accepted && prev_g.size() != 0) {
            dir = cfg.palindromic ? palindromic_direction(g) : g;
            accepted = line_search(dir, cfg.step_size, fid, f_new, u_new, eps_used);
        }
        if (!accepted) {
            rep.termination = Termination::Stalled;
            break;
        }

        seq.amplitudes = std::move(u_new);
        fid = f_new;
        prev_g = g;
        prev_dir = std::move(dir);
        eps_start = eps_used;
        rep.fidelity_history.push_back(fid);
        if (fid >= cfg.fidelity_goal) {
            rep.termination = Termination::GoalReached;
            break;
        }
    }
    rep.sequence = seq;
    rep.fidelity = fid;
    rep.iterations = it;
    // distance to the target after taking out the free global phase
    const MatrixXcd total = forward_pass(m, seq.amplitudes, true, false).total;
    const cplx overlap = (m.target_adj * total).trace();
    const double mag = std::abs(overlap);
    const cplx phase = mag > 0.0 ? std::conj(overlap) / mag : cplx(1.0, 0.0);
    rep.frobenius = (phase * total - cfg.target).norm();
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

OptimizationReport optimize_restarts(const OptimizationConfig& cfg, int n_restarts,
                                     std::vector<double>* all_fidelities) {
    cfg.validate();
    if (n_restarts < 1) throw ValidationError("n_restarts must be positive");

    std::vector<OptimizationReport> reports(n_restarts);
    std::atomic<bool> failed{false};
#ifdef QOC_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (int r = 0; r < n_restarts; ++r) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            OptimizationConfig c = cfg;
            c.rng_seed = cfg.rng_seed + static_cast<std::uint64_t>(r);
            reports[r] = optimize(c);
        } catch (const std::exception&) {
            failed.store(true);
        }
    }
    if (failed.load()) throw NumericalError("an optimization restart failed");

    int best = 0;
    for (int r = 1; r < n_restarts; ++r)
        if (reports[r].fidelity > reports[best].fidelity) best = r;
    if (all_fidelities) {
        all_fidelities->clear();
        for (const auto& r : reports) all_fidelities->push_back(r.fidelity);
    }
    return reports[best];
}

}  // namespace qoc
