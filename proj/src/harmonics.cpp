#include "qoc/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qoc/errors.hpp"
#include "qoc/spectrum.hpp"

namespace qoc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// ---- linear subproblem -------------------------------------------------
// Model per channel, in percent units:
//   y(t) = a0 + sum_j [ c_j cos(th_j) + s_j sin(th_j) ],  th_j = 2 pi w_j t / T
// with c = a cos(phi), s = -a sin(phi).  For fixed frequencies the best
// (a0, c, s) is a dense least-squares solve.

struct LinearFit {
    VectorXd beta;  // [a0, c_1, s_1, c_2, s_2, ...]
    double chi2 = 0.0;
};

MatrixXd design_matrix(const VectorXd& t, double T, const VectorXd& w) {
    const int n = static_cast<int>(t.size());
    const int j = static_cast<int>(w.size());
    MatrixXd X(n, 1 + 2 * j);
    X.col(0).setOnes();
    for (int q = 0; q < j; ++q) {
        const ArrayXd th = two_pi * w[q] * t.array() / T;
        X.col(1 + 2 * q) = th.cos();
        X.col(2 + 2 * q) = th.sin();
    }
    return X;
}

LinearFit solve_linear(const VectorXd& t, double T, const VectorXd& y, const VectorXd& w) {
    const MatrixXd X = design_matrix(t, T, w);
    LinearFit out;
    out.beta = X.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
    out.chi2 = (y - X * out.beta).squaredNorm();
    return out;
}

// ---- frequency refinement ---------------------------------------------
// Joint Levenberg-Marquardt over the linear coefficients and the
// frequencies.  Freezing the coefficients while stepping the frequencies
// looks tempting (the inner problem is linear), but it mis-scales the
// steps along the coefficient/frequency-correlated valley and the damping
// loop stalls there; the joint Jacobian walks the valley cleanly.

double refine_lm(const VectorXd& t, double T, const VectorXd& y, VectorXd& w) {
    const int j = static_cast<int>(w.size());
    LinearFit lin = solve_linear(t, T, y, w);
    if (j == 0) return lin.chi2;

    VectorXd beta = lin.beta;  // [a0, c_1, s_1, ...]
    double chi2 = lin.chi2;
    const int n_par = 1 + 3 * j;
    double mu = 1e-3;
    int rejects = 0;
    for (int iter = 0; iter < 2000; ++iter) {
        const MatrixXd X = design_matrix(t, T, w);
        const VectorXd r = y - X * beta;

        MatrixXd J(t.size(), n_par);
        J.leftCols(1 + 2 * j) = -X;  // d r / d beta
        for (int q = 0; q < j; ++q) {
            const double c = beta[1 + 2 * q];
            const double s = beta[2 + 2 * q];
            const ArrayXd th = two_pi * w[q] * t.array() / T;
            const ArrayXd scale = two_pi * t.array() / T;
            // d r / d w_q = -(d model / d w_q)
            J.col(1 + 2 * j + q) = (c * th.sin() - s * th.cos()) * scale;
        }

        const MatrixXd JtJ = J.transpose() * J;
        const VectorXd g = J.transpose() * r;
        MatrixXd A = JtJ;
        A.diagonal().array() += mu * (JtJ.diagonal().array().abs() + 1e-12);
        const VectorXd step = A.ldlt().solve(-g);

        const VectorXd beta_new = beta + step.head(1 + 2 * j);
        const VectorXd w_new = w + step.tail(j);
        const double chi2_new =
            (y - design_matrix(t, T, w_new) * beta_new).squaredNorm();
        if (chi2_new < chi2) {
            const double gain = chi2 - chi2_new;
            beta = beta_new;
            w = w_new;
            chi2 = chi2_new;
            mu = std::max(mu / 3.0, 1e-12);
            rejects = 0;
            if (gain < 1e-16 * (1.0 + chi2)) break;
        } else {
            mu *= 4.0;
            if (++rejects > 25 || mu > 1e14) break;
        }
    }
    // report the exact linear solve at the refined frequencies, which is
    // what the caller reconstructs from the winning w
    return solve_linear(t, T, y, w).chi2;
}

// Greedy peeling seed: repeatedly grid-scan for the single frequency that
// best explains the current residual, subtract it, repeat.
VectorXd peel_seed(const VectorXd& t, double T, VectorXd resid, int j, double w_max) {
    VectorXd w(j);
    for (int q = 0; q < j; ++q) {
        double best_w = 0.5, best_drop = -1.0;
        for (double wc = 0.05; wc <= w_max; wc += 0.01) {
            const ArrayXd th = two_pi * wc * t.array() / T;
            const VectorXd cosv = th.cos().matrix();
            const VectorXd sinv = th.sin().matrix();
            // 2x2 normal equations for c, s against the residual
            const double cc = cosv.squaredNorm(), ss = sinv.squaredNorm(),
                         cs = cosv.dot(sinv);
            const double rc = resid.dot(cosv), rs = resid.dot(sinv);
            const double det = cc * ss - cs * cs;
            if (std::abs(det) < 1e-12) continue;
            const double c = (ss * rc - cs * rs) / det;
            const double s = (cc * rs - cs * rc) / det;
            const double drop = c * rc + s * rs;  // energy removed
            if (drop > best_drop) {
                best_drop = drop;
                best_w = wc;
            }
        }
        w[q] = best_w;
        const ArrayXd th = two_pi * best_w * t.array() / T;
        const VectorXd cosv = th.cos().matrix();
        const VectorXd sinv = th.sin().matrix();
        const double cc = cosv.squaredNorm(), ss = sinv.squaredNorm(), cs = cosv.dot(sinv);
        const double rc = resid.dot(cosv), rs = resid.dot(sinv);
        const double det = cc * ss - cs * cs;
        if (std::abs(det) > 1e-12) {
            const double c = (ss * rc - cs * rs) / det;
            const double s = (cc * rs - cs * rc) / det;
            resid -= c * cosv + s * sinv;
        }
    }
    return w;
}

// DFT-peak seed: local maxima of the padded magnitude spectrum.
VectorXd dft_seed(const ControlSequence& seq, int channel, int j, double w_max) {
    const Spectrum sp = spectrum(seq, channel, 16);
    const double T = seq.duration();
    std::vector<std::pair<double, double>> peaks;  // (magnitude, cycles/T)
    for (int m = 1; m + 1 < sp.freq_ghz.size(); ++m) {
        if (sp.magnitude[m] > sp.magnitude[m - 1] && sp.magnitude[m] >= sp.magnitude[m + 1]) {
            const double w = sp.freq_ghz[m] * T / 1000.0;
            if (w > 0.02 && w < w_max) peaks.emplace_back(sp.magnitude[m], w);
        }
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    VectorXd w(j);
    for (int q = 0; q < j; ++q)
        w[q] = q < static_cast<int>(peaks.size()) ? peaks[q].second : 0.5 + 0.5 * q;
    return w;
}

void canonical_gauge(double& a, double& w, double& phi) {
    if (w < 0.0) {  // cos is even in its whole argument
        w = -w;
        phi = -phi;
    }
    if (a < 0.0) {
        a = -a;
        phi += std::numbers::pi;
    }
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
    if (a == 0.0) phi = 0.0;
}

std::vector<HarmonicTerm> assemble_terms(const VectorXd& beta, const VectorXd& w) {
    std::vector<HarmonicTerm> terms;
    terms.push_back({beta[0], 0.0, 0.0});
    std::vector<HarmonicTerm> rest;
    for (int q = 0; q < w.size(); ++q) {
        const double c = beta[1 + 2 * q], s = beta[2 + 2 * q];
        double a = std::hypot(c, s);
        double phi = a > 0.0 ? std::atan2(-s, c) : 0.0;
        double wq = w[q];
        canonical_gauge(a, wq, phi);
        rest.push_back({a, wq, phi});
    }
    std::sort(rest.begin(), rest.end(), [](const HarmonicTerm& x, const HarmonicTerm& y) {
        return x.a != y.a ? x.a > y.a : x.omega < y.omega;
    });
    terms.insert(terms.end(), rest.begin(), rest.end());
    return terms;
}

}  // namespace

void HarmonicFit::validate() const {
    if (!(T > 0.0)) throw ValidationError("harmonic fit: T must be positive");
    if (channels.empty()) throw ValidationError("harmonic fit: no channels");
    if (chi2.size() != channels.size())
        throw ValidationError("harmonic fit: chi2 size must match channel count");
    for (const auto& ch : channels) {
        if (ch.empty()) throw ValidationError("harmonic fit: empty channel");
        if (ch[0].omega != 0.0 || ch[0].phi != 0.0)
            throw ValidationError("harmonic fit: term 0 must be the DC offset");
        for (const auto& term : ch) {
            if (!std::isfinite(term.a) || !std::isfinite(term.omega) || !std::isfinite(term.phi))
                throw ValidationError("harmonic fit: non-finite term");
            if (term.omega < 0.0) throw ValidationError("harmonic fit: omega must be nonnegative");
        }
    }
    for (double c : chi2)
        if (!(c >= 0.0)) throw ValidationError("harmonic fit: chi2 must be nonnegative");
}

double eval_harmonics(const HarmonicFit& fit, int channel, double t) {
    if (channel < 0 || channel >= static_cast<int>(fit.channels.size()))
        throw ValidationError("eval_harmonics: channel out of range");
    double y = 0.0;
    for (const auto& term : fit.channels[channel])
        y += term.a * std::cos(two_pi * term.omega * t / fit.T + term.phi);
    return y / 100.0;
}

VectorXd eval_harmonics_all(const HarmonicFit& fit, double t) {
    VectorXd y(fit.channels.size());
    for (int v = 0; v < y.size(); ++v) y[v] = eval_harmonics(fit, v, t);
    return y;
}

ControlSequence harmonic_sequence(const HarmonicFit& fit, int n_slices) {
    fit.validate();
    if (n_slices < 1) throw ValidationError("harmonic_sequence: n_slices must be positive");
    ControlSequence seq;
    seq.n_slices = n_slices;
    seq.dt = fit.T / n_slices;
    seq.amplitudes.resize(n_slices, static_cast<int>(fit.channels.size()));
    for (int k = 0; k < n_slices; ++k) {
        const VectorXd y = eval_harmonics_all(fit, seq.slice_mid(k));
        seq.amplitudes.row(k) = y.transpose();
    }
    return seq;
}

HarmonicFit fit_harmonics(const ControlSequence& seq, const std::vector<int>& n_terms,
                          std::uint64_t seed) {
    seq.validate();
    if (static_cast<int>(n_terms.size()) != seq.n_qubits())
        throw ValidationError("fit_harmonics: n_terms must list one count per channel");

    const double T = seq.duration();
    VectorXd t(seq.n_slices);
    for (int k = 0; k < seq.n_slices; ++k) t[k] = seq.slice_mid(k);
    const double w_max = 0.5 * seq.n_slices;  // Nyquist in cycles per T

    HarmonicFit fit;
    fit.T = T;
    fit.channels.resize(seq.n_qubits());
    fit.chi2.resize(seq.n_qubits(), 0.0);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, 0.08);

    for (int v = 0; v < seq.n_qubits(); ++v) {
        const int total = n_terms[v];
        if (total < 1) throw ValidationError("fit_harmonics: every channel needs >= 1 term");
        const int j = total - 1;
        if (1 + 2 * j > seq.n_slices)
            throw ValidationError("fit_harmonics: more parameters than samples");
        const VectorXd y = 100.0 * seq.amplitudes.col(v);  // percent units

        if (j == 0) {
            const double a0 = y.mean();
            fit.channels[v] = {{a0, 0.0, 0.0}};
            fit.chi2[v] = (y.array() - a0).matrix().squaredNorm();
            continue;
        }

        std::vector<VectorXd> seeds;
        seeds.push_back(dft_seed(seq, v, j, w_max));
        seeds.push_back(peel_seed(t, T, y.array() - y.mean(), j, w_max));
        for (int extra = 0; extra < 4; ++extra) {
            VectorXd w = seeds[extra % 2];
            for (int q = 0; q < j; ++q) w[q] = std::abs(w[q] + jitter(rng));
            seeds.push_back(w);
        }

        double best_chi2 = std::numeric_limits<double>::infinity();
        VectorXd best_w;
        for (auto& w : seeds) {
            VectorXd wc = w;
            const double chi2 = refine_lm(t, T, y, wc);
            if (chi2 < best_chi2) {
                best_chi2 = chi2;
                best_w = wc;
            }
        }

        const LinearFit lin = solve_linear(t, T, y, best_w);
        fit.channels[v] = assemble_terms(lin.beta, best_w);
        fit.chi2[v] = lin.chi2;
    }
    return fit;
}

}  // namespace qoc
