#include "qoc/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qoc/errors.hpp"
#include "qoc/sequence.hpp"
#include "qoc/spectrum.hpp"

namespace qoc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double im_tol = 1e-9;      // |Im s| below this counts as a real pole
constexpr double re_clamp = -1e-6;   // fitted poles stay strictly stable

// exact one-slice step factors for dx/dt = s x + u with u constant:
//   x <- E x + u G,  E = e^{s dt},  G = (E - 1)/s
// and their s-derivatives, with series near s = 0.
struct StepFactors {
    cplx E, G, dE, dG;
};

StepFactors step_factors(cplx s, double dt) {
    StepFactors f;
    f.E = std::exp(s * dt);
    f.dE = dt * f.E;
    const cplx z = s * dt;
    if (std::abs(z) < 1e-3) {
        f.G = dt * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
        f.dG = dt * dt * (0.5 + z / 3.0 + z * z / 8.0 + z * z * z / 30.0);
    } else {
        f.G = (f.E - 1.0) / s;
        f.dG = (f.dE - f.G) / s;
    }
    return f;
}

// endpoint samples of the modal state for one pole; optionally the
// sensitivity dx/ds alongside
void modal_response(cplx s, const VectorXd& u, double dt, VectorXcd& x, VectorXcd* xs) {
    const StepFactors f = step_factors(s, dt);
    const int n = static_cast<int>(u.size());
    x.resize(n);
    if (xs) xs->resize(n);
    cplx z(0.0, 0.0), zs(0.0, 0.0);
    for (int k = 0; k < n; ++k) {
        if (xs) {
            zs = f.E * zs + f.dE * z + u[k] * f.dG;
            (*xs)[k] = zs;
        }
        z = f.E * z + u[k] * f.G;
        x[k] = z;
    }
}

// ---- least-squares residues for fixed poles ------------------------------

struct PoleSet {
    std::vector<cplx> pairs;   // Im > 0 member of each conjugate pair
    std::vector<double> reals;
    int n_params() const { return 2 * static_cast<int>(pairs.size()) +
                                  static_cast<int>(reals.size()); }
};

struct LinearSolve {
    VectorXd beta;  // [c_1, d_1, ..., c_P, d_P, r_1, ..., r_R], residue = c + i d
    double chi2 = 0.0;
    std::vector<VectorXcd> modal;  // per pair then per real pole
};

LinearSolve solve_residues(const PoleSet& ps, const VectorXd& u, const VectorXd& y, double dt) {
    const int np = static_cast<int>(ps.pairs.size());
    const int nr = static_cast<int>(ps.reals.size());
    const int n = static_cast<int>(u.size());
    MatrixXd A(n, 2 * np + nr);
    LinearSolve out;
    out.modal.resize(np + nr);
    for (int i = 0; i < np; ++i) {
        modal_response(ps.pairs[i], u, dt, out.modal[i], nullptr);
        // residue r = c + i d on the pair: y += 2 Re(r x)
        A.col(2 * i) = 2.0 * out.modal[i].real();
        A.col(2 * i + 1) = -2.0 * out.modal[i].imag();
    }
    for (int j = 0; j < nr; ++j) {
        modal_response(cplx(ps.reals[j], 0.0), u, dt, out.modal[np + j], nullptr);
        A.col(2 * np + j) = out.modal[np + j].real();
    }
    out.beta = A.colPivHouseholderQr().solve(y);
    out.chi2 = (y - A * out.beta).squaredNorm();
    return out;
}

VectorXd predict(const PoleSet& ps, const LinearSolve& lin) {
    const int np = static_cast<int>(ps.pairs.size());
    const int nr = static_cast<int>(ps.reals.size());
    const int n = static_cast<int>(lin.modal[0].size());
    VectorXd y = VectorXd::Zero(n);
    for (int i = 0; i < np; ++i) {
        const cplx r(lin.beta[2 * i], lin.beta[2 * i + 1]);
        y += 2.0 * (r * lin.modal[i].array()).real().matrix();
    }
    for (int j = 0; j < nr; ++j) y += lin.beta[2 * np + j] * lin.modal[np + j].real();
    return y;
}

void clamp_poles(PoleSet& ps) {
    for (auto& s : ps.pairs)
        s = cplx(std::min(s.real(), re_clamp), std::max(std::abs(s.imag()), 1e-3));
    for (auto& s : ps.reals) s = std::min(s, re_clamp);
}

// LM over pole positions with residues re-solved at every step (Kaufman
// variable projection: the Jacobian holds the residues fixed).
double refine_poles(PoleSet& ps, const VectorXd& u, const VectorXd& y, double dt) {
    const int np = static_cast<int>(ps.pairs.size());
    const int nr = static_cast<int>(ps.reals.size());
    const int n = static_cast<int>(u.size());
    const int m = ps.n_params();

    LinearSolve lin = solve_residues(ps, u, y, dt);
    double mu = 1e-3;
    int rejects = 0;
    for (int iter = 0; iter < 250; ++iter) {
        const VectorXd res = y - predict(ps, lin);

        MatrixXd J(n, m);
        VectorXcd x, xs;
        for (int i = 0; i < np; ++i) {
            modal_response(ps.pairs[i], u, dt, x, &xs);
            const cplx r(lin.beta[2 * i], lin.beta[2 * i + 1]);
            const ArrayXcd rx = r * xs.array();
            J.col(2 * i) = -2.0 * rx.real().matrix();      // d res / d Re(s)
            J.col(2 * i + 1) = 2.0 * rx.imag().matrix();   // d res / d Im(s)
        }
        for (int j = 0; j < nr; ++j) {
            modal_response(cplx(ps.reals[j], 0.0), u, dt, x, &xs);
            J.col(2 * np + j) = -lin.beta[2 * np + j] * xs.real();
        }

        const MatrixXd JtJ = J.transpose() * J;
        const VectorXd g = J.transpose() * res;
        MatrixXd A = JtJ;
        A.diagonal().array() += mu * (JtJ.diagonal().array().abs() + 1e-12);
        const VectorXd step = A.ldlt().solve(-g);

        PoleSet trial = ps;
        for (int i = 0; i < np; ++i)
            trial.pairs[i] += cplx(step[2 * i], step[2 * i + 1]);
        for (int j = 0; j < nr; ++j) trial.reals[j] += step[2 * np + j];
        clamp_poles(trial);

        const LinearSolve lin_trial = solve_residues(trial, u, y, dt);
        if (lin_trial.chi2 < lin.chi2) {
            const double gain = lin.chi2 - lin_trial.chi2;
            ps = trial;
            lin = lin_trial;
            mu = std::max(mu / 3.0, 1e-12);
            rejects = 0;
            if (gain < 1e-16 * (1.0 + lin.chi2)) break;
        } else {
            mu *= 4.0;
            if (++rejects > 25 || mu > 1e14) break;
        }
    }
    return lin.chi2;
}

TransferFunction assemble(const PoleSet& ps, const LinearSolve& lin) {
    TransferFunction tf;
    const int np = static_cast<int>(ps.pairs.size());
    for (int i = 0; i < np; ++i) {
        const cplx r(lin.beta[2 * i], lin.beta[2 * i + 1]);
        tf.poles.push_back(ps.pairs[i]);
        tf.residues.push_back(r);
        tf.poles.push_back(std::conj(ps.pairs[i]));
        tf.residues.push_back(std::conj(r));
    }
    for (int j = 0; j < static_cast<int>(ps.reals.size()); ++j) {
        tf.poles.push_back(cplx(ps.reals[j], 0.0));
        tf.residues.push_back(cplx(lin.beta[2 * np + j], 0.0));
    }
    return tf;
}

// ---- polynomial helpers for the cascade ----------------------------------
// Coefficients ascending in s; complex internally, real on the way out.

using Poly = std::vector<cplx>;

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size() - 1, cplx(0.0, 0.0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Poly poly_add(Poly a, const Poly& b) {
    if (b.size() > a.size()) a.resize(b.size(), cplx(0.0, 0.0));
    for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

Poly poly_scale(Poly a, cplx k) {
    for (auto& c : a) c *= k;
    return a;
}

cplx poly_eval(const Poly& a, cplx s) {
    cplx v(0.0, 0.0);
    for (size_t i = a.size(); i-- > 0;) v = v * s + a[i];
    return v;
}

Poly poly_derivative(const Poly& a) {
    if (a.size() <= 1) return {cplx(0.0, 0.0)};
    Poly d(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * static_cast<double>(i);
    return d;
}

void poly_trim(Poly& a) {
    double biggest = 0.0;
    for (const auto& c : a) biggest = std::max(biggest, std::abs(c));
    while (a.size() > 1 && std::abs(a.back()) < 1e-13 * biggest) a.pop_back();
}

// numerator / denominator of a pole-residue form, poles prescaled by 1/sigma
struct Rational {
    Poly num, den;
};

Rational to_rational(const TransferFunction& tf, double sigma) {
    Rational r;
    r.den = {cplx(1.0, 0.0)};
    for (const auto& p : tf.poles) r.den = poly_mul(r.den, {-p / sigma, cplx(1.0, 0.0)});
    r.num = poly_scale(r.den, tf.direct);
    for (size_t i = 0; i < tf.poles.size(); ++i) {
        Poly term = {cplx(1.0, 0.0)};
        for (size_t j = 0; j < tf.poles.size(); ++j)
            if (j != i) term = poly_mul(term, {-tf.poles[j] / sigma, cplx(1.0, 0.0)});
        // r_i/(s - p_i) = (r_i/sigma)/(s~ - p_i/sigma)
        r.num = poly_add(r.num, poly_scale(term, tf.residues[i] / sigma));
    }
    return r;
}

std::vector<cplx> poly_roots(const Poly& p) {
    const int deg = static_cast<int>(p.size()) - 1;
    if (deg < 1) return {};
    MatrixXcd companion = MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -p[i] / p[deg];
    Eigen::ComplexEigenSolver<MatrixXcd> es(companion);
    if (es.info() != Eigen::Success) throw NumericalError("cascade: root finding failed");
    std::vector<cplx> roots(deg);
    for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()[i];
    return roots;
}

}  // namespace

void TransferFunction::validate() const {
    if (poles.size() != residues.size())
        throw ValidationError("transfer function: pole/residue count mismatch");
    if (!std::isfinite(direct)) throw ValidationError("transfer function: non-finite direct term");
    for (size_t i = 0; i < poles.size(); ++i) {
        if (!std::isfinite(poles[i].real()) || !std::isfinite(poles[i].imag()) ||
            !std::isfinite(residues[i].real()) || !std::isfinite(residues[i].imag()))
            throw ValidationError("transfer function: non-finite pole or residue");
        if (poles[i].real() > 1e-12)
            throw ValidationError("transfer function: unstable pole (Re s > 0)");
    }
    // complex poles must pair with conjugate residues so responses stay real
    std::vector<bool> matched(poles.size(), false);
    for (size_t i = 0; i < poles.size(); ++i) {
        if (matched[i]) continue;
        if (std::abs(poles[i].imag()) <= im_tol) {
            if (std::abs(residues[i].imag()) > 1e-9 * (1.0 + std::abs(residues[i])))
                throw ValidationError("transfer function: real pole with complex residue");
            matched[i] = true;
            continue;
        }
        bool found = false;
        for (size_t j = i + 1; j < poles.size() && !found; ++j) {
            if (matched[j]) continue;
            const double scale = 1.0 + std::abs(poles[i]) + std::abs(residues[i]);
            if (std::abs(poles[j] - std::conj(poles[i])) < 1e-9 * scale &&
                std::abs(residues[j] - std::conj(residues[i])) < 1e-6 * scale) {
                matched[i] = matched[j] = true;
                found = true;
            }
        }
        if (!found)
            throw ValidationError("transfer function: complex pole without conjugate partner");
    }
}

Waveform rect_pulse(double duration, double amplitude, double dt, int n_samples) {
    if (!(dt > 0.0)) throw ValidationError("rect_pulse: dt must be positive");
    if (n_samples < 1) throw ValidationError("rect_pulse: n_samples must be positive");
    if (duration < 0.0) throw ValidationError("rect_pulse: duration must be nonnegative");
    Waveform w;
    w.dt = dt;
    w.samples = VectorXd::Zero(n_samples);
    if (duration == 0.0) {
        w.degenerate = true;
        return w;
    }
    // partial slices carry the covered fraction so the integral is exact
    for (int k = 0; k < n_samples; ++k) {
        const double overlap = std::min(duration, (k + 1) * dt) - k * dt;
        if (overlap <= 0.0) break;
        w.samples[k] = amplitude * std::min(overlap, dt) / dt;
    }
    return w;
}

Waveform apply_transfer(const TransferFunction& tf, const Waveform& input) {
    tf.validate();
    if (!(input.dt > 0.0)) throw ValidationError("apply_transfer: input dt must be positive");
    if (input.samples.size() == 0) throw ValidationError("apply_transfer: empty input");

    Waveform out;
    out.dt = input.dt;
    out.degenerate = input.degenerate;
    VectorXcd acc = VectorXcd::Zero(input.samples.size());
    VectorXcd x;
    for (size_t i = 0; i < tf.poles.size(); ++i) {
        modal_response(tf.poles[i], input.samples, input.dt, x, nullptr);
        acc += tf.residues[i] * x;
    }
    out.samples = acc.real() + tf.direct * input.samples;
    return out;
}

TransferFitResult fit_transfer(const Waveform& input, const Waveform& target, int n_pairs,
                               int n_real, std::uint64_t seed) {
    if (n_pairs < 0 || n_real < 0 || n_pairs + n_real < 1)
        throw ValidationError("fit_transfer: need at least one pole");
    if (!(input.dt > 0.0) || input.dt != target.dt)
        throw ValidationError("fit_transfer: input and target must share the grid");
    if (input.samples.size() != target.samples.size())
        throw ValidationError("fit_transfer: input and target must share the grid");
    const int n = static_cast<int>(input.samples.size());
    if (input.degenerate || input.samples.cwiseAbs().maxCoeff() == 0.0)
        throw ValidationError("fit_transfer: degenerate input cannot identify a filter");
    if (n < 2 * (2 * n_pairs + n_real) + 2)
        throw ValidationError("fit_transfer: more parameters than samples support");

    const double dt = input.dt;
    const VectorXd& u = input.samples;
    const VectorXd& y = target.samples;
    const double T = dt * n;

    // frequency seeds from the target's padded spectrum
    ControlSequence wrap;
    wrap.n_slices = n;
    wrap.dt = dt;
    wrap.amplitudes = y;
    const Spectrum sp = spectrum(wrap, 0, 8);
    std::vector<std::pair<double, double>> peaks;  // (magnitude, rad/ps)
    for (int m = 1; m + 1 < sp.freq_ghz.size(); ++m)
        if (sp.magnitude[m] > sp.magnitude[m - 1] && sp.magnitude[m] >= sp.magnitude[m + 1])
            peaks.emplace_back(sp.magnitude[m], two_pi * sp.freq_ghz[m] / 1000.0);
    std::sort(peaks.begin(), peaks.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    const auto base_seed = [&](double re_pair) {
        PoleSet ps;
        for (int i = 0; i < n_pairs; ++i) {
            const double w = i < static_cast<int>(peaks.size()) ? peaks[i].second
                                                                : two_pi * (i + 1) / T;
            ps.pairs.push_back(cplx(re_pair, w));
        }
        for (int j = 0; j < n_real; ++j) ps.reals.push_back(-0.3 * (j + 1));
        return ps;
    };

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<PoleSet> seeds = {base_seed(-0.05), base_seed(-0.25)};
    for (int extra = 0; extra < 4; ++extra) {
        PoleSet ps = seeds[extra % 2];
        for (auto& s : ps.pairs)
            s = cplx(s.real() * std::exp(0.5 * gauss(rng)),
                     s.imag() * std::exp(0.15 * gauss(rng)));
        for (auto& s : ps.reals) s *= std::exp(0.5 * gauss(rng));
        seeds.push_back(ps);
    }
    for (auto& ps : seeds) clamp_poles(ps);

    double best_chi2 = std::numeric_limits<double>::infinity();
    PoleSet best;
    for (auto& ps : seeds) {
        PoleSet trial = ps;
        const double chi2 = refine_poles(trial, u, y, dt);
        if (chi2 < best_chi2) {
            best_chi2 = chi2;
            best = trial;
        }
    }

    const LinearSolve lin = solve_residues(best, u, y, dt);
    TransferFitResult out;
    out.tf = assemble(best, lin);
    out.residual = std::sqrt(lin.chi2 / n);
    out.tf.validate();
    return out;
}

std::vector<Stage> realize_stages(const TransferFunction& tf) {
    tf.validate();
    if (std::abs(tf.direct) > 1e-12)
        throw ValidationError("realize_stages: a direct term has no stage realization");

    std::vector<Stage> stages;
    std::vector<bool> used(tf.poles.size(), false);
    for (size_t i = 0; i < tf.poles.size(); ++i) {
        if (used[i]) continue;
        const cplx p = tf.poles[i];
        if (std::abs(p.imag()) <= im_tol) {
            Stage st;
            st.kind = Stage::RC;
            st.damping = -p.real();
            st.freq_ghz = 1000.0 * st.damping / two_pi;
            st.gain = std::abs(tf.residues[i]);
            st.phase_rad = tf.residues[i].real() < 0.0 ? std::numbers::pi : 0.0;
            stages.push_back(st);
            used[i] = true;
            continue;
        }
        // find the conjugate partner; keep the Im > 0 member
        size_t partner = i;
        for (size_t j = i + 1; j < tf.poles.size(); ++j)
            if (!used[j] &&
                std::abs(tf.poles[j] - std::conj(p)) < 1e-9 * (1.0 + std::abs(p))) {
                partner = j;
                break;
            }
        if (partner == i)
            throw ValidationError("realize_stages: complex pole without conjugate partner");
        const size_t plus = tf.poles[i].imag() > 0.0 ? i : partner;
        Stage st;
        st.kind = Stage::LCR;
        st.freq_ghz = 1000.0 * std::abs(tf.poles[plus].imag()) / two_pi;
        st.damping = -tf.poles[plus].real();
        st.gain = std::abs(tf.residues[plus]);
        st.phase_rad = std::arg(tf.residues[plus]);
        stages.push_back(st);
        used[i] = used[partner] = true;
    }
    std::sort(stages.begin(), stages.end(), [](const Stage& a, const Stage& b) {
        const double fa = a.kind == Stage::LCR ? a.freq_ghz : 0.0;
        const double fb = b.kind == Stage::LCR ? b.freq_ghz : 0.0;
        if (fa != fb) return fa > fb;
        if (a.damping != b.damping) return a.damping < b.damping;
        return a.gain > b.gain;
    });
    return stages;
}

TransferFunction stages_to_transfer(const std::vector<Stage>& stages) {
    TransferFunction tf;
    for (const auto& st : stages) {
        if (st.damping < 0.0) throw ValidationError("stages: damping must be nonnegative");
        if (st.gain < 0.0) throw ValidationError("stages: gain must be nonnegative");
        if (st.kind == Stage::LCR) {
            const double w = two_pi * st.freq_ghz / 1000.0;
            const cplx r = st.gain * std::exp(cplx(0.0, st.phase_rad));
            tf.poles.push_back(cplx(-st.damping, w));
            tf.residues.push_back(r);
            tf.poles.push_back(cplx(-st.damping, -w));
            tf.residues.push_back(std::conj(r));
        } else {
            tf.poles.push_back(cplx(-st.damping, 0.0));
            tf.residues.push_back(cplx(st.gain * std::cos(st.phase_rad), 0.0));
        }
    }
    tf.validate();
    return tf;
}

TransferFunction cascade_with_sample(const FourPole& filter, const FourPole& sample) {
    filter.z12.validate();
    filter.z22.validate();
    sample.z11.validate();
    sample.z12.validate();

    // scale s so the expanded coefficients stay O(1)
    double sigma = 1.0;
    for (const auto* tf : {&filter.z12, &filter.z22, &sample.z11, &sample.z12})
        for (const auto& p : tf->poles) sigma = std::max(sigma, std::abs(p));

    const Rational z12f = to_rational(filter.z12, sigma);
    const Rational z22f = to_rational(filter.z22, sigma);
    const Rational z11s = to_rational(sample.z11, sigma);
    const Rational z12s = to_rational(sample.z12, sigma);

    //   Z12 = z12s z12f / (z22f + z11s)
    //       = (N12s N12f D22f D11s) / (D12s D12f (N22f D11s + N11s D22f))
    Poly num = poly_mul(poly_mul(z12s.num, z12f.num), poly_mul(z22f.den, z11s.den));
    Poly den = poly_mul(poly_mul(z12s.den, z12f.den),
                        poly_add(poly_mul(z22f.num, z11s.den), poly_mul(z11s.num, z22f.den)));
    poly_trim(num);
    poly_trim(den);
    if (num.size() > den.size())
        throw NumericalError("cascade: improper transfer function");

    const std::vector<cplx> roots = poly_roots(den);
    const Poly dden = poly_derivative(den);

    TransferFunction out;
    if (num.size() == den.size())
        out.direct = (num.back() / den.back()).real();

    // residues by N(p)/D'(p); cancelled pole-zero pairs come out ~0 and are
    // dropped
    std::vector<cplx> poles, residues;
    double biggest = 0.0;
    for (const auto& root : roots) {
        const cplx r = poly_eval(num, root) / poly_eval(dden, root);
        poles.push_back(sigma * root);
        residues.push_back(sigma * r);
        biggest = std::max(biggest, std::abs(sigma * r));
    }
    std::vector<int> keep;
    for (int i = 0; i < static_cast<int>(poles.size()); ++i)
        if (std::abs(residues[i]) > std::max(1e-9 * biggest, 1e-12)) keep.push_back(i);

    // symmetrize: snap near-real poles, average conjugate pairs exactly
    std::vector<bool> done(keep.size(), false);
    for (size_t a = 0; a < keep.size(); ++a) {
        if (done[a]) continue;
        cplx p = poles[keep[a]], r = residues[keep[a]];
        if (std::abs(p.imag()) <= 1e-7 * (1.0 + std::abs(p))) {
            out.poles.push_back(cplx(p.real(), 0.0));
            out.residues.push_back(cplx(r.real(), 0.0));
            done[a] = true;
            continue;
        }
        size_t partner = a;
        double best = std::numeric_limits<double>::infinity();
        for (size_t b = a + 1; b < keep.size(); ++b) {
            if (done[b]) continue;
            const double d = std::abs(poles[keep[b]] - std::conj(p));
            if (d < best) {
                best = d;
                partner = b;
            }
        }
        if (partner == a || best > 1e-5 * (1.0 + std::abs(p)))
            throw NumericalError("cascade: conjugate symmetry lost in root extraction");
        const cplx pm = 0.5 * (p + std::conj(poles[keep[partner]]));
        const cplx rm = 0.5 * (r + std::conj(residues[keep[partner]]));
        out.poles.push_back(pm);
        out.residues.push_back(rm);
        out.poles.push_back(std::conj(pm));
        out.residues.push_back(std::conj(rm));
        done[a] = done[partner] = true;
    }

    for (const auto& p : out.poles)
        if (p.real() > 1e-9)
            throw NumericalError("cascade: unstable pole in the combined network");
    out.validate();
    return out;
}

}  // namespace qoc
