#include "qoc/spectrum.hpp"

#include <cmath>
#include <numbers>

#include "qoc/errors.hpp"

namespace qoc {

Spectrum spectrum(const ControlSequence& seq, int channel, int pad_factor) {
    seq.validate();
    if (channel < 0 || channel >= seq.n_qubits())
        throw ValidationError("spectrum: channel out of range");
    if (pad_factor < 1) throw ValidationError("spectrum: pad_factor must be positive");

    const int n = seq.n_slices;
    const int m_total = n * pad_factor;
    const VectorXd x = seq.amplitudes.col(channel);

    // direct DFT of the zero-padded samples; sizes here stay in the thousands
    const int n_bins = m_total / 2 + 1;
    Spectrum sp;
    sp.freq_ghz.resize(n_bins);
    sp.magnitude.resize(n_bins);
    sp.power_time = x.squaredNorm();
    sp.power_freq = 0.0;

    const double w = 2.0 * std::numbers::pi / m_total;
    const double root = std::sqrt(static_cast<double>(m_total));
    for (int m = 0; m < m_total; ++m) {
        cplx acc(0.0, 0.0);
        for (int k = 0; k < n; ++k) acc += x[k] * std::exp(cplx(0.0, -w * m * k));
        const double mag2 = std::norm(acc);
        sp.power_freq += mag2 / m_total;
        if (m < n_bins) {
            sp.freq_ghz[m] = 1000.0 * m / (m_total * seq.dt);
            sp.magnitude[m] = std::sqrt(mag2) / root;
        }
    }
    return sp;
}

double interp_magnitude(const Spectrum& sp, double f_ghz) {
    if (f_ghz < 0.0) throw ValidationError("interp_magnitude: frequency must be nonnegative");
    const int n = static_cast<int>(sp.freq_ghz.size());
    if (n == 0) throw ValidationError("interp_magnitude: empty spectrum");
    if (f_ghz > sp.freq_ghz[n - 1]) return 0.0;
    if (n == 1) return sp.magnitude[0];
    const double df = sp.freq_ghz[1] - sp.freq_ghz[0];
    const int lo = std::min(static_cast<int>(f_ghz / df), n - 2);
    const double frac = (f_ghz - sp.freq_ghz[lo]) / df;
    return sp.magnitude[lo] * (1.0 - frac) + sp.magnitude[lo + 1] * frac;
}

}  // namespace qoc
