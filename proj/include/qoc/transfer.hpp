#pragma once

#include <cstdint>
#include <vector>

#include "qoc/types.hpp"

namespace qoc {

// Rational four-pole element in pole/residue form,
//   Z(s) = direct + sum_i r_i / (s - s_i),   s in 1/ps.
// Stable: Re(s_i) <= 0.  Complex poles come in conjugate pairs with
// conjugate residues so the impulse response is real.
struct TransferFunction {
    std::vector<cplx> poles;
    std::vector<cplx> residues;
    double direct = 0.0;

    void validate() const;  // stability + conjugate pairing
};

struct Waveform {
    double dt = 0.0;  // ps
    VectorXd samples;
    bool degenerate = false;

    double duration() const { return dt * static_cast<double>(samples.size()); }
};

// Rectangle of the given duration starting at t = 0 on an n_samples grid.
// Zero duration gives a zero waveform flagged degenerate.
Waveform rect_pulse(double duration, double amplitude, double dt, int n_samples);

// Response to a PWC input, marching the modal states exactly through each
// slice (z -> e^{s dt} z + u (e^{s dt} - 1)/s); no FFT wraparound, exact on
// the grid up to roundoff.  Rejects unstable poles.
Waveform apply_transfer(const TransferFunction& tf, const Waveform& input);

// Least-squares fit of apply_transfer(tf, input) to target over pole
// positions and residues: residues solved linearly at every step, poles moved
// by Levenberg-Marquardt under a Re(s) <= 0 clamp, multi-start seeded from
// the target's spectral peaks.  residual is the rms misfit.
struct TransferFitResult {
    TransferFunction tf;
    double residual = 0.0;
};
TransferFitResult fit_transfer(const Waveform& input, const Waveform& target,
                               int n_pairs, int n_real, std::uint64_t seed = 0);

// One realizable filter section per pole (pair): an LCR loop for each
// conjugate pair, an RC low-pass for each real pole.
struct Stage {
    enum Kind { LCR, RC };
    Kind kind = RC;
    double freq_ghz = 0.0;   // resonant (LCR: 1000 |Im s|/2pi) or cutoff (RC: -1000 Re s/2pi)
    double damping = 0.0;    // -Re s, 1/ps
    double gain = 0.0;       // |residue| (of the +Im member for pairs)
    double phase_rad = 0.0;  // arg residue
};

// Ordered by |Im(s)| descending; bijective against stages_to_transfer.
std::vector<Stage> realize_stages(const TransferFunction& tf);
TransferFunction stages_to_transfer(const std::vector<Stage>& stages);

// Impedance parameters of a reciprocal four-pole (z21 = z12).
struct FourPole {
    TransferFunction z11, z12, z22;
};

// Series combination of the shaping filter with the sample's input port:
//   Z12_total = Z12_sample * Z12_filter / (Z22_filter + Z11_sample),
// re-expanded into pole/residue form; the result must remain stable.
TransferFunction cascade_with_sample(const FourPole& filter, const FourPole& sample);

}  // namespace qoc
