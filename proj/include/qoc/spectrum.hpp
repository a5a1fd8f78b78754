#pragma once

#include "qoc/sequence.hpp"

namespace qoc {

// One-sided zero-padded DFT magnitude of one control channel.  Frequencies
// in GHz; magnitudes |X_m|/sqrt(M) so the two-sided squared sum equals the
// time-domain energy sum x_k^2 (Parseval; both sums are stored).
struct Spectrum {
    VectorXd freq_ghz;
    VectorXd magnitude;
    double power_time = 0.0;
    double power_freq = 0.0;
};

Spectrum spectrum(const ControlSequence& seq, int channel, int pad_factor = 8);

// Linear interpolation of the magnitude at an arbitrary frequency
// (0 beyond Nyquist).
double interp_magnitude(const Spectrum& sp, double f_ghz);

}  // namespace qoc
