#pragma once

#include <cstdint>
#include <vector>

#include "qoc/sequence.hpp"

namespace qoc {

// One cosine term a * cos(2 pi omega t / T + phi).  Amplitudes follow the
// percent convention (gate charge x 100); omega counts cycles per total
// duration T; phi in rad.  Term 0 of each channel is the DC offset with
// omega = phi = 0.
struct HarmonicTerm {
    double a = 0.0;
    double omega = 0.0;
    double phi = 0.0;
};

struct HarmonicFit {
    std::vector<std::vector<HarmonicTerm>> channels;
    double T = 0.0;             // ps
    std::vector<double> chi2;   // per channel, percent^2 units

    void validate() const;
};

// Gate-charge deviation (dimensionless, NOT percent) of one channel at t.
double eval_harmonics(const HarmonicFit& fit, int channel, double t);
VectorXd eval_harmonics_all(const HarmonicFit& fit, double t);

// Sample a fit onto an n_slices PWC grid at slice midpoints.
ControlSequence harmonic_sequence(const HarmonicFit& fit, int n_slices);

// Nonlinear least squares of the model above to the slice-midpoint samples,
// channel by channel: frequencies move under Levenberg-Marquardt with the
// linear (amplitude/phase) subproblem solved exactly at every step;
// multi-start over DFT-peak and greedy-peeling frequency seeds.  chi2 is
// summed over slices in percent units.  Gauge: omega >= 0, phi in [0, 2pi).
HarmonicFit fit_harmonics(const ControlSequence& seq, const std::vector<int>& n_terms,
                          std::uint64_t seed = 0);

}  // namespace qoc
