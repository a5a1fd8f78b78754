#pragma once

#include "qoc/types.hpp"

namespace qoc {

// Piecewise-constant control in gate-charge deviations.  Row k of amplitudes
// holds the per-qubit dn_g applied over [k*dt, (k+1)*dt).
struct ControlSequence {
    int n_slices = 0;
    double dt = 0.0;  // ps
    MatrixXd amplitudes;  // n_slices x n_qubits

    int n_qubits() const { return static_cast<int>(amplitudes.cols()); }
    double duration() const { return n_slices * dt; }
    double slice_mid(int k) const { return (k + 0.5) * dt; }

    void validate() const;
};

ControlSequence reversed(const ControlSequence& s);
ControlSequence concatenated(const ControlSequence& a, const ControlSequence& b);

// Exact mirror symmetry dn(t_k) == dn(t_{N-1-k}).
bool is_palindromic(const ControlSequence& s);

}  // namespace qoc
