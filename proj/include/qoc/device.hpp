#pragma once

#include "qoc/types.hpp"

namespace qoc {

// Linear chain of Josephson charge qubits.  ec/ej are per qubit, em couples
// nearest neighbours (length n_qubits-1), ng0 is the static gate-charge
// working point.  All energies are E/h in GHz.
struct DeviceParams {
    int n_qubits = 0;
    VectorXd ec;
    VectorXd ej;
    VectorXd em;
    VectorXd ng0;

    int dim() const { return 1 << n_qubits; }

    // Throws ValidationError naming the offending field.  ec must be strictly
    // positive; ej and em may be zero (tunneling or coupling switched off)
    // but never negative; ng0 entries must lie in [0, 1].
    void validate() const;
};

// Minimal times of the primitive rotations a sequential gate decomposition
// would use, from the energy scales alone (energies GHz, times ps):
//   t_zz  = 1/(2 em)   quarter period of the zz coupling      = 500/em ps
//   t_x,v = 1/(4 ej_v) quarter period of tunneling on qubit v = 250/ej ps
// Zero energies give an infinite bound (that rotation is unavailable).
struct DurationBounds {
    VectorXd t_zz;          // per bond
    VectorXd t_x;           // per qubit
    double t_x_sequential;  // sum of t_x: x rotations executed one by one
};

DurationBounds duration_bounds(const DeviceParams& p);

}  // namespace qoc
