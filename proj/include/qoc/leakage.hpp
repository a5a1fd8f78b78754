#pragma once

#include <string>
#include <vector>

#include "qoc/dynamics.hpp"

namespace qoc {

struct LeakageReport {
    // (1/2^N)|tr(target^dag P^T U_ext P)| on the computational subspace.
    double projected_fidelity = 0.0;
    // Worst population outside the computational manifold, over all probe
    // states and all slice boundaries.
    double max_leakage = 0.0;
    std::vector<std::string> state_labels;
    std::vector<VectorXd> leakage_curves;  // per state, per slice boundary
};

// Full extended-space propagator of the pulse (total gate charge
// ng0 + dn enters the charging terms slice by slice).
MatrixXcd propagate_extended(const DeviceParams& p, const ControlSequence& seq,
                             const ChargeRange& range);

// Probe states: every computational basis state, plus the four Bell states
// for two qubits.
LeakageReport leakage_report(const DeviceParams& p, const ControlSequence& seq,
                             const ChargeRange& range, const MatrixXcd& target);

}  // namespace qoc
