#pragma once

#include "qoc/device.hpp"

namespace qoc {

// Every generator here is real symmetric in the charge basis (sigma_x and
// sigma_z terms only) and is returned in rad/ps.  Basis ordering is
// |q1 q2 ... qN> with qubit 1 the most significant bit; |0> is the state
// with zero excess charge and sigma_z eigenvalue +1.

// Drift: qubit v carries sigma_z coefficient -(sum_adj em/4 + ec_v/2) and
// sigma_x coefficient -ej_v/2; each bond carries +em/4 sigma_z sigma_z.
MatrixXd build_drift(const DeviceParams& p);

// Control at total gate charge ng = ng0 + delta_ng: qubit v carries
// sigma_z coefficient (ec_v ng_v + sum_adj em/2 ng_adj).  Affine in each
// component of delta_ng.
MatrixXd build_control(const DeviceParams& p, const VectorXd& delta_ng);

// d H_control / d delta_ng_v: diagonal and independent of delta_ng.
// Moving one gate charge shifts its own qubit's sigma_z by ec_v and every
// neighbour's by em/2.  Returned as the diagonal, rad/ps.
VectorXd control_direction(const DeviceParams& p, int qubit);

// ---- extended charge space ------------------------------------------------

// Contiguous excess-charge range per island, e.g. {-1..2}.
struct ChargeRange {
    int lo = -1;
    int hi = 2;
    int levels() const { return hi - lo + 1; }
    void validate() const;  // must contain {0, 1}
};

// H_ext = sum_v ec_v (n_v - ng_v)^2 + sum_bonds em (n - ng)(n' - ng')
//         - sum_v ej_v/2 (|n><n+1| + h.c.)
// on the product of per-island charge ranges; real symmetric, rad/ps.
// Restricting to the {0,1} manifold reproduces drift + control up to a
// multiple of the identity.
MatrixXd build_extended(const DeviceParams& p, const ChargeRange& range,
                        const VectorXd& total_ng);

// d H_ext / d ng_v: diagonal, -2 ec_v (n_v - ng_v) - sum_adj em (n_adj - ng_adj).
VectorXd extended_direction(const DeviceParams& p, const ChargeRange& range,
                            const VectorXd& total_ng, int qubit);

// Position of computational basis state comp_index inside the extended space.
int embed_index(const ChargeRange& range, int n_qubits, int comp_index);

// dim_ext x 2^N selection matrix P with P(embed_index(c), c) = 1.
MatrixXd embedding(const ChargeRange& range, int n_qubits);

}  // namespace qoc
