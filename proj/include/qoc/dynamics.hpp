#pragma once

#include <vector>

#include "qoc/hamiltonian.hpp"
#include "qoc/sequence.hpp"

namespace qoc {

// exp(-i H t) for real symmetric H (rad/ps, t in ps), via eigendecomposition.
// Exact to machine precision; the result is complex symmetric.
MatrixXcd expm_hermitian(const MatrixXd& H, double t);

// Spectral data of every slice, kept from one forward pass so the gradient
// can reuse it without re-diagonalizing.
struct SliceCache {
    std::vector<MatrixXd> V;     // eigenvectors
    std::vector<VectorXd> lam;   // eigenvalues, rad/ps
    std::vector<MatrixXcd> U;    // exp(-i H_k dt)
    MatrixXcd total;             // U_N ... U_1
};

// Slice Hamiltonians H_k = drift + control(dn(t_k)).  propagate computes the
// per-slice exponentials in parallel and reduces the product in strict slice
// order; propagate_reference is the plain serial loop.  Both are
// bit-identical for the same inputs.
SliceCache propagate(const DeviceParams& p, const ControlSequence& seq);
SliceCache propagate_reference(const DeviceParams& p, const ControlSequence& seq);

// Only the total propagator (line searches call this in a tight loop).
MatrixXcd propagate_unitary(const DeviceParams& p, const ControlSequence& seq);

// (1/dim)|tr(V^dag U)|: global-phase invariant, 1 iff U = e^{i phi} V.
double trace_fidelity(const MatrixXcd& U, const MatrixXcd& V);

// Frobenius norm ||U - V||_2.
double frobenius_distance(const MatrixXcd& U, const MatrixXcd& V);

// (<sx>, <sy>, <sz>) of the reduced density matrix of one qubit.
Vector3d reduced_bloch(const VectorXcd& psi, int qubit, int n_qubits);

struct Trajectory {
    VectorXd t;                          // n_slices + 1 boundaries, ps
    std::vector<VectorXcd> states;
    std::vector<MatrixXcd> propagators;  // cumulative U(t_k)
    bool extended = false;
};

// Cumulative evolution recorded at every slice boundary.  In extended mode
// the initial state may be given in the computational space (it is embedded)
// or directly in the extended space.
Trajectory simulate_trajectory(const DeviceParams& p, const ControlSequence& seq,
                               const VectorXcd& initial, bool extended,
                               const ChargeRange& range = {});

}  // namespace qoc
