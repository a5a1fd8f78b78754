#include "qoc/dynamics.hpp"

#include <atomic>
#include <string>

#include "qoc/errors.hpp"

namespace qoc {

namespace {

struct EigPair {
    MatrixXd V;
    VectorXd lam;
};

EigPair eig_sym(const MatrixXd& H) {
    if (H.rows() != H.cols()) throw ValidationError("generator must be square");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigendecomposition failed on a " + std::to_string(H.rows()) +
                             "x" + std::to_string(H.cols()) + " generator");
    return {es.eigenvectors(), es.eigenvalues()};
}

MatrixXcd unitary_from_eig(const EigPair& e, double t) {
    const VectorXcd phases = (e.lam.array().cast<cplx>() * cplx(0.0, -t)).exp().matrix();
    return e.V * phases.asDiagonal() * e.V.transpose();
}

// Slice Hamiltonians share the drift; only the control diagonal moves.
MatrixXd slice_hamiltonian(const MatrixXd& drift, const DeviceParams& p,
                           const ControlSequence& seq, int k) {
    return drift + build_control(p, seq.amplitudes.row(k).transpose());
}

template <bool Parallel>
SliceCache propagate_impl(const DeviceParams& p, const ControlSequence& seq) {
    p.validate();
    seq.validate();
    if (seq.n_qubits() != p.n_qubits)
        throw ValidationError("sequence qubit count does not match the device");

    const MatrixXd drift = build_drift(p);
    const int n = seq.n_slices;
    SliceCache cache;
    cache.V.resize(n);
    cache.lam.resize(n);
    cache.U.resize(n);

    std::atomic<int> bad_slice{-1};
#ifdef QOC_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (Parallel)
#endif
    for (int k = 0; k < n; ++k) {
        if (bad_slice.load(std::memory_order_relaxed) >= 0) continue;
        try {
            const EigPair e = eig_sym(slice_hamiltonian(drift, p, seq, k));
            cache.U[k] = unitary_from_eig(e, seq.dt);
            cache.V[k] = e.V;
            cache.lam[k] = e.lam;
        } catch (const std::exception&) {
            int expected = -1;
            bad_slice.compare_exchange_strong(expected, k);
        }
    }
    if (bad_slice.load() >= 0)
        throw NumericalError("propagation failed at slice " + std::to_string(bad_slice.load()));

    // strict slice order keeps parallel and serial results bit-identical
    cache.total = MatrixXcd::Identity(p.dim(), p.dim());
    for (int k = 0; k < n; ++k) cache.total = cache.U[k] * cache.total;
    return cache;
}

}  // namespace

MatrixXcd expm_hermitian(const MatrixXd& H, double t) {
    return unitary_from_eig(eig_sym(H), t);
}

SliceCache propagate(const DeviceParams& p, const ControlSequence& seq) {
    return propagate_impl<true>(p, seq);
}

SliceCache propagate_reference(const DeviceParams& p, const ControlSequence& seq) {
    return propagate_impl<false>(p, seq);
}

MatrixXcd propagate_unitary(const DeviceParams& p, const ControlSequence& seq) {
    p.validate();
    seq.validate();
    if (seq.n_qubits() != p.n_qubits)
        throw ValidationError("sequence qubit count does not match the device");
    const MatrixXd drift = build_drift(p);
    MatrixXcd total = MatrixXcd::Identity(p.dim(), p.dim());
    for (int k = 0; k < seq.n_slices; ++k) {
        const EigPair e = eig_sym(slice_hamiltonian(drift, p, seq, k));
        total = unitary_from_eig(e, seq.dt) * total;
    }
    return total;
}

double trace_fidelity(const MatrixXcd& U, const MatrixXcd& V) {
    if (U.rows() != V.rows() || U.cols() != V.cols() || U.rows() != U.cols())
        throw ValidationError("trace_fidelity needs two square matrices of equal size");
    return std::abs((V.adjoint() * U).trace()) / static_cast<double>(U.rows());
}

double frobenius_distance(const MatrixXcd& U, const MatrixXcd& V) {
    if (U.rows() != V.rows() || U.cols() != V.cols())
        throw ValidationError("frobenius_distance needs matrices of equal size");
    return (U - V).norm();
}

Vector3d reduced_bloch(const VectorXcd& psi, int qubit, int n_qubits) {
    if (psi.size() != (Eigen::Index(1) << n_qubits))
        throw ValidationError("state dimension must be 2^n_qubits");
    if (qubit < 0 || qubit >= n_qubits)
        throw ValidationError("reduced_bloch: qubit index out of range");

    const int bit = n_qubits - 1 - qubit;
    double rho00 = 0.0, rho11 = 0.0;
    cplx rho01 = 0.0;
    for (int idx = 0; idx < (1 << n_qubits); ++idx) {
        if ((idx >> bit) & 1) continue;
        const int mate = idx | (1 << bit);
        rho00 += std::norm(psi[idx]);
        rho11 += std::norm(psi[mate]);
        rho01 += psi[idx] * std::conj(psi[mate]);
    }
    return {2.0 * rho01.real(), -2.0 * rho01.imag(), rho00 - rho11};
}

Trajectory simulate_trajectory(const DeviceParams& p, const ControlSequence& seq,
                               const VectorXcd& initial, bool extended,
                               const ChargeRange& range) {
    p.validate();
    seq.validate();

    VectorXcd psi;
    int dim = 0;

    if (extended) {
        range.validate();
        dim = 1;
        for (int s = 0; s < p.n_qubits; ++s) dim *= range.levels();
        if (initial.size() == p.dim()) {
            psi = embedding(range, p.n_qubits) * initial;
        } else if (initial.size() == dim) {
            psi = initial;
        } else {
            throw ValidationError("initial state must live in the computational or extended space");
        }
    } else {
        dim = p.dim();
        if (initial.size() != dim)
            throw ValidationError("initial state dimension must be 2^n_qubits");
        psi = initial;
    }
    if (std::abs(psi.norm() - 1.0) > 1e-10)
        throw ValidationError("initial state must be normalized");

    Trajectory traj;
    traj.extended = extended;
    traj.t.resize(seq.n_slices + 1);
    traj.states.reserve(seq.n_slices + 1);
    traj.propagators.reserve(seq.n_slices + 1);

    MatrixXcd U = MatrixXcd::Identity(dim, dim);
    traj.t[0] = 0.0;
    traj.states.push_back(psi);
    traj.propagators.push_back(U);

    const MatrixXd comp_drift = extended ? MatrixXd() : build_drift(p);
    for (int k = 0; k < seq.n_slices; ++k) {
        MatrixXd H;
        if (extended) {
            const VectorXd total_ng = p.ng0 + seq.amplitudes.row(k).transpose();
            H = build_extended(p, range, total_ng);
        } else {
            H = slice_hamiltonian(comp_drift, p, seq, k);
        }
        const MatrixXcd Uk = expm_hermitian(H, seq.dt);
        U = Uk * U;
        psi = Uk * psi;
        traj.t[k + 1] = (k + 1) * seq.dt;
        traj.states.push_back(psi);
        traj.propagators.push_back(U);
    }
    return traj;
}

}  // namespace qoc
