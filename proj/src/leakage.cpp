#include "qoc/leakage.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "qoc/errors.hpp"
#include "qoc/hamiltonian.hpp"

namespace qoc {

namespace {

std::vector<MatrixXcd> extended_slices(const DeviceParams& p, const ControlSequence& seq,
                                       const ChargeRange& range) {
    p.validate();
    seq.validate();
    range.validate();
    if (seq.n_qubits() != p.n_qubits)
        throw ValidationError("pulse channel count must match n_qubits");

    std::vector<MatrixXcd> slices(seq.n_slices);
    std::atomic<int> bad{-1};
#ifdef QOC_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int k = 0; k < seq.n_slices; ++k) {
        if (bad.load(std::memory_order_relaxed) >= 0) continue;
        try {
            const VectorXd total_ng = p.ng0 + seq.amplitudes.row(k).transpose();
            slices[k] = expm_hermitian(build_extended(p, range, total_ng), seq.dt);
        } catch (const std::exception&) {
            int expected = -1;
            bad.compare_exchange_strong(expected, k);
        }
    }
    if (bad.load() >= 0)
        throw NumericalError("extended propagation failed at slice " + std::to_string(bad.load()));
    return slices;
}

std::string basis_label(int comp_index, int n_qubits) {
    std::string s = "|";
    for (int v = 0; v < n_qubits; ++v)
        s += ((comp_index >> (n_qubits - 1 - v)) & 1) ? '1' : '0';
    return s + ">";
}

}  // namespace

MatrixXcd propagate_extended(const DeviceParams& p, const ControlSequence& seq,
                             const ChargeRange& range) {
    const auto slices = extended_slices(p, seq, range);
    const int dim = static_cast<int>(slices.front().rows());
    MatrixXcd total = MatrixXcd::Identity(dim, dim);
    for (const auto& u : slices) total = u * total;
    return total;
}

LeakageReport leakage_report(const DeviceParams& p, const ControlSequence& seq,
                             const ChargeRange& range, const MatrixXcd& target) {
    const int dim_c = 1 << p.n_qubits;
    if (target.rows() != dim_c || target.cols() != dim_c)
        throw ValidationError("leakage_report: target dimension must be 2^n_qubits");

    const auto slices = extended_slices(p, seq, range);
    const int dim_ext = static_cast<int>(slices.front().rows());
    const MatrixXd P = embedding(range, p.n_qubits);

    LeakageReport rep;

    // probe states: computational basis, plus the Bell states for two qubits
    std::vector<VectorXcd> probes;
    for (int c = 0; c < dim_c; ++c) {
        VectorXcd psi = VectorXcd::Zero(dim_ext);
        psi[embed_index(range, p.n_qubits, c)] = 1.0;
        probes.push_back(std::move(psi));
        rep.state_labels.push_back(basis_label(c, p.n_qubits));
    }
    if (p.n_qubits == 2) {
        const double r = 1.0 / std::sqrt(2.0);
        const int i00 = embed_index(range, 2, 0), i01 = embed_index(range, 2, 1),
                  i10 = embed_index(range, 2, 2), i11 = embed_index(range, 2, 3);
        const struct {
            const char* label;
            int a, b;
            double sign;
        } bells[] = {{"Phi+", i00, i11, 1.0},
                     {"Phi-", i00, i11, -1.0},
                     {"Psi+", i01, i10, 1.0},
                     {"Psi-", i01, i10, -1.0}};
        for (const auto& bell : bells) {
            VectorXcd psi = VectorXcd::Zero(dim_ext);
            psi[bell.a] = r;
            psi[bell.b] = bell.sign * r;
            probes.push_back(std::move(psi));
            rep.state_labels.push_back(bell.label);
        }
    }

    const int n_probes = static_cast<int>(probes.size());
    MatrixXcd states(dim_ext, n_probes);
    for (int s = 0; s < n_probes; ++s) states.col(s) = probes[s];

    rep.leakage_curves.assign(n_probes, VectorXd(seq.n_slices + 1));
    const auto record = [&](int boundary) {
        for (int s = 0; s < n_probes; ++s) {
            const double inside = (P.transpose() * states.col(s)).squaredNorm();
            const double leak = std::max(0.0, 1.0 - inside);
            rep.leakage_curves[s][boundary] = leak;
            rep.max_leakage = std::max(rep.max_leakage, leak);
        }
    };

    MatrixXcd total = MatrixXcd::Identity(dim_ext, dim_ext);
    record(0);
    for (int k = 0; k < seq.n_slices; ++k) {
        states = slices[k] * states;
        total = slices[k] * total;
        record(k + 1);
    }

    rep.projected_fidelity =
        std::abs((target.adjoint() * (P.transpose() * total * P)).trace()) / dim_c;
    return rep;
}

}  // namespace qoc
