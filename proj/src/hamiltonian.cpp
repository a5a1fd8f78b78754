#include "qoc/hamiltonian.hpp"

#include <string>

#include "qoc/errors.hpp"

namespace qoc {

namespace {

// sigma_z diagonal entry of qubit v (0-based) in basis state idx,
// qubit 1 = most significant bit, |0> -> +1.
inline double zsign(int idx, int qubit, int n_qubits) {
    const int bit = (idx >> (n_qubits - 1 - qubit)) & 1;
    return bit ? -1.0 : 1.0;
}

MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
    MatrixXd r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

// op acting on one site of an n-site chain of local dimension m.
MatrixXd site_op(const MatrixXd& op, int site, int n_sites) {
    const Eigen::Index m = op.rows();
    MatrixXd r = MatrixXd::Identity(1, 1);
    for (int s = 0; s < n_sites; ++s)
        r = kron(r, s == site ? op : MatrixXd::Identity(m, m));
    return r;
}

}  // namespace

MatrixXd build_drift(const DeviceParams& p) {
    p.validate();
    const int dim = p.dim();
    MatrixXd H = MatrixXd::Zero(dim, dim);

    // sigma_z and sigma_z x sigma_z terms are diagonal
    for (int idx = 0; idx < dim; ++idx) {
        double d = 0.0;
        for (int v = 0; v < p.n_qubits; ++v) {
            double em_adj = 0.0;
            if (v > 0) em_adj += p.em[v - 1];
            if (v + 1 < p.n_qubits) em_adj += p.em[v];
            d += -(em_adj / 4.0 + p.ec[v] / 2.0) * zsign(idx, v, p.n_qubits);
        }
        for (int b = 0; b + 1 < p.n_qubits; ++b)
            d += p.em[b] / 4.0 * zsign(idx, b, p.n_qubits) * zsign(idx, b + 1, p.n_qubits);
        H(idx, idx) = d;
    }

    // -ej/2 sigma_x couples idx with idx ^ bit
    for (int idx = 0; idx < dim; ++idx)
        for (int v = 0; v < p.n_qubits; ++v) {
            const int other = idx ^ (1 << (p.n_qubits - 1 - v));
            H(idx, other) += -p.ej[v] / 2.0;
        }

    return H * rad_per_ghz;
}

MatrixXd build_control(const DeviceParams& p, const VectorXd& delta_ng) {
    p.validate();
    if (delta_ng.size() != p.n_qubits)
        throw ValidationError("delta_ng needs one entry per qubit");
    const VectorXd ng = p.ng0 + delta_ng;
    const int dim = p.dim();
    MatrixXd H = MatrixXd::Zero(dim, dim);
    for (int idx = 0; idx < dim; ++idx) {
        double d = 0.0;
        for (int v = 0; v < p.n_qubits; ++v) {
            double c = p.ec[v] * ng[v];
            if (v > 0) c += p.em[v - 1] / 2.0 * ng[v - 1];
            if (v + 1 < p.n_qubits) c += p.em[v] / 2.0 * ng[v + 1];
            d += c * zsign(idx, v, p.n_qubits);
        }
        H(idx, idx) = d;
    }
    return H * rad_per_ghz;
}

VectorXd control_direction(const DeviceParams& p, int qubit) {
    p.validate();
    if (qubit < 0 || qubit >= p.n_qubits)
        throw ValidationError("control_direction: qubit index out of range");
    const int dim = p.dim();
    VectorXd d(dim);
    for (int idx = 0; idx < dim; ++idx) {
        double c = p.ec[qubit] * zsign(idx, qubit, p.n_qubits);
        if (qubit > 0) c += p.em[qubit - 1] / 2.0 * zsign(idx, qubit - 1, p.n_qubits);
        if (qubit + 1 < p.n_qubits) c += p.em[qubit] / 2.0 * zsign(idx, qubit + 1, p.n_qubits);
        d[idx] = c;
    }
    return d * rad_per_ghz;
}

void ChargeRange::validate() const {
    if (lo > 0 || hi < 1)
        throw ValidationError("charge range must contain the computational charges {0, 1}");
}

MatrixXd build_extended(const DeviceParams& p, const ChargeRange& range,
                        const VectorXd& total_ng) {
    p.validate();
    range.validate();
    if (total_ng.size() != p.n_qubits)
        throw ValidationError("total_ng needs one entry per qubit");

    const int m = range.levels();
    const int n = p.n_qubits;

    MatrixXd nhat = MatrixXd::Zero(m, m);
    for (int l = 0; l < m; ++l) nhat(l, l) = range.lo + l;
    MatrixXd hop = MatrixXd::Zero(m, m);
    for (int l = 0; l + 1 < m; ++l) hop(l, l + 1) = hop(l + 1, l) = 1.0;
    const MatrixXd eye = MatrixXd::Identity(m, m);

    int dim = 1;
    for (int s = 0; s < n; ++s) dim *= m;
    MatrixXd H = MatrixXd::Zero(dim, dim);

    for (int v = 0; v < n; ++v) {
        const MatrixXd shifted = nhat - total_ng[v] * eye;
        H += p.ec[v] * site_op(shifted * shifted, v, n);
        H += -p.ej[v] / 2.0 * site_op(hop, v, n);
    }
    for (int b = 0; b + 1 < n; ++b) {
        const MatrixXd sa = nhat - total_ng[b] * eye;
        const MatrixXd sb = nhat - total_ng[b + 1] * eye;
        MatrixXd pair = MatrixXd::Identity(1, 1);
        for (int s = 0; s < n; ++s)
            pair = kron(pair, s == b ? sa : (s == b + 1 ? sb : eye));
        H += p.em[b] * pair;
    }
    return H * rad_per_ghz;
}

VectorXd extended_direction(const DeviceParams& p, const ChargeRange& range,
                            const VectorXd& total_ng, int qubit) {
    p.validate();
    range.validate();
    if (qubit < 0 || qubit >= p.n_qubits)
        throw ValidationError("extended_direction: qubit index out of range");
    const int m = range.levels();
    const int n = p.n_qubits;
    int dim = 1;
    for (int s = 0; s < n; ++s) dim *= m;

    VectorXd d = VectorXd::Zero(dim);
    for (int idx = 0; idx < dim; ++idx) {
        // charge of site s in basis state idx (site 0 most significant)
        int rest = idx;
        int charge[16];
        for (int s = n - 1; s >= 0; --s) {
            charge[s] = range.lo + rest % m;
            rest /= m;
        }
        double val = -2.0 * p.ec[qubit] * (charge[qubit] - total_ng[qubit]);
        if (qubit > 0) val += -p.em[qubit - 1] * (charge[qubit - 1] - total_ng[qubit - 1]);
        if (qubit + 1 < n) val += -p.em[qubit] * (charge[qubit + 1] - total_ng[qubit + 1]);
        d[idx] = val;
    }
    return d * rad_per_ghz;
}

int embed_index(const ChargeRange& range, int n_qubits, int comp_index) {
    range.validate();
    const int m = range.levels();
    int idx = 0;
    for (int v = 0; v < n_qubits; ++v) {
        const int bit = (comp_index >> (n_qubits - 1 - v)) & 1;
        idx = idx * m + (bit - range.lo);
    }
    return idx;
}

MatrixXd embedding(const ChargeRange& range, int n_qubits) {
    const int m = range.levels();
    int dim_ext = 1;
    for (int s = 0; s < n_qubits; ++s) dim_ext *= m;
    MatrixXd P = MatrixXd::Zero(dim_ext, 1 << n_qubits);
    for (int c = 0; c < (1 << n_qubits); ++c)
        P(embed_index(range, n_qubits, c), c) = 1.0;
    return P;
}

}  // namespace qoc
