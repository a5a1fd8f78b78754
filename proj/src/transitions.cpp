#include "qoc/transitions.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

#include "qoc/errors.hpp"

namespace qoc {

namespace {

// Per-island charges of a flattened extended-basis index.
void unflatten(const ChargeRange& range, int n_qubits, int index, int* charge) {
    const int m = range.levels();
    for (int v = n_qubits - 1; v >= 0; --v) {
        charge[v] = range.lo + index % m;
        index /= m;
    }
}

TransitionClass classify(const ChargeRange& range, int n_qubits, int dom_i, int dom_f) {
    // mixed states can't be pinned to a manifold; keep them in the middle class
    if (dom_i < 0 || dom_f < 0) return TransitionClass::AllowedLeakage;
    int ci[16], cf[16];
    unflatten(range, n_qubits, dom_i, ci);
    unflatten(range, n_qubits, dom_f, cf);
    bool working = true;
    int max_step = 0;
    for (int v = 0; v < n_qubits; ++v) {
        if (ci[v] < 0 || ci[v] > 1 || cf[v] < 0 || cf[v] > 1) working = false;
        max_step = std::max(max_step, std::abs(cf[v] - ci[v]));
    }
    if (working) return TransitionClass::Working;
    if (max_step >= 2) return TransitionClass::Forbidden;
    return TransitionClass::AllowedLeakage;
}

}  // namespace

std::string to_string(TransitionClass c) {
    switch (c) {
        case TransitionClass::Working: return "working";
        case TransitionClass::AllowedLeakage: return "allowed_leakage";
        case TransitionClass::Forbidden: return "forbidden";
    }
    return "unknown";
}

TransitionTable transition_table(const DeviceParams& p, const VectorXd& total_ng,
                                 const ChargeRange& range) {
    p.validate();
    range.validate();
    if (total_ng.size() != p.n_qubits)
        throw ValidationError("transition_table: total_ng must have one entry per qubit");

    const MatrixXd H = build_extended(p, range, total_ng);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
    if (es.info() != Eigen::Success)
        throw NumericalError("transition_table: eigendecomposition failed");
    const MatrixXd& V = es.eigenvectors();
    const int dim = static_cast<int>(H.rows());

    TransitionTable table;
    table.energies_ghz = es.eigenvalues() / rad_per_ghz;
    table.dominant_charge.resize(dim);
    for (int e = 0; e < dim; ++e) {
        int arg = 0;
        V.col(e).cwiseAbs2().maxCoeff(&arg);
        table.dominant_charge[e] = V.col(e).cwiseAbs2()[arg] > 0.5 ? arg : -1;
    }

    for (int channel = 0; channel < p.n_qubits; ++channel) {
        const VectorXd dir = extended_direction(p, range, total_ng, channel);
        const double norm = p.ec[channel] * rad_per_ghz;
        for (int i = 0; i < dim; ++i)
            for (int f = i + 1; f < dim; ++f) {
                Transition t;
                t.i = i;
                t.f = f;
                t.channel = channel;
                t.freq_ghz = table.energies_ghz[f] - table.energies_ghz[i];
                t.element =
                    std::abs(V.col(f).dot(dir.asDiagonal() * V.col(i))) / norm;
                t.cls = classify(range, p.n_qubits, table.dominant_charge[i],
                                 table.dominant_charge[f]);
                table.rows.push_back(t);
            }
    }
    return table;
}

std::vector<OverlapScore> spectral_overlap(const std::vector<Spectrum>& per_channel,
                                           const TransitionTable& table) {
    std::vector<OverlapScore> scores;
    scores.reserve(table.rows.size());
    for (const auto& t : table.rows) {
        if (t.channel < 0 || t.channel >= static_cast<int>(per_channel.size()))
            throw ValidationError("spectral_overlap: missing spectrum for a channel");
        OverlapScore sc;
        sc.transition = t;
        sc.overlap = interp_magnitude(per_channel[t.channel], std::abs(t.freq_ghz)) * t.element;
        scores.push_back(sc);
    }
    return scores;
}

std::vector<SweepRow> transition_sweep(const DeviceParams& p, const ChargeRange& range,
                                       const VectorXd& ng1_values, const VectorXd& ng2_values) {
    p.validate();
    range.validate();
    if (p.n_qubits != 2) throw ValidationError("transition_sweep: two-qubit devices only");
    if (ng1_values.size() == 0 || ng2_values.size() == 0)
        throw ValidationError("transition_sweep: empty grid");

    const int n1 = static_cast<int>(ng1_values.size());
    const int n2 = static_cast<int>(ng2_values.size());
    std::vector<std::vector<SweepRow>> per_node(static_cast<size_t>(n1) * n2);

    std::atomic<bool> failed{false};
#ifdef QOC_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
    for (int node = 0; node < n1 * n2; ++node) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            const double ng1 = ng1_values[node / n2];
            const double ng2 = ng2_values[node % n2];
            VectorXd total_ng(2);
            total_ng << ng1, ng2;
            const TransitionTable table = transition_table(p, total_ng, range);
            auto& rows = per_node[node];
            rows.reserve(table.rows.size());
            for (int r = 0; r < static_cast<int>(table.rows.size()); ++r)
                rows.push_back({ng1, ng2, r, table.rows[r].freq_ghz, table.rows[r].element});
        } catch (const std::exception&) {
            failed.store(true);
        }
    }
    if (failed.load()) throw NumericalError("transition_sweep: a grid node failed");

    std::vector<SweepRow> out;
    for (const auto& rows : per_node) out.insert(out.end(), rows.begin(), rows.end());
    return out;
}

}  // namespace qoc
