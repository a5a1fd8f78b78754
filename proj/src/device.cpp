#include "qoc/device.hpp"

#include <limits>
#include <string>

#include "qoc/errors.hpp"

namespace qoc {

namespace {
void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}
}  // namespace

void DeviceParams::validate() const {
    require(n_qubits >= 1, "n_qubits must be a positive integer");
    require(n_qubits <= 16, "n_qubits beyond 16 does not fit desk-scale memory");
    require(static_cast<int>(ec.size()) == n_qubits, "ec_ghz needs one entry per qubit");
    require(static_cast<int>(ej.size()) == n_qubits, "ej_ghz needs one entry per qubit");
    require(static_cast<int>(em.size()) == n_qubits - 1,
            "em_ghz needs one entry per adjacent pair (n_qubits - 1)");
    require(static_cast<int>(ng0.size()) == n_qubits, "ng0 needs one entry per qubit");
    for (int v = 0; v < n_qubits; ++v) {
        require(ec[v] > 0.0, "ec_ghz must be strictly positive (qubit " + std::to_string(v + 1) + ")");
        require(ej[v] >= 0.0, "ej_ghz must be nonnegative (qubit " + std::to_string(v + 1) + ")");
        require(ng0[v] >= 0.0 && ng0[v] <= 1.0,
                "ng0 must lie in [0, 1] (qubit " + std::to_string(v + 1) + ")");
    }
    for (int b = 0; b + 1 < n_qubits; ++b)
        require(em[b] >= 0.0, "em_ghz must be nonnegative (bond " + std::to_string(b + 1) + ")");
}

DurationBounds duration_bounds(const DeviceParams& p) {
    p.validate();
    constexpr double inf = std::numeric_limits<double>::infinity();
    DurationBounds b;
    b.t_zz.resize(p.n_qubits - 1);
    for (int bond = 0; bond + 1 < p.n_qubits; ++bond)
        b.t_zz[bond] = p.em[bond] > 0.0 ? 500.0 / p.em[bond] : inf;
    b.t_x.resize(p.n_qubits);
    for (int v = 0; v < p.n_qubits; ++v)
        b.t_x[v] = p.ej[v] > 0.0 ? 250.0 / p.ej[v] : inf;
    b.t_x_sequential = b.t_x.sum();
    return b;
}

}  // namespace qoc
