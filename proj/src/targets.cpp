#include "qoc/targets.hpp"

#include "qoc/errors.hpp"

namespace qoc {

MatrixXcd standard_target(const std::string& name, int n_qubits) {
    const auto permutation = [&](int a, int b, int arity) {
        if (n_qubits != arity)
            throw ValidationError("'" + name + "' is a " + std::to_string(arity) +
                                  "-qubit gate, got n_qubits = " + std::to_string(n_qubits));
        MatrixXcd U = MatrixXcd::Identity(1 << arity, 1 << arity);
        U(a, a) = U(b, b) = 0.0;
        U(a, b) = U(b, a) = 1.0;
        return U;
    };

    if (name == "identity") {
        if (n_qubits < 1) throw ValidationError("identity needs n_qubits >= 1");
        return MatrixXcd::Identity(1 << n_qubits, 1 << n_qubits);
    }
    if (name == "cnot") return permutation(2, 3, 2);      // |10> <-> |11>
    if (name == "swap") return permutation(1, 2, 2);      // |01> <-> |10>
    if (name == "toffoli") return permutation(6, 7, 3);   // |110> <-> |111>
    throw ValidationError("unknown target gate '" + name +
                          "' (expected cnot, swap, toffoli, or identity)");
}

}  // namespace qoc
