#pragma once

#include <string>

#include "qoc/types.hpp"

namespace qoc {

// Named gate constructors in the |q1 q2 ... qN> basis (qubit 1 most
// significant, controls before targets):
//   "cnot"     4x4, swaps |10> and |11>
//   "toffoli"  8x8, swaps |110> and |111>
//   "swap"     4x4
//   "identity" 2^n x 2^n
// n_qubits must match the gate's arity (any n for "identity").
MatrixXcd standard_target(const std::string& name, int n_qubits);

}  // namespace qoc
