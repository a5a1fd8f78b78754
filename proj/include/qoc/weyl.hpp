#pragma once

#include "qoc/types.hpp"

namespace qoc {

// Canonical nonlocal coordinates (c1, c2, c3) of a two-qubit gate via the
// magic-basis construction, folded into the chamber
//   pi/2 >= c1 >= c2 >= c3 >= 0.
// Gates differing by single-qubit rotations share coordinates; the fold also
// identifies a gate with its complex conjugate (fixing the sign of c3).
// CNOT -> (pi/2, 0, 0), SWAP -> (pi/2, pi/2, pi/2), identity -> 0.
// Throws ValidationError unless U is 4x4 and unitary.
Vector3d weyl_coordinates(const MatrixXcd& U);

// Canonical representative exp(i/2 (c1 XX + c2 YY + c3 ZZ)).
MatrixXcd canonical_gate(const Vector3d& c);

}  // namespace qoc
