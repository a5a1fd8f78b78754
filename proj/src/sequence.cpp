#include "qoc/sequence.hpp"

#include "qoc/errors.hpp"

namespace qoc {

void ControlSequence::validate() const {
    if (n_slices < 1) throw ValidationError("sequence needs at least one slice");
    if (!(dt > 0.0)) throw ValidationError("slice duration dt must be positive");
    if (amplitudes.rows() != n_slices)
        throw ValidationError("amplitudes must have one row per slice");
    if (amplitudes.cols() < 1)
        throw ValidationError("amplitudes must have one column per qubit");
    if (!amplitudes.allFinite())
        throw ValidationError("amplitudes contain non-finite values");
}

ControlSequence reversed(const ControlSequence& s) {
    ControlSequence r = s;
    r.amplitudes = s.amplitudes.colwise().reverse();
    return r;
}

ControlSequence concatenated(const ControlSequence& a, const ControlSequence& b) {
    a.validate();
    b.validate();
    if (a.dt != b.dt) throw ValidationError("concatenation needs equal slice durations");
    if (a.n_qubits() != b.n_qubits())
        throw ValidationError("concatenation needs equal qubit counts");
    ControlSequence r;
    r.n_slices = a.n_slices + b.n_slices;
    r.dt = a.dt;
    r.amplitudes.resize(r.n_slices, a.n_qubits());
    r.amplitudes.topRows(a.n_slices) = a.amplitudes;
    r.amplitudes.bottomRows(b.n_slices) = b.amplitudes;
    return r;
}

bool is_palindromic(const ControlSequence& s) {
    for (int k = 0; k < s.n_slices / 2; ++k)
        if (s.amplitudes.row(k) != s.amplitudes.row(s.n_slices - 1 - k)) return false;
    return true;
}

}  // namespace qoc
