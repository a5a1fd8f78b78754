#pragma once

#include <string>
#include <vector>

#include "qoc/hamiltonian.hpp"
#include "qoc/spectrum.hpp"

namespace qoc {

// Classification of an eigenstate pair by the dominant bare-charge content:
//   Working        both states live in the computational {0,1}^N manifold
//   AllowedLeakage some island steps by one charge out of the manifold
//   Forbidden      some island steps by two or more charges
enum class TransitionClass { Working, AllowedLeakage, Forbidden };
std::string to_string(TransitionClass c);

struct Transition {
    int i = 0;            // eigenstate indices, ascending energy, i < f
    int f = 0;
    int channel = 0;      // gate charge that drives it
    double freq_ghz = 0;  // eigenenergy difference
    double element = 0;   // |<f| dH/dng |i>| / ec_channel, dimensionless
    TransitionClass cls = TransitionClass::Forbidden;
};

struct TransitionTable {
    std::vector<Transition> rows;           // sorted by (channel, i, f)
    std::vector<int> dominant_charge;       // per eigenstate: flattened charge
                                            // config, -1 if no component > 1/2
    VectorXd energies_ghz;
};

TransitionTable transition_table(const DeviceParams& p, const VectorXd& total_ng,
                                 const ChargeRange& range);

// Pulse-spectrum magnitude at each transition frequency times the normalized
// matrix element; one score per table row (per_channel[t.channel] is used).
struct OverlapScore {
    Transition transition;
    double overlap = 0.0;
};
std::vector<OverlapScore> spectral_overlap(const std::vector<Spectrum>& per_channel,
                                           const TransitionTable& table);

// Gate-charge sweep of the two-qubit transition structure; rows keyed by the
// row index the transition has in its node's table.  Nodes are processed in
// parallel; row order is deterministic.
struct SweepRow {
    double ng1 = 0.0, ng2 = 0.0;
    int transition_id = 0;
    double freq_ghz = 0.0;
    double element = 0.0;
};
std::vector<SweepRow> transition_sweep(const DeviceParams& p, const ChargeRange& range,
                                       const VectorXd& ng1_values,
                                       const VectorXd& ng2_values);

}  // namespace qoc
