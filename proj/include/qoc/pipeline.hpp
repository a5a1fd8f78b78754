#pragma once

#include <vector>

#include "qoc/grape.hpp"
#include "qoc/harmonics.hpp"

namespace qoc {

// Alternating refinement between the optimizer and the harmonic model class:
// project the pulse onto an n_terms-per-channel harmonic fit, re-optimize
// from the projection, repeat until the converged pulse itself fits within
// chi2_goal per channel (or rounds run out).  Each leg is a plain optimize()
// run with a supplied initial sequence; the final report still satisfies the
// config's fidelity goal whenever `reached` is true.  The landscape's optima
// form a continuum, and this walks along it toward the harmonic submanifold.
struct PolishResult {
    OptimizationReport report;
    HarmonicFit fit;
    bool reached = false;
    int rounds = 0;
};

PolishResult polish_harmonics(const OptimizationConfig& cfg, const OptimizationReport& start,
                              const std::vector<int>& n_terms, double chi2_goal = 0.05,
                              int max_rounds = 40);

}  // namespace qoc
