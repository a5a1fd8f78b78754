#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qoc/grape.hpp"
#include "qoc/hamiltonian.hpp"

namespace qoc {

struct AnalysisToggles {
    bool leakage = false;
    bool harmonics = false;
    bool spectrum = false;
    bool weyl = false;
    bool bloch = false;
    bool transitions = false;
    std::vector<int> harmonic_terms;  // per channel; empty -> 6 each
};

struct FilterSettings {
    int n_pairs = 8;
    int n_real = 2;
    double rect_ps = 1.1;
    int oversample = 8;  // output grid refinement relative to the slice grid
};

// Everything a CLI run needs, as read from one JSON document.
struct RunConfig {
    DeviceParams device;
    std::string target_name = "cnot";
    int n_slices = 50;
    double dt = 1.1;
    double step_size = 1.0;
    int max_iters = 10000;
    double fidelity_goal = 0.9999;
    double gradient_tol = 1e-9;
    std::string init = "smooth";  // smooth | uniform | zero
    double init_amplitude = 0.05;
    bool palindromic = false;
    std::optional<BoxBounds> bounds;
    int restarts = 8;
    // After the restarts, alternate harmonic projection and re-optimization
    // until the winner is expressible in analysis.harmonic_terms terms.
    bool harmonic_polish = false;
    ChargeRange range{-1, 2};
    AnalysisToggles analysis;
    FilterSettings filter;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
};

// Parse and validate; unknown target names, missing keys, and type errors
// all surface as ValidationError with the key named (JSON syntax errors keep
// the parser's line/column diagnostic).
RunConfig load_config(const std::string& path);

OptimizationConfig to_optimization(const RunConfig& rc);

}  // namespace qoc
