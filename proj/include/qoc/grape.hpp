#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qoc/dynamics.hpp"

namespace qoc {

// Initial-guess policy.  RandomSmooth draws a seeded superposition of a few
// low-frequency harmonics (converged pulses then stay smooth enough for the
// harmonic fit and the filter synthesis to track them); RandomUniform is
// independent noise per slice; Supplied uses OptimizationConfig::init_sequence.
enum class InitPolicy { Zero, RandomUniform, RandomSmooth, Supplied };

// Box constraint on the total gate charge ng0 + dn.
struct BoxBounds {
    double ng_lo = 0.0;
    double ng_hi = 1.0;
};

struct OptimizationConfig {
    DeviceParams params;
    MatrixXcd target;
    int n_slices = 50;
    double dt = 1.1;  // ps
    double step_size = 1.0;           // line-search start, reset each iteration
    int max_iters = 10000;
    double fidelity_goal = 1.0 - 1e-9;
    double gradient_tol = 1e-9;       // on the sup-norm of the gradient
    InitPolicy init = InitPolicy::RandomSmooth;
    double init_amplitude = 0.05;     // dn_g scale of random initial guesses
    std::optional<MatrixXd> init_sequence;
    bool palindromic = false;
    std::optional<BoxBounds> bounds;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

enum class Termination { GoalReached, GradientTol, MaxIters, Stalled };
std::string to_string(Termination t);

struct OptimizationReport {
    ControlSequence sequence;
    std::vector<double> fidelity_history;  // start value plus one per iteration
    double fidelity = 0.0;
    double frobenius = 0.0;
    int iterations = 0;
    Termination termination = Termination::MaxIters;
    std::uint64_t seed = 0;
    // Measured, not serialized: reports of identical runs must be identical.
    double wall_seconds = 0.0;
};

// Phase-aligned quality |tr(target^dag U_T)| / dim.
double quality(const OptimizationConfig& cfg, const ControlSequence& seq);

// Exact gradient of quality with respect to every control amplitude, via the
// spectral derivative of each slice exponential.  gradient computes slices in
// parallel; gradient_reference is the serial loop; results are bit-identical.
MatrixXd gradient(const OptimizationConfig& cfg, const ControlSequence& seq);
MatrixXd gradient_reference(const OptimizationConfig& cfg, const ControlSequence& seq);

// Gradient ascent with a backtracking (and expanding) line search restarted
// from step_size every iteration.  Monotone fidelity history; non-convergence
// is a reported outcome, not an error.
OptimizationReport optimize(const OptimizationConfig& cfg);

// Independent restarts with seeds rng_seed + 0 ... n_restarts-1, run in
// parallel.  Highest final fidelity wins, ties to the lowest seed.  When
// all_fidelities is given it receives one final fidelity per restart.
OptimizationReport optimize_restarts(const OptimizationConfig& cfg, int n_restarts,
                                     std::vector<double>* all_fidelities = nullptr);

}  // namespace qoc
