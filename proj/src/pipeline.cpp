#include "qoc/pipeline.hpp"

#include <algorithm>

namespace qoc {

PolishResult polish_harmonics(const OptimizationConfig& cfg, const OptimizationReport& start,
                              const std::vector<int>& n_terms, double chi2_goal,
                              int max_rounds) {
    PolishResult out;
    out.report = start;
    out.fit = fit_harmonics(start.sequence, n_terms, cfg.rng_seed);

    for (int round = 0; round < max_rounds; ++round) {
        const double worst = *std::max_element(out.fit.chi2.begin(), out.fit.chi2.end());
        if (worst <= chi2_goal && out.report.fidelity >= cfg.fidelity_goal) {
            out.reached = true;
            break;
        }
        OptimizationConfig leg = cfg;
        leg.init = InitPolicy::Supplied;
        leg.init_sequence = harmonic_sequence(out.fit, cfg.n_slices).amplitudes;
        OptimizationReport rep = optimize(leg);
        if (rep.fidelity < cfg.fidelity_goal) break;  // projection left the basin
        out.report = std::move(rep);
        out.fit = fit_harmonics(out.report.sequence, n_terms, cfg.rng_seed);
        out.rounds = round + 1;
    }
    if (!out.reached) {
        const double worst = *std::max_element(out.fit.chi2.begin(), out.fit.chi2.end());
        out.reached = worst <= chi2_goal && out.report.fidelity >= cfg.fidelity_goal;
    }
    return out;
}

}  // namespace qoc
