#pragma once

#include <json.hpp>

#include "qoc/grape.hpp"
#include "qoc/harmonics.hpp"
#include "qoc/transfer.hpp"

namespace qoc {

using json = nlohmann::json;

json transfer_to_json(const TransferFunction& tf);
TransferFunction transfer_from_json(const json& j);

json harmonic_fit_to_json(const HarmonicFit& fit);
HarmonicFit harmonic_fit_from_json(const json& j);

json report_to_json(const OptimizationReport& rep,
                    const std::vector<double>& restart_fidelities);

// Serialize with a trailing newline; IoError on failure.
void write_json_file(const std::string& path, const json& j);
json read_json_file(const std::string& path);

}  // namespace qoc
