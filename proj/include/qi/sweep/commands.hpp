#pragma once

#include "qi/sweep/config.hpp"
#include "qi/sweep/table.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace qi::sweep {

/// P_e of PC1, PC2, CPC, the coherent-state reference and the QCB over M,
/// linear, log10 and as log10 difference to the reference.
DataTable error_curve(const RunConfig& cfg);

/// PC1 quantum advantage over a (P_dc, eta) grid with 0 dB / 1 dB contours
/// and the configured detector overlay.
DataTable qa_map(const RunConfig& cfg);

/// CPC quantum advantage over a (w1, w2) grid with the weighting lines traced.
DataTable weight_map(const RunConfig& cfg);

/// PC1 and PC2 P_e over M for each configured resolution and unbounded.
DataTable resolution_curve(const RunConfig& cfg);

/// Optimal mixer gain and the resulting photon numbers, per background level.
DataTable optimal_gain_table(const RunConfig& cfg);

/// Monte-Carlo estimates next to the analytic error probabilities.
DataTable mc_verify(const RunConfig& cfg);

/// Names accepted by run_command.
const std::vector<std::string>& command_names();

/// Dispatches by name; the table carries command, version and resolved config metadata.
DataTable run_command(std::string_view name, const RunConfig& cfg);

}  // namespace qi::sweep
