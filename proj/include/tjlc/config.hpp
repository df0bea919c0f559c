#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tjlc/metrics.hpp"
#include "tjlc/solver.hpp"

namespace tjlc {

/// Solver parameters plus the metric knobs carried by the JSON config
/// ("schema": 1; keys alpha, tau, eta, nu, vartheta, c, scheme, epsilon,
/// max_iters, peak, ergas_denominator).
struct ToolConfig {
    SolverConfig solver;
    double peak = 255.0;
    ErgasDenominator ergas_denominator = ErgasDenominator::MeanSquared;
};

ToolConfig load_config(const std::filesystem::path& path);
void save_config(const ToolConfig& cfg, const std::filesystem::path& path);

/// Shipped presets: mri, clay, chart_and_stuffed_toy, balloons, cd, cv.
std::optional<ToolConfig> preset_config(std::string_view name);
std::vector<std::string> preset_names();

/// Completion report ("schema": 1; iterations, converged, re_history,
/// joint_rank). No timestamps, so reports are byte-reproducible.
std::string completion_report_json(const CompletionResult& result);

/// Metric report as JSON and as an aligned text table.
std::string metric_report_json(const MetricReport& report);
std::string metric_report_table(const MetricReport& report);

}  // namespace tjlc
