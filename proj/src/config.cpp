#include "tjlc/config.hpp"

#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace tjlc {

namespace {

using nlohmann::json;

std::string scheme_name(WeightScheme s) {
    return s == WeightScheme::Normalized ? "normalized" : "raw";
}

WeightScheme scheme_from(const std::string& s) {
    if (s == "normalized") return WeightScheme::Normalized;
    if (s == "raw") return WeightScheme::Raw;
    throw std::invalid_argument("unknown weight scheme: " + s);
}

std::string ergas_name(ErgasDenominator d) {
    return d == ErgasDenominator::MeanSquared ? "mean2" : "mean";
}

ErgasDenominator ergas_from(const std::string& s) {
    if (s == "mean2") return ErgasDenominator::MeanSquared;
    if (s == "mean") return ErgasDenominator::Mean;
    throw std::invalid_argument("unknown ergas denominator: " + s);
}

json to_json(const ToolConfig& cfg) {
    return json{{"schema", 1},
                {"alpha", cfg.solver.alpha},
                {"tau", cfg.solver.tau},
                {"eta", cfg.solver.eta},
                {"nu", cfg.solver.lc.nu},
                {"vartheta", cfg.solver.lc.vartheta},
                {"c", cfg.solver.lc.c},
                {"scheme", scheme_name(cfg.solver.lc.scheme)},
                {"epsilon", cfg.solver.epsilon},
                {"max_iters", cfg.solver.max_iters},
                {"peak", cfg.peak},
                {"ergas_denominator", ergas_name(cfg.ergas_denominator)}};
}

ToolConfig make_preset(std::vector<double> alpha, double tau, double nu,
                       double vartheta, WeightScheme scheme) {
    ToolConfig cfg;
    cfg.solver.alpha = std::move(alpha);
    cfg.solver.tau = tau;
    cfg.solver.eta = 1.1;
    cfg.solver.lc.nu = nu;
    cfg.solver.lc.vartheta = vartheta;
    cfg.solver.lc.c = 0.8;
    cfg.solver.lc.scheme = scheme;
    return cfg;
}

}  // namespace

ToolConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config " + path.string());
    }
    json j;
    in >> j;

    if (j.contains("schema") && j["schema"].get<int>() != 1) {
        throw std::invalid_argument("unsupported config schema");
    }
    ToolConfig cfg;
    if (j.contains("alpha")) cfg.solver.alpha = j["alpha"].get<std::vector<double>>();
    if (j.contains("tau")) cfg.solver.tau = j["tau"].get<double>();
    if (j.contains("eta")) cfg.solver.eta = j["eta"].get<double>();
    if (j.contains("nu")) cfg.solver.lc.nu = j["nu"].get<double>();
    if (j.contains("vartheta")) cfg.solver.lc.vartheta = j["vartheta"].get<double>();
    if (j.contains("c")) cfg.solver.lc.c = j["c"].get<double>();
    if (j.contains("scheme")) cfg.solver.lc.scheme = scheme_from(j["scheme"].get<std::string>());
    if (j.contains("epsilon")) cfg.solver.epsilon = j["epsilon"].get<double>();
    if (j.contains("max_iters")) cfg.solver.max_iters = j["max_iters"].get<int>();
    if (j.contains("peak")) cfg.peak = j["peak"].get<double>();
    if (j.contains("ergas_denominator")) {
        cfg.ergas_denominator = ergas_from(j["ergas_denominator"].get<std::string>());
    }
    return cfg;
}

void save_config(const ToolConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::invalid_argument("cannot write config " + path.string());
    }
    out << to_json(cfg).dump(2) << "\n";
}

std::optional<ToolConfig> preset_config(std::string_view name) {
    if (name == "mri") {
        return make_preset({1, 1, 1, 1, 1, 1}, 10000, 1.0, 500, WeightScheme::Normalized);
    }
    if (name == "clay") {
        return make_preset({0.01, 0.001, 1, 0.1, 1, 0.001}, 10000, 2.5, 500,
                           WeightScheme::Normalized);
    }
    if (name == "chart_and_stuffed_toy") {
        return make_preset({0.1, 0.001, 1, 0.1, 1, 0.001}, 10000, 1.0, 500,
                           WeightScheme::Normalized);
    }
    if (name == "balloons") {
        return make_preset({0.1, 0.001, 1, 0.1, 1, 0.01}, 10000, 2.5, 500,
                           WeightScheme::Normalized);
    }
    if (name == "cd") {
        return make_preset({0.1, 0.01, 1, 0.1, 1, 0.01}, 10000, 0.5, 500,
                           WeightScheme::Normalized);
    }
    if (name == "cv") {
        return make_preset({0.1, 1, 1, 1, 0.1, 1, 1, 1, 1, 0.1}, 100000, 0.1, 1000,
                           WeightScheme::Raw);
    }
    return std::nullopt;
}

std::vector<std::string> preset_names() {
    return {"mri", "clay", "chart_and_stuffed_toy", "balloons", "cd", "cv"};
}

std::string completion_report_json(const CompletionResult& result) {
    json j{{"schema", 1},
           {"iterations", result.iterations},
           {"converged", result.converged},
           {"re_history", result.re_history},
           {"joint_rank", result.joint_rank_final}};
    return j.dump(2) + "\n";
}

std::string metric_report_json(const MetricReport& report) {
    json j{{"schema", 1},
           {"psnr", report.psnr},
           {"ssim", report.ssim},
           {"ergas", report.ergas},
           {"psnr_per_slice", report.psnr_per_slice},
           {"ssim_per_slice", report.ssim_per_slice}};
    return j.dump(2) + "\n";
}

std::string metric_report_table(const MetricReport& report) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << std::left << std::setw(12) << "metric" << std::right << std::setw(12)
        << "value" << "\n";
    out << std::left << std::setw(12) << "PSNR (dB)" << std::right << std::setw(12)
        << report.psnr << "\n";
    out << std::left << std::setw(12) << "SSIM" << std::right << std::setw(12)
        << report.ssim << "\n";
    out << std::left << std::setw(12) << "ERGAS" << std::right << std::setw(12)
        << report.ergas << "\n";
    return out.str();
}

}  // namespace tjlc
