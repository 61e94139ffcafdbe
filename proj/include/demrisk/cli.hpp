#ifndef DEMRISK_CLI_HPP
#define DEMRISK_CLI_HPP

#include "demrisk/calibration.hpp"
#include "demrisk/contract.hpp"
#include "demrisk/curve.hpp"
#include "demrisk/engine.hpp"
#include "demrisk/lifetable.hpp"
#include "demrisk/profit.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace demrisk::cli {

// Configuration problem; the message starts with the offending key path.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct PolicyEntry {
    std::string name;
    PolicySpec spec;
    std::shared_ptr<const LifeTable> second_order;
};

struct RunConfig {
    std::vector<PolicyEntry> policies;
    Cohort cohort;
    YieldCurve curve{0, {0.0}};
    VasicekConfig vasicek;
    SimulationConfig simulation;
    std::vector<int> times{0};
    int decompose_paths = 10;
    std::filesystem::path out_dir = "out";
    std::vector<std::string> formats{"csv"};
    nlohmann::json source; // the document as read, echoed into JSON outputs
};

RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// Curve in force at t under deterministic forward-implied evolution.
YieldCurve curve_at(const RunConfig& config, int t);

struct ValueRow {
    int t = 0;
    int age = 0;
    double gross_premium = 0.0;
    double pure_premium = 0.0;
    double net_premium = 0.0;
    double reserve = 0.0;
    double best_estimate = 0.0;
    double epv = 0.0;
    std::optional<double> sum_at_risk;
};

struct ProjectionRow {
    int t = 0;
    double w = 0.0;
    double expected_mcv = 0.0;
    double expected_lg = 0.0;
    double expected_rf_gap = 0.0;
    double expected_q_gap = 0.0;
    double best_estimate = 0.0;
    double epv = 0.0;
    double reserve = 0.0;
};

struct DecompositionRow {
    int t = 0;
    long path = 0;
    PathOutcome outcome;
    ProfitDecomposition homans;
    DemographicSplit split;
    double homans_closure = 0.0; // relative
    double split_closure = 0.0;  // relative, against y1
};

struct SimulationColumn {
    int t = 0;
    double w = 0.0;
    double r0 = 0.0;
    double calibration_residual = 0.0;
    SimulationResult result;
    Moments lg_theoretical;
};

std::vector<ValueRow> value_report(const RunConfig& config, const PolicyEntry& policy);
std::vector<ProjectionRow> project_report(const RunConfig& config, const PolicyEntry& policy);
std::vector<DecompositionRow> decompose_report(const RunConfig& config, const PolicyEntry& policy,
                                               std::uint64_t seed);
std::vector<SimulationColumn> simulate_report(const RunConfig& config, const PolicyEntry& policy);

struct CommandOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::string> format;
    std::optional<unsigned> threads;
};

// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 1;
inline constexpr int exit_check_failed = 2;

// Runs value|project|decompose|simulate; writes reports and returns an exit code.
int run_command(const std::string& command, const std::filesystem::path& config_path,
                const CommandOptions& options, std::ostream& log);

} // namespace demrisk::cli

#endif
