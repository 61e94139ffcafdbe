#include "demrisk/cli.hpp"

#include "demrisk/valuation.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace demrisk::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Fixed-point text; values that round to zero print without a sign.
std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string text(buf);
    if (text.front() == '-' && text.find_first_not_of("-0.") == std::string::npos)
        text.erase(0, 1);
    return text;
}

std::string money(double v) {
    return fixed(v, 2);
}

std::string rate(double v) {
    return fixed(v, 10);
}

std::string ratio(double v) {
    return fixed(v, 8);
}

double relative_gap(double sum, double total, double magnitude) {
    const double scale = std::max(std::abs(total), magnitude);
    return scale > 0.0 ? std::abs(sum - total) / scale : 0.0;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

// Policies valued at a time t in [0, n]: the curve is rolled at most to n - 1, since only the
// maturity benefit remains at n.
YieldCurve curve_for(const RunConfig& config, const PolicySpec& spec, int t) {
    return curve_at(config, std::min(t, spec.duration - 1));
}

json moments_json(const Moments& m) {
    return {{"n", m.n},
            {"mean", m.mean},
            {"std_dev", m.std_dev},
            {"skewness", m.skewness},
            {"skewness_defined", m.skewness_defined},
            {"standard_error", m.standard_error}};
}

json outcome_json(const PathOutcome& o) {
    return {{"z", o.z}, {"x", o.x}, {"s", o.s}, {"w_next", o.w_next},
            {"be_next", o.be_next}, {"asset_return", o.asset_return}};
}

} // namespace

std::vector<ValueRow> value_report(const RunConfig& config, const PolicyEntry& policy) {
    const PolicySpec& spec = policy.spec;
    const PremiumSchedule premiums = price(spec);
    std::vector<ValueRow> rows;
    for (int t = 0; t <= spec.duration; ++t) {
        ValueRow r;
        r.t = t;
        r.age = spec.age_at(t);
        r.gross_premium = premiums.gross_at(t);
        r.pure_premium = premiums.pure;
        r.net_premium = premiums.net_at(t);
        r.reserve = local_reserve_rate(spec, premiums, t);
        r.best_estimate = best_estimate_rate(spec, premiums, t, curve_for(config, spec, t),
                                             *policy.second_order);
        r.epv = epv_rate(spec, premiums, t, *policy.second_order);
        if (t >= 1)
            r.sum_at_risk = death_benefit(spec.kind) - r.reserve;
        rows.push_back(r);
    }
    return rows;
}

std::vector<ProjectionRow> project_report(const RunConfig& config, const PolicyEntry& policy) {
    const PolicySpec& spec = policy.spec;
    const PremiumSchedule premiums = price(spec);
    std::vector<ProjectionRow> rows;
    for (int t = 0; t < spec.duration; ++t) {
        const YieldCurve curve = curve_at(config, t);
        const YearBases bases = make_year_bases(spec, premiums, t, curve, *policy.second_order);
        const PortfolioState state = project_state(spec, config.cohort, *policy.second_order, t);
        const DemographicSplit split = expected_demographic_split(state, bases);

        ProjectionRow r;
        r.t = t;
        r.w = state.w;
        r.expected_mcv = expected_demographic_profit(state, bases);
        r.expected_lg = split.local_gaap;
        r.expected_rf_gap = split.rf_gap;
        r.expected_q_gap = split.q_gap;
        r.best_estimate = best_estimate_rate(spec, premiums, t, curve, *policy.second_order);
        r.epv = epv_rate(spec, premiums, t, *policy.second_order);
        r.reserve = bases.reserve;
        rows.push_back(r);
    }
    return rows;
}

std::vector<DecompositionRow> decompose_report(const RunConfig& config, const PolicyEntry& policy,
                                               std::uint64_t seed) {
    std::vector<DecompositionRow> rows;
    SimulationConfig sim = config.simulation;
    sim.seed = seed;
    for (int t : config.times) {
        if (t >= policy.spec.duration)
            continue;
        const YieldCurve curve = curve_at(config, t);
        VasicekParams params{config.vasicek.a, config.vasicek.b, config.vasicek.sigma, config.vasicek.b};
        if (sim.rate_model == RateModel::vasicek)
            params = calibrate_vasicek(curve, policy.spec, t, *policy.second_order, config.vasicek).params;
        const YearModel model = make_year_model(policy.spec, config.cohort, policy.second_order, t,
                                                curve, params);
        for (long p = 0; p < config.decompose_paths; ++p) {
            DecompositionRow r;
            r.t = t;
            r.path = p;
            r.outcome = simulate_path(model, sim, static_cast<std::uint64_t>(p));
            r.homans = homans_components(model.state, r.outcome, model.bases, sim.expenses);
            r.split = demographic_split(model.state, r.outcome, model.bases);
            const ProfitDecomposition& h = r.homans;
            r.homans_closure = relative_gap(h.component_sum(), h.total,
                                            std::abs(h.demographic) + std::abs(h.financial) +
                                                std::abs(h.lapse) + std::abs(h.expense) +
                                                std::abs(h.residual));
            r.split_closure = relative_gap(r.split.sum(), h.demographic,
                                           std::abs(r.split.local_gaap) + std::abs(r.split.rf_gap) +
                                               std::abs(r.split.q_gap));
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<SimulationColumn> simulate_report(const RunConfig& config, const PolicyEntry& policy) {
    std::vector<SimulationColumn> columns;
    for (int t : config.times) {
        if (t >= policy.spec.duration)
            continue;
        const YieldCurve curve = curve_at(config, t);
        SimulationColumn col;
        col.t = t;
        VasicekParams params{config.vasicek.a, config.vasicek.b, config.vasicek.sigma, config.vasicek.b};
        if (config.simulation.rate_model == RateModel::vasicek) {
            const VasicekCalibration cal =
                calibrate_vasicek(curve, policy.spec, t, *policy.second_order, config.vasicek);
            params = cal.params;
            col.calibration_residual = cal.residual();
        }
        col.r0 = params.r0;
        const YearModel model = make_year_model(policy.spec, config.cohort, policy.second_order, t,
                                                curve, params);
        col.w = model.state.w;
        col.result = simulate_one_year(model, config.simulation);
        col.lg_theoretical = local_gaap_theoretical_moments(model, config.simulation.lapse_rate);
        columns.push_back(std::move(col));
    }
    return columns;
}

namespace {

struct Outputs {
    fs::path dir;
    bool csv = false;
    bool json_out = false;
};

std::string value_csv(const std::vector<ValueRow>& rows) {
    std::ostringstream out;
    out << "t,age,gross_premium,pure_premium,net_premium,reserve_lg,best_estimate,epv,sum_at_risk\n";
    for (const auto& r : rows) {
        out << r.t << ',' << r.age << ',' << rate(r.gross_premium) << ',' << rate(r.pure_premium)
            << ',' << rate(r.net_premium) << ',' << rate(r.reserve) << ','
            << rate(r.best_estimate) << ',' << rate(r.epv) << ','
            << (r.sum_at_risk ? rate(*r.sum_at_risk) : std::string()) << '\n';
    }
    return out.str();
}

json value_json(const std::vector<ValueRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"t", r.t},
                       {"age", r.age},
                       {"gross_premium", r.gross_premium},
                       {"pure_premium", r.pure_premium},
                       {"net_premium", r.net_premium},
                       {"reserve_lg", r.reserve},
                       {"best_estimate", r.best_estimate},
                       {"epv", r.epv},
                       {"sum_at_risk", r.sum_at_risk ? json(*r.sum_at_risk) : json(nullptr)}});
    }
    return arr;
}

std::string project_csv(const std::vector<ProjectionRow>& rows) {
    std::ostringstream out;
    out << "t,w_t,expected_mcv,expected_lg,expected_rf_gap,expected_q_gap,best_estimate,epv,reserve_lg\n";
    for (const auto& r : rows) {
        out << r.t << ',' << money(r.w) << ',' << money(r.expected_mcv) << ','
            << money(r.expected_lg) << ',' << money(r.expected_rf_gap) << ','
            << money(r.expected_q_gap) << ',' << rate(r.best_estimate) << ',' << rate(r.epv)
            << ',' << rate(r.reserve) << '\n';
    }
    return out.str();
}

json project_json(const std::vector<ProjectionRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"t", r.t},
                       {"w_t", r.w},
                       {"expected_mcv", r.expected_mcv},
                       {"expected_lg", r.expected_lg},
                       {"expected_rf_gap", r.expected_rf_gap},
                       {"expected_q_gap", r.expected_q_gap},
                       {"best_estimate", r.best_estimate},
                       {"epv", r.epv},
                       {"reserve_lg", r.reserve}});
    }
    return arr;
}

std::string decompose_csv(const std::vector<DecompositionRow>& rows) {
    std::ostringstream out;
    out << "t,path,z,s,w_next,be_next,asset_return,y1_demographic,y2_financial,y3_lapse,"
           "y4_expense,y5_residual,total,homans_closure,lg,rf_gap,q_gap,split_closure\n";
    for (const auto& r : rows) {
        char closure_h[32];
        char closure_s[32];
        std::snprintf(closure_h, sizeof closure_h, "%.3e", r.homans_closure);
        std::snprintf(closure_s, sizeof closure_s, "%.3e", r.split_closure);
        out << r.t << ',' << r.path << ',' << money(r.outcome.z) << ',' << money(r.outcome.s)
            << ',' << money(r.outcome.w_next) << ',' << rate(r.outcome.be_next) << ','
            << rate(r.outcome.asset_return) << ',' << money(r.homans.demographic) << ','
            << money(r.homans.financial) << ',' << money(r.homans.lapse) << ','
            << money(r.homans.expense) << ',' << money(r.homans.residual) << ','
            << money(r.homans.total) << ',' << closure_h << ',' << money(r.split.local_gaap)
            << ',' << money(r.split.rf_gap) << ',' << money(r.split.q_gap) << ',' << closure_s
            << '\n';
    }
    return out.str();
}

json decompose_json(const std::vector<DecompositionRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"t", r.t},
                       {"path", r.path},
                       {"outcome", outcome_json(r.outcome)},
                       {"y1_demographic", r.homans.demographic},
                       {"y2_financial", r.homans.financial},
                       {"y3_lapse", r.homans.lapse},
                       {"y4_expense", r.homans.expense},
                       {"y5_residual", r.homans.residual},
                       {"total", r.homans.total},
                       {"homans_closure", r.homans_closure},
                       {"lg", r.split.local_gaap},
                       {"rf_gap", r.split.rf_gap},
                       {"q_gap", r.split.q_gap},
                       {"split_closure", r.split_closure}});
    }
    return arr;
}

std::string table_header(const std::vector<SimulationColumn>& cols) {
    std::string h = "quantity";
    for (const auto& c : cols)
        h += ",t=" + std::to_string(c.t);
    return h + "\n";
}

template <typename F>
std::string table_row(const std::string& label, const std::vector<SimulationColumn>& cols, F cell) {
    std::string line = label;
    for (const auto& c : cols)
        line += "," + cell(c);
    return line + "\n";
}

std::string simulate_mcv_csv(const std::vector<SimulationColumn>& cols) {
    std::string out = table_header(cols);
    auto ratio_of = [](double v, double w) { return ratio(w > 0.0 ? v / w : 0.0); };
    out += table_row("E[y_MCV](T)", cols, [](const auto& c) { return money(c.result.expected_mcv); });
    out += table_row("E[y_MCV]", cols, [](const auto& c) { return money(c.result.mcv.moments.mean); });
    out += table_row("E[y_MCV] on w_t", cols,
                     [&](const auto& c) { return ratio_of(c.result.mcv.moments.mean, c.w); });
    out += table_row("sigma(y_MCV)", cols, [](const auto& c) { return money(c.result.mcv.moments.std_dev); });
    out += table_row("gamma(y_MCV)", cols, [](const auto& c) { return ratio(c.result.mcv.moments.skewness); });
    out += table_row("SCR", cols, [](const auto& c) { return money(c.result.mcv.scr); });
    out += table_row("SCR on w_t", cols, [](const auto& c) { return ratio(c.result.mcv.scr_ratio); });
    return out;
}

std::string simulate_lg_csv(const std::vector<SimulationColumn>& cols) {
    std::string out = table_header(cols);
    out += table_row("E[y_LG](T)", cols, [](const auto& c) { return money(c.result.expected_lg); });
    out += table_row("E[y_LG]", cols, [](const auto& c) { return money(c.result.local_gaap.moments.mean); });
    out += table_row("sigma(y_LG)(T)", cols, [](const auto& c) { return money(c.lg_theoretical.std_dev); });
    out += table_row("gamma(y_LG)(T)", cols, [](const auto& c) { return ratio(c.lg_theoretical.skewness); });
    out += table_row("SCR", cols, [](const auto& c) { return money(c.result.local_gaap.scr); });
    out += table_row("SCR on w_t", cols, [](const auto& c) { return ratio(c.result.local_gaap.scr_ratio); });
    return out;
}

json simulate_json(const std::vector<SimulationColumn>& cols) {
    json arr = json::array();
    for (const auto& c : cols) {
        arr.push_back({{"t", c.t},
                       {"w_t", c.w},
                       {"vasicek_r0", c.r0},
                       {"calibration_residual", c.calibration_residual},
                       {"mcv",
                        {{"expected_theoretical", c.result.expected_mcv},
                         {"simulated", moments_json(c.result.mcv.moments)},
                         {"scr", c.result.mcv.scr},
                         {"scr_ratio", c.result.mcv.scr_ratio}}},
                       {"lg",
                        {{"expected_theoretical", c.result.expected_lg},
                         {"theoretical", moments_json(c.lg_theoretical)},
                         {"simulated", moments_json(c.result.local_gaap.moments)},
                         {"scr", c.result.local_gaap.scr},
                         {"scr_ratio", c.result.local_gaap.scr_ratio}}},
                       {"max_conservation_error", c.result.max_conservation_error}});
    }
    return arr;
}

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v)
        return std::nullopt;
    return std::string(v);
}

} // namespace

int run_command(const std::string& command, const fs::path& config_path,
                const CommandOptions& options, std::ostream& log) {
    if (command != "value" && command != "project" && command != "decompose" &&
        command != "simulate") {
        log << "error: unknown command '" << command << "'\n";
        return exit_config_error;
    }
    RunConfig config;
    Outputs outputs;
    try {
        config = load_run_config(config_path);
        if (options.seed)
            config.simulation.seed = *options.seed;
        if (options.threads) {
            config.simulation.threads = *options.threads;
        } else if (auto t = env("DEMRISK_THREADS")) {
            try {
                config.simulation.threads = static_cast<unsigned>(std::stoul(*t));
            } catch (const std::exception&) {
                throw ConfigError("DEMRISK_THREADS: not a non-negative integer");
            }
        }
        if (options.out_dir)
            config.out_dir = *options.out_dir;
        else if (auto d = env("DEMRISK_OUT_DIR"))
            config.out_dir = *d;
        if (options.format) {
            if (*options.format != "csv" && *options.format != "json")
                throw ConfigError("--format: expected csv or json");
            config.formats = {*options.format};
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_config_error;
    }
    outputs.dir = config.out_dir;
    for (const auto& f : config.formats) {
        outputs.csv = outputs.csv || f == "csv";
        outputs.json_out = outputs.json_out || f == "json";
    }

    bool checks_ok = true;
    try {
        fs::create_directories(outputs.dir);
        json doc = {{"command", command}, {"config", config.source},
                    {"seed", config.simulation.seed}};
        json results = json::object();

        for (const auto& policy : config.policies) {
            const std::string& name = policy.name;
            if (command == "value") {
                const auto rows = value_report(config, policy);
                if (outputs.csv)
                    write_file(outputs.dir / ("value_" + name + ".csv"), value_csv(rows));
                results[name] = value_json(rows);
            } else if (command == "project") {
                const auto rows = project_report(config, policy);
                if (outputs.csv)
                    write_file(outputs.dir / ("project_" + name + ".csv"), project_csv(rows));
                results[name] = project_json(rows);
            } else if (command == "decompose") {
                const auto rows = decompose_report(config, policy, config.simulation.seed);
                for (const auto& r : rows) {
                    if (!(r.homans_closure < 1e-8) || !(r.split_closure < 1e-8)) {
                        checks_ok = false;
                        log << "check failed: decomposition closure for '" << name << "' t=" << r.t
                            << " path " << r.path << '\n';
                    }
                }
                if (outputs.csv)
                    write_file(outputs.dir / ("decompose_" + name + ".csv"), decompose_csv(rows));
                results[name] = decompose_json(rows);
            } else {
                const auto cols = simulate_report(config, policy);
                for (const auto& c : cols) {
                    if (!(c.result.max_conservation_error <= 1e-9 * std::max(1.0, c.w))) {
                        checks_ok = false;
                        log << "check failed: sums-insured conservation for '" << name
                            << "' t=" << c.t << '\n';
                    }
                }
                if (outputs.csv) {
                    write_file(outputs.dir / ("simulate_" + name + "_mcv.csv"), simulate_mcv_csv(cols));
                    write_file(outputs.dir / ("simulate_" + name + "_lg.csv"), simulate_lg_csv(cols));
                }
                results[name] = simulate_json(cols);
            }
        }
        doc["results"] = std::move(results);
        if (outputs.json_out)
            write_file(outputs.dir / (command + ".json"), doc.dump(2) + "\n");
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_config_error;
    }
    if (!checks_ok)
        return exit_check_failed;
    log << command << ": wrote reports to " << outputs.dir.string() << '\n';
    return exit_ok;
}

} // namespace demrisk::cli
