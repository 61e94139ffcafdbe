#include "demrisk/cli.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace demrisk::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

const json& require(const json& node, const std::string& key, const std::string& path) {
    if (!node.is_object() || !node.contains(key))
        throw ConfigError(join(path, key) + ": required key missing");
    return node.at(key);
}

template <typename T>
T read(const json& node, const std::string& key, const std::string& path) {
    const json& v = require(node, key, path);
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(join(path, key) + ": wrong type");
    }
}

template <typename T>
T read_or(const json& node, const std::string& key, const std::string& path, T fallback) {
    if (!node.is_object() || !node.contains(key) || node.at(key).is_null())
        return fallback;
    return read<T>(node, key, path);
}

void reject_unknown(const json& node, const std::string& path, std::set<std::string> allowed) {
    if (!node.is_object())
        throw ConfigError((path.empty() ? "<root>" : path) + ": expected an object");
    for (const auto& [key, _] : node.items()) {
        if (!allowed.count(key))
            throw ConfigError(join(path, key) + ": unknown key");
    }
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path candidate(p);
    return (candidate.is_absolute() ? candidate : base / candidate).lexically_normal();
}

std::shared_ptr<const LifeTable> read_table(const json& node, const std::string& path,
                                            const fs::path& base) {
    reject_unknown(node, path, {"table", "scaling"});
    const fs::path file = resolve(base, read<std::string>(node, "table", path));
    LifeTable table = [&] {
        try {
            return load_life_table(file);
        } catch (const LifeTableError& e) {
            throw ConfigError(join(path, "table") + ": " + e.what());
        }
    }();
    if (!node.contains("scaling"))
        return std::make_shared<const LifeTable>(std::move(table));

    const std::string spath = join(path, "scaling");
    const json& scaling = node.at("scaling");
    ScalingSchedule schedule;
    try {
        if (scaling.is_string()) {
            if (scaling.get<std::string>() != "default")
                throw ConfigError(spath + ": expected \"default\", {\"constant\": f} or {\"knots\": [[age, f], ...]}");
            schedule = ScalingSchedule::default_pure_endowment(table.min_age(), table.terminal_age());
        } else {
            reject_unknown(scaling, spath, {"constant", "knots"});
            if (scaling.contains("constant")) {
                schedule = ScalingSchedule::constant(read<double>(scaling, "constant", spath),
                                                     table.min_age(), table.terminal_age());
            } else {
                std::vector<std::pair<int, double>> knots;
                for (const auto& k : require(scaling, "knots", spath)) {
                    if (!k.is_array() || k.size() != 2)
                        throw ConfigError(join(spath, "knots") + ": each knot is [age, factor]");
                    knots.emplace_back(k[0].get<int>(), k[1].get<double>());
                }
                schedule = ScalingSchedule::linear(knots, table.min_age(), table.terminal_age());
            }
        }
        return std::make_shared<const LifeTable>(scale_table(table, schedule));
    } catch (const LifeTableError& e) {
        throw ConfigError(spath + ": " + e.what());
    } catch (const json::exception&) {
        throw ConfigError(spath + ": wrong type");
    }
}

PolicyEntry read_policy(const json& node, const std::string& path, const fs::path& base) {
    reject_unknown(node, path,
                   {"name", "kind", "issue_age", "duration", "premium_type", "technical_rate",
                    "loadings", "surrender", "first_order", "second_order"});
    PolicyEntry entry;
    PolicySpec& spec = entry.spec;
    try {
        spec.kind = parse_benefit_kind(read<std::string>(node, "kind", path));
    } catch (const ContractError& e) {
        throw ConfigError(join(path, "kind") + ": " + e.what());
    }
    entry.name = read_or<std::string>(node, "name", path, to_string(spec.kind));
    spec.issue_age = read<int>(node, "issue_age", path);
    spec.duration = read<int>(node, "duration", path);
    try {
        spec.premium_type = parse_premium_type(read<std::string>(node, "premium_type", path));
    } catch (const ContractError& e) {
        throw ConfigError(join(path, "premium_type") + ": " + e.what());
    }
    spec.technical_rate = read<double>(node, "technical_rate", path);
    if (node.contains("loadings")) {
        const std::string lpath = join(path, "loadings");
        const json& l = node.at("loadings");
        reject_unknown(l, lpath, {"acquisition", "collection", "management"});
        spec.loadings.acquisition = read_or<double>(l, "acquisition", lpath, 0.0);
        spec.loadings.collection = read_or<double>(l, "collection", lpath, 0.0);
        spec.loadings.management = read_or<double>(l, "management", lpath, 0.0);
    }
    if (node.contains("surrender") && !node.at("surrender").is_null()) {
        const std::string spath = join(path, "surrender");
        const json& s = node.at("surrender");
        reject_unknown(s, spath, {"tau", "rate"});
        spec.surrender = SurrenderPenalty{read<int>(s, "tau", spath), read<double>(s, "rate", spath)};
    }
    spec.first_order_table = read_table(require(node, "first_order", path), join(path, "first_order"), base);
    entry.second_order = read_table(require(node, "second_order", path), join(path, "second_order"), base);
    try {
        spec.validate();
    } catch (const ContractError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    const LifeTable& t2 = *entry.second_order;
    if (spec.issue_age < t2.min_age() || spec.issue_age + spec.duration - 1 > t2.terminal_age())
        throw ConfigError(join(path, "second_order") + ": table does not cover the policy ages");
    return entry;
}

} // namespace

RunConfig parse_run_config(const json& doc, const fs::path& base) {
    reject_unknown(doc, "", {"policies", "cohort", "curve", "vasicek", "simulation", "expenses",
                             "decompose", "output"});
    RunConfig cfg;
    cfg.source = doc;

    const json& policies = require(doc, "policies", "");
    if (!policies.is_array() || policies.empty())
        throw ConfigError("policies: expected a non-empty array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < policies.size(); ++i) {
        PolicyEntry e = read_policy(policies[i], "policies[" + std::to_string(i) + "]", base);
        if (!names.insert(e.name).second)
            throw ConfigError("policies[" + std::to_string(i) + "].name: duplicate name '" + e.name + "'");
        cfg.policies.push_back(std::move(e));
    }

    const json& cohort = require(doc, "cohort", "");
    reject_unknown(cohort, "cohort", {"l0", "sum_mean", "sum_cv", "per_policy_sums"});
    cfg.cohort.l0 = read<long>(cohort, "l0", "cohort");
    cfg.cohort.sum_mean = read_or<double>(cohort, "sum_mean", "cohort", 1.0);
    cfg.cohort.sum_cv = read_or<double>(cohort, "sum_cv", "cohort", 0.0);
    cfg.cohort.per_policy_sums =
        read_or<std::vector<double>>(cohort, "per_policy_sums", "cohort", {});
    try {
        cfg.cohort.validate();
    } catch (const ContractError& e) {
        throw ConfigError(std::string("cohort: ") + e.what());
    }

    int max_duration = 0;
    for (const auto& p : cfg.policies)
        max_duration = std::max(max_duration, p.spec.duration);

    const json& curve = require(doc, "curve", "");
    reject_unknown(curve, "curve", {"path", "flat"});
    if (curve.contains("path") == curve.contains("flat"))
        throw ConfigError("curve: exactly one of 'path' or 'flat' is required");
    try {
        if (curve.contains("path"))
            cfg.curve = load_curve(resolve(base, read<std::string>(curve, "path", "curve")));
        else
            cfg.curve = YieldCurve::flat(read<double>(curve, "flat", "curve"), max_duration + 2);
    } catch (const CurveError& e) {
        throw ConfigError(std::string(curve.contains("path") ? "curve.path: " : "curve.flat: ") + e.what());
    }
    if (cfg.curve.max_maturity() < max_duration)
        throw ConfigError("curve.path: curve must reach maturity " + std::to_string(max_duration));

    cfg.vasicek.b = std::log1p(cfg.curve.spot(cfg.curve.max_maturity()));
    if (doc.contains("vasicek")) {
        const json& v = doc.at("vasicek");
        reject_unknown(v, "vasicek", {"a", "b", "sigma", "r0_min", "r0_max", "quadrature_nodes"});
        cfg.vasicek.a = read_or<double>(v, "a", "vasicek", cfg.vasicek.a);
        cfg.vasicek.b = read_or<double>(v, "b", "vasicek", cfg.vasicek.b);
        cfg.vasicek.sigma = read_or<double>(v, "sigma", "vasicek", cfg.vasicek.sigma);
        cfg.vasicek.r0_min = read_or<double>(v, "r0_min", "vasicek", cfg.vasicek.r0_min);
        cfg.vasicek.r0_max = read_or<double>(v, "r0_max", "vasicek", cfg.vasicek.r0_max);
        cfg.vasicek.quadrature_nodes = read_or<int>(v, "quadrature_nodes", "vasicek", cfg.vasicek.quadrature_nodes);
    }
    if (!(cfg.vasicek.a > 0.0))
        throw ConfigError("vasicek.a: must be positive");
    if (!(cfg.vasicek.sigma >= 0.0))
        throw ConfigError("vasicek.sigma: must be non-negative");
    if (!(cfg.vasicek.r0_min < cfg.vasicek.r0_max))
        throw ConfigError("vasicek.r0_min: must be below r0_max");

    if (doc.contains("simulation")) {
        const json& s = doc.at("simulation");
        const std::string sp = "simulation";
        reject_unknown(s, sp, {"n_sims", "seed", "confidence", "times", "lapse_rate", "rate_model",
                               "threads", "asset_return"});
        SimulationConfig& sim = cfg.simulation;
        sim.n_sims = read_or<long>(s, "n_sims", sp, sim.n_sims);
        sim.seed = read_or<std::uint64_t>(s, "seed", sp, sim.seed);
        sim.confidence = read_or<double>(s, "confidence", sp, sim.confidence);
        sim.lapse_rate = read_or<double>(s, "lapse_rate", sp, sim.lapse_rate);
        sim.threads = read_or<unsigned>(s, "threads", sp, sim.threads);
        if (s.contains("asset_return") && !s.at("asset_return").is_null())
            sim.asset_return = read<double>(s, "asset_return", sp);
        const std::string model = read_or<std::string>(s, "rate_model", sp, "vasicek");
        if (model == "vasicek")
            sim.rate_model = RateModel::vasicek;
        else if (model == "forward")
            sim.rate_model = RateModel::forward;
        else
            throw ConfigError("simulation.rate_model: expected \"vasicek\" or \"forward\"");
        cfg.times = read_or<std::vector<int>>(s, "times", sp, cfg.times);
        try {
            sim.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        for (int t : cfg.times) {
            if (t < 0)
                throw ConfigError("simulation.times: negative time");
        }
    }

    if (doc.contains("expenses")) {
        const json& e = doc.at("expenses");
        reject_unknown(e, "expenses", {"d_alpha", "d_beta", "d_gamma"});
        cfg.simulation.expenses.d_alpha = read_or<double>(e, "d_alpha", "expenses", 0.0);
        cfg.simulation.expenses.d_beta = read_or<double>(e, "d_beta", "expenses", 0.0);
        cfg.simulation.expenses.d_gamma = read_or<double>(e, "d_gamma", "expenses", 0.0);
    }

    if (doc.contains("decompose")) {
        const json& d = doc.at("decompose");
        reject_unknown(d, "decompose", {"paths"});
        cfg.decompose_paths = read_or<int>(d, "paths", "decompose", cfg.decompose_paths);
        if (cfg.decompose_paths < 1)
            throw ConfigError("decompose.paths: must be at least 1");
    }

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        reject_unknown(o, "output", {"dir", "formats"});
        if (o.contains("dir"))
            cfg.out_dir = resolve(base, read<std::string>(o, "dir", "output"));
        cfg.formats = read_or<std::vector<std::string>>(o, "formats", "output", cfg.formats);
    } else {
        cfg.out_dir = base / "out";
    }
    for (const auto& f : cfg.formats) {
        if (f != "csv" && f != "json")
            throw ConfigError("output.formats: unknown format '" + f + "'");
    }
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("--config: cannot open '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError("--config: invalid JSON: " + std::string(e.what()));
    }
    return parse_run_config(doc, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

YieldCurve curve_at(const RunConfig& config, int t) {
    return roll_forward(config.curve, t);
}

} // namespace demrisk::cli
