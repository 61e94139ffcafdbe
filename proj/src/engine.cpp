#include "demrisk/engine.hpp"

#include "demrisk/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include <boost/random/binomial_distribution.hpp>

namespace demrisk {

namespace {

// Neumaier compensated summation.
class CompensatedSum {
  public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

long order_statistic_rank(double confidence, std::size_t n) {
    const double x = (1.0 - confidence) * static_cast<double>(n);
    // absorb representation error such as 0.005 * 1000 = 5.000000000000004
    long k = static_cast<long>(std::ceil(x - 1e-9 * std::max(1.0, x)));
    return std::clamp<long>(k, 1, static_cast<long>(n));
}

double population_cv(const std::vector<double>& v) {
    if (v.size() < 2)
        return 0.0;
    CompensatedSum s;
    for (double c : v)
        s.add(c);
    const double mean = s.value() / static_cast<double>(v.size());
    CompensatedSum s2;
    for (double c : v)
        s2.add((c - mean) * (c - mean));
    return std::sqrt(s2.value() / static_cast<double>(v.size())) / mean;
}

} // namespace

LogNormalParams lognormal_params_from_mean_cv(double mean, double cv) {
    if (!(mean > 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("lognormal mean must be positive");
    if (!(cv >= 0.0) || !std::isfinite(cv))
        throw std::invalid_argument("lognormal cv must be non-negative");
    const double s2 = std::log1p(cv * cv);
    return {std::log(mean) - 0.5 * s2, std::sqrt(s2)};
}

long simulate_deaths(long lives, double q, Xoshiro256& rng) {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("death probability outside [0, 1]");
    if (lives <= 0 || q == 0.0)
        return 0;
    if (q == 1.0)
        return lives;
    boost::random::binomial_distribution<long> binomial(lives, q);
    return binomial(rng);
}

void SimulationConfig::validate() const {
    if (n_sims < 1)
        throw std::invalid_argument("simulation.n_sims must be at least 1");
    if (!(confidence > 0.5 && confidence < 1.0))
        throw std::invalid_argument("simulation.confidence must lie in (0.5, 1)");
    if (!(lapse_rate >= 0.0 && lapse_rate < 1.0))
        throw std::invalid_argument("simulation.lapse_rate must lie in [0, 1)");
}

Moments compute_moments(const std::vector<double>& samples) {
    Moments m;
    m.n = static_cast<long>(samples.size());
    if (samples.empty())
        return m;
    CompensatedSum sum;
    for (double v : samples)
        sum.add(v);
    const double n = static_cast<double>(samples.size());
    m.mean = sum.value() / n;
    CompensatedSum s2;
    CompensatedSum s3;
    for (double v : samples) {
        const double d = v - m.mean;
        s2.add(d * d);
        s3.add(d * d * d);
    }
    const double m2 = s2.value() / n;
    const double m3 = s3.value() / n;
    double scale = 0.0;
    for (double v : samples)
        scale = std::max(scale, std::abs(v));
    // spread at the level of rounding noise counts as a degenerate sample
    const bool degenerate = std::sqrt(m2) <= 1e-12 * scale;
    if (samples.size() >= 2 && !degenerate) {
        m.std_dev = std::sqrt(s2.value() / (n - 1.0));
        m.standard_error = m.std_dev / std::sqrt(n);
    }
    if (samples.size() >= 3 && !degenerate) {
        const double g1 = m3 / std::pow(m2, 1.5);
        m.skewness = std::sqrt(n * (n - 1.0)) / (n - 2.0) * g1;
        m.skewness_defined = true;
    }
    return m;
}

double scr(const std::vector<double>& samples, double confidence) {
    if (samples.empty())
        throw std::invalid_argument("scr of an empty sample");
    const long k = order_statistic_rank(confidence, samples.size());
    std::vector<double> copy = samples;
    auto nth = copy.begin() + (k - 1);
    std::nth_element(copy.begin(), nth, copy.end());
    return -*nth;
}

SummaryRow summarize(const ProfitDistribution& dist, double w_t) {
    if (dist.moments.n < 3)
        throw std::invalid_argument("summary needs at least 3 samples");
    SummaryRow row;
    row.mean = dist.moments.mean;
    row.std_dev = dist.moments.std_dev;
    row.skewness = dist.moments.skewness;
    row.skewness_defined = dist.moments.skewness_defined;
    row.scr = dist.scr;
    row.mean_ratio = w_t > 0.0 ? row.mean / w_t : 0.0;
    row.scr_ratio = w_t > 0.0 ? row.scr / w_t : 0.0;
    return row;
}

PortfolioState project_state(const PolicySpec& spec, const Cohort& cohort,
                             const LifeTable& second_order, int t) {
    cohort.validate();
    PortfolioState state;
    state.t = t;
    const double survival = second_order.npx(spec.issue_age, t);
    state.l = std::lround(static_cast<double>(cohort.l0) * survival);
    state.w = state.l == 0 ? 0.0 : cohort.total_sum() * survival;
    return state;
}

YearModel make_year_model(const PolicySpec& spec, const Cohort& cohort,
                          std::shared_ptr<const LifeTable> second_order, int t,
                          const YieldCurve& curve_t, const VasicekParams& vasicek) {
    if (!second_order)
        throw ContractError("missing second-order table");
    YearModel m;
    m.spec = spec;
    m.premiums = price(spec);
    m.second_order = second_order;
    m.bases = make_year_bases(spec, m.premiums, t, curve_t, *second_order);
    m.state = project_state(spec, cohort, *second_order, t);
    m.vasicek = vasicek;
    if (!cohort.per_policy_sums.empty()) {
        m.claim_cv = population_cv(cohort.per_policy_sums);
        if (m.state.l == cohort.l0)
            m.policy_sums = cohort.per_policy_sums;
    } else {
        m.claim_cv = cohort.sum_cv;
    }
    return m;
}

PathOutcome simulate_path(const YearModel& model, const SimulationConfig& config,
                          std::uint64_t index) {
    Xoshiro256 rng = Xoshiro256::substream(config.seed, index);
    const YearBases& bases = model.bases;
    const PortfolioState& state = model.state;
    const int t_next = state.t + 1;

    PathOutcome out;
    out.asset_return = config.asset_return.value_or(bases.one_year_spot);

    // year-end rates first so the demographic draws never shift the rate stream
    if (t_next >= model.spec.duration) {
        out.be_next = maturity_benefit(model.spec.kind);
    } else if (config.rate_model == RateModel::forward) {
        out.be_next = bases.expected_be_next;
    } else {
        double draw = 0.0;
        if (model.vasicek.sigma > 0.0) {
            std::normal_distribution<double> normal(0.0, 1.0);
            draw = normal(rng);
        }
        const YieldCurve curve =
            vasicek_year_curve(model.vasicek, draw, t_next, model.spec.duration - t_next);
        out.be_next =
            best_estimate_rate(model.spec, model.premiums, t_next, curve, *model.second_order);
    }

    if (state.l == 0) {
        out.w_next = 0.0;
        return out;
    }

    const long lapsed = std::lround(config.lapse_rate * static_cast<double>(state.l));
    const double mean_sum = state.w / static_cast<double>(state.l);
    out.s = static_cast<double>(lapsed) * mean_sum;
    const long exposed = state.l - lapsed;
    const double in_force = state.w - out.s;

    const long deaths = simulate_deaths(exposed, bases.q_second, rng);
    if (deaths == exposed) {
        out.z = in_force;
    } else if (deaths > 0 && lapsed == 0 &&
               model.policy_sums.size() == static_cast<std::size_t>(state.l)) {
        // Floyd's sampling of `deaths` distinct policies
        std::unordered_set<long> chosen;
        const long n = state.l;
        for (long j = n - deaths; j < n; ++j) {
            std::uniform_int_distribution<long> pick(0, j);
            const long r = pick(rng);
            if (!chosen.insert(r).second)
                chosen.insert(j);
        }
        std::vector<long> ids(chosen.begin(), chosen.end());
        std::sort(ids.begin(), ids.end());
        double z = 0.0;
        for (long id : ids)
            z += model.policy_sums[static_cast<std::size_t>(id)];
        out.z = z;
    } else if (deaths > 0) {
        if (model.claim_cv == 0.0) {
            out.z = static_cast<double>(deaths) * mean_sum;
        } else {
            const LogNormalParams p = lognormal_params_from_mean_cv(mean_sum, model.claim_cv);
            std::lognormal_distribution<double> claim(p.mu, p.s);
            double z = 0.0;
            for (long k = 0; k < deaths; ++k)
                z += claim(rng);
            out.z = std::min(z, in_force);
        }
    }
    out.x = death_benefit(model.spec.kind) * out.z;
    out.w_next = state.w - out.s - out.z;
    return out;
}

SimulationResult simulate_one_year(const YearModel& model, const SimulationConfig& config) {
    config.validate();
    model.state.validate();
    const std::size_t n = static_cast<std::size_t>(config.n_sims);

    SimulationResult result;
    result.w_t = model.state.w;
    result.mcv.samples.assign(n, 0.0);
    result.local_gaap.samples.assign(n, 0.0);
    std::vector<double> conservation(n, 0.0);

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const PathOutcome out = simulate_path(model, config, i);
            result.mcv.samples[i] = demographic_profit(model.state, out, model.bases);
            result.local_gaap.samples[i] = local_gaap_profit(model.state, out, model.bases);
            conservation[i] = std::abs(model.state.w - out.s - out.z - out.w_next);
        }
    };

    unsigned workers = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::size_t>(n, 1024))));
    if (workers == 1) {
        run_range(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(n, w * chunk);
            const std::size_t end = std::min(n, begin + chunk);
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool)
            th.join();
    }

    for (double c : conservation)
        result.max_conservation_error = std::max(result.max_conservation_error, c);

    for (ProfitDistribution* d : {&result.mcv, &result.local_gaap}) {
        d->moments = compute_moments(d->samples);
        d->scr = scr(d->samples, config.confidence);
        d->scr_ratio = result.w_t > 0.0 ? d->scr / result.w_t : 0.0;
    }

    const long lapsed = std::lround(config.lapse_rate * static_cast<double>(model.state.l));
    const double s = model.state.l > 0
                         ? static_cast<double>(lapsed) * model.state.w / static_cast<double>(model.state.l)
                         : 0.0;
    result.expected_mcv = expected_demographic_profit(model.state, model.bases, s);
    result.expected_lg = expected_demographic_split(model.state, model.bases, s).local_gaap;
    return result;
}

Moments local_gaap_theoretical_moments(const YearModel& model, double lapse_rate) {
    Moments m;
    const PortfolioState& state = model.state;
    if (state.l == 0)
        return m;
    const long lapsed = std::lround(lapse_rate * static_cast<double>(state.l));
    const double q = model.bases.q_second;
    const double d = model.bases.sum_at_risk;
    const double mean_sum = state.w / static_cast<double>(state.l);
    const double in_force = state.w - static_cast<double>(lapsed) * mean_sum;

    // cumulants of the eliminated sums z
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    if (lapsed == 0 && model.policy_sums.size() == static_cast<std::size_t>(state.l)) {
        // each policy dies independently with probability q
        CompensatedSum c1, c2, c3;
        for (double c : model.policy_sums) {
            c1.add(c);
            c2.add(c * c);
            c3.add(c * c * c);
        }
        k1 = q * c1.value();
        k2 = q * (1.0 - q) * c2.value();
        k3 = q * (1.0 - q) * (1.0 - 2.0 * q) * c3.value();
    } else {
        // compound binomial with lognormal claims
        const double lives = static_cast<double>(state.l - lapsed);
        const double g = 1.0 + model.claim_cv * model.claim_cv;
        const double m1 = mean_sum;
        const double m2 = mean_sum * mean_sum * g;
        const double m3 = mean_sum * mean_sum * mean_sum * g * g * g;
        const double n1 = lives * q;
        const double n2 = lives * q * (1.0 - q);
        const double n3 = lives * q * (1.0 - q) * (1.0 - 2.0 * q);
        k1 = n1 * m1;
        k2 = n2 * m1 * m1 + n1 * (m2 - m1 * m1);
        k3 = n3 * m1 * m1 * m1 + 3.0 * n2 * m1 * (m2 - m1 * m1) +
             n1 * (m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1);
    }
    m.n = 0;
    m.mean = d * (model.bases.q_first * in_force - k1);
    m.std_dev = std::abs(d) * std::sqrt(std::max(k2, 0.0));
    if (k2 > 0.0 && d != 0.0) {
        m.skewness = (d > 0.0 ? -1.0 : 1.0) * k3 / std::pow(k2, 1.5);
        m.skewness_defined = true;
    }
    return m;
}

} // namespace demrisk
