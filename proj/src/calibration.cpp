#include "demrisk/calibration.hpp"

#include "demrisk/valuation.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace demrisk {

NormalQuadrature gauss_hermite_normal(int n) {
    if (n < 1)
        throw std::invalid_argument("quadrature needs at least one node");
    NormalQuadrature rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);

    const double pim4 = std::pow(std::numbers::pi, -0.25);
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        // initial guesses for the physicists' Hermite roots, largest first
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * rule.nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * rule.nodes[1];
        else
            z = 2.0 * z - rule.nodes[static_cast<std::size_t>(i - 2)];

        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z)))
                break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = z;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = -z;
        rule.weights[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / (pp * pp);
    }
    // change of variable to the standard normal: x = sqrt(2) z, w / sqrt(pi)
    for (int i = 0; i < n; ++i) {
        rule.nodes[static_cast<std::size_t>(i)] *= std::numbers::sqrt2;
        rule.weights[static_cast<std::size_t>(i)] /= std::sqrt(std::numbers::pi);
    }
    return rule;
}

double expected_best_estimate(const VasicekParams& params, const PolicySpec& spec,
                              const PremiumSchedule& premiums, int t_next, const LifeTable& table,
                              const NormalQuadrature& rule) {
    const int remaining = spec.duration - t_next;
    if (remaining <= 0)
        return best_estimate_rate(spec, premiums, t_next, YieldCurve::flat(0.0, 1), table);
    double mean = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const YieldCurve curve = vasicek_year_curve(params, rule.nodes[i], t_next, remaining);
        mean += rule.weights[i] * best_estimate_rate(spec, premiums, t_next, curve, table);
    }
    return mean;
}

VasicekCalibration calibrate_vasicek(const YieldCurve& curve_t, const PolicySpec& spec, int t,
                                     const LifeTable& table, const VasicekConfig& config) {
    if (t < 0 || t >= spec.duration)
        throw ContractError("calibration needs 0 <= t < n");
    const PremiumSchedule premiums = price(spec);

    VasicekCalibration out;
    out.params.a = config.a;
    out.params.b = config.b;
    out.params.sigma = config.sigma;
    out.params.r0 = config.b;
    out.params.validate();

    if (t + 1 == spec.duration) {
        // be at maturity is the benefit itself, independent of rates
        out.target = maturity_benefit(spec.kind);
        out.achieved = out.target;
        return out;
    }

    out.target = best_estimate_rate(spec, premiums, t + 1, forward_implied_curve(curve_t), table);
    const NormalQuadrature rule = gauss_hermite_normal(config.quadrature_nodes);

    auto gap = [&](double r0) {
        VasicekParams p = out.params;
        p.r0 = r0;
        return expected_best_estimate(p, spec, premiums, t + 1, table, rule) - out.target;
    };

    // r0 whose mean year-end short rate equals the one-year forward, as the starting point
    const double fwd = std::log1p(curve_t.forward(1));
    const double decay = std::exp(-config.a);
    double guess = (fwd - config.b * (1.0 - decay)) / decay;
    guess = std::clamp(guess, config.r0_min, config.r0_max);

    constexpr int steps = 200;
    const double step = (config.r0_max - config.r0_min) / steps;
    const double g0 = gap(guess);
    if (g0 == 0.0) {
        out.params.r0 = guess;
        out.achieved = out.target;
        return out;
    }
    // expand outwards from the guess until the gap changes sign
    double lo = 0.0;
    double hi = 0.0;
    bool found = false;
    double left = guess;
    double right = guess;
    double g_left = g0;
    double g_right = g0;
    for (int k = 1; k <= steps && !found; ++k) {
        const double nr = guess + k * step;
        if (nr <= config.r0_max) {
            const double gr = gap(nr);
            if ((gr <= 0.0) != (g_right <= 0.0)) {
                lo = right;
                hi = nr;
                found = true;
                break;
            }
            right = nr;
            g_right = gr;
        }
        const double nl = guess - k * step;
        if (nl >= config.r0_min) {
            const double gl = gap(nl);
            if ((gl <= 0.0) != (g_left <= 0.0)) {
                lo = nl;
                hi = left;
                found = true;
                break;
            }
            left = nl;
            g_left = gl;
        }
    }
    if (!found)
        throw CurveError("vasicek calibration: no root in r0 range [" +
                         std::to_string(config.r0_min) + ", " + std::to_string(config.r0_max) + "]");

    std::uintmax_t max_iter = 200;
    const auto tol = boost::math::tools::eps_tolerance<double>(50);
    const auto [a, b] = boost::math::tools::toms748_solve(gap, lo, hi, tol, max_iter);
    const double r0 = 0.5 * (a + b);
    out.params.r0 = r0;
    out.achieved = out.target + gap(r0);
    return out;
}

} // namespace demrisk
