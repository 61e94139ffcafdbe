#include "demrisk/curve.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

namespace demrisk {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    s = trim(s);
    if (s.empty())
        return false;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

} // namespace

YieldCurve::YieldCurve(int valuation_time, std::vector<double> spot)
    : valuation_time_(valuation_time), spot_(std::move(spot)) {
    if (spot_.empty())
        throw CurveError("yield curve has no maturities");
    for (std::size_t i = 0; i < spot_.size(); ++i) {
        const double r = spot_[i];
        const double d = std::pow(1.0 + r, -static_cast<double>(i + 1));
        if (!std::isfinite(r) || r <= -1.0 || !std::isfinite(d) || d <= 0.0)
            throw CurveError("invalid spot rate at maturity " + std::to_string(i + 1));
    }
}

YieldCurve YieldCurve::flat(double rate, int max_maturity, int valuation_time) {
    if (max_maturity < 1)
        throw CurveError("flat curve needs at least one maturity");
    return YieldCurve(valuation_time, std::vector<double>(static_cast<std::size_t>(max_maturity), rate));
}

double YieldCurve::spot(int maturity) const {
    if (maturity < 1 || maturity > max_maturity())
        throw CurveError("maturity " + std::to_string(maturity) + " beyond curve (max " +
                         std::to_string(max_maturity()) + ")");
    return spot_[static_cast<std::size_t>(maturity - 1)];
}

double YieldCurve::discount(int h) const {
    if (h == 0)
        return 1.0;
    return std::pow(1.0 + spot(h), -static_cast<double>(h));
}

double YieldCurve::forward(int h) const {
    if (h < 0)
        throw CurveError("negative forward start");
    return discount(h) / discount(h + 1) - 1.0;
}

YieldCurve forward_implied_curve(const YieldCurve& curve) {
    const int m_max = curve.max_maturity() - 1;
    if (m_max < 1)
        throw CurveError("forward-implied curve needs maturities to at least 2");
    std::vector<double> spot(static_cast<std::size_t>(m_max));
    const double d1 = curve.discount(1);
    for (int m = 1; m <= m_max; ++m) {
        const double growth = d1 / curve.discount(m + 1);
        spot[static_cast<std::size_t>(m - 1)] = std::pow(growth, 1.0 / m) - 1.0;
    }
    return YieldCurve(curve.valuation_time() + 1, std::move(spot));
}

YieldCurve roll_forward(const YieldCurve& curve, int years) {
    YieldCurve out = curve;
    for (int k = 0; k < years; ++k)
        out = forward_implied_curve(out);
    return out;
}

YieldCurve parse_curve(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t row = 0;
    bool header_allowed = true;
    std::vector<double> spot;
    while (std::getline(in, line)) {
        ++row;
        std::string_view view = trim(line);
        if (view.empty() || view.front() == '#')
            continue;
        const auto comma = view.find(',');
        if (comma == std::string_view::npos)
            throw CurveError("row " + std::to_string(row) + ": malformed row, expected 'maturity,spot_rate'");
        int maturity = 0;
        double rate = 0.0;
        if (!parse_number(view.substr(0, comma), maturity)) {
            if (!header_allowed)
                throw CurveError("row " + std::to_string(row) + ": malformed maturity");
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        if (!parse_number(view.substr(comma + 1), rate))
            throw CurveError("row " + std::to_string(row) + ": malformed spot rate");
        if (maturity != static_cast<int>(spot.size()) + 1)
            throw CurveError("row " + std::to_string(row) + ": expected maturity " +
                             std::to_string(spot.size() + 1));
        spot.push_back(rate);
    }
    return YieldCurve(0, std::move(spot));
}

YieldCurve load_curve(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw CurveError("cannot open curve file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_curve(buf.str());
}

void VasicekParams::validate() const {
    if (!(a > 0.0) || !std::isfinite(a))
        throw CurveError("vasicek.a must be positive");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw CurveError("vasicek.sigma must be non-negative");
    if (!std::isfinite(b) || !std::isfinite(r0))
        throw CurveError("vasicek.b and r0 must be finite");
}

double VasicekParams::mean_short_rate() const {
    const double decay = std::exp(-a);
    return r0 * decay + b * (1.0 - decay);
}

double VasicekParams::short_rate_stddev() const {
    return sigma * std::sqrt(-std::expm1(-2.0 * a) / (2.0 * a));
}

double VasicekParams::short_rate(double normal_draw) const {
    return mean_short_rate() + short_rate_stddev() * normal_draw;
}

double VasicekParams::bond_price(double tau, double r) const {
    const double B = -std::expm1(-a * tau) / a;
    const double logA = (B - tau) * (a * a * b - 0.5 * sigma * sigma) / (a * a) -
                        sigma * sigma * B * B / (4.0 * a);
    return std::exp(logA - B * r);
}

YieldCurve vasicek_year_curve(const VasicekParams& params, double normal_draw, int valuation_time,
                              int max_maturity) {
    if (max_maturity < 1)
        throw CurveError("vasicek curve needs at least one maturity");
    const double r1 = params.short_rate(normal_draw);
    std::vector<double> spot(static_cast<std::size_t>(max_maturity));
    for (int m = 1; m <= max_maturity; ++m) {
        const double price = params.bond_price(m, r1);
        // annual compounding from the continuous bond yield
        spot[static_cast<std::size_t>(m - 1)] = std::expm1(-std::log(price) / m);
    }
    return YieldCurve(valuation_time, std::move(spot));
}

} // namespace demrisk
