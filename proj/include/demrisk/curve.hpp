#ifndef DEMRISK_CURVE_HPP
#define DEMRISK_CURVE_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace demrisk {

class CurveError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Annually compounded spot rates for maturities 1..max_maturity, observed at valuation_time.
class YieldCurve {
  public:
    YieldCurve(int valuation_time, std::vector<double> spot);

    static YieldCurve flat(double rate, int max_maturity, int valuation_time = 0);

    int valuation_time() const { return valuation_time_; }
    int max_maturity() const { return static_cast<int>(spot_.size()); }
    const std::vector<double>& spots() const { return spot_; }

    double spot(int maturity) const;

    // (1 + i(0,h))^-h, equal to 1 at h = 0.
    double discount(int h) const;

    // One-year forward rate for (h, h+1).
    double forward(int h) const;

  private:
    int valuation_time_;
    std::vector<double> spot_;
};

// Curve one year later whose accumulation factors are those implied by today's forwards.
YieldCurve forward_implied_curve(const YieldCurve& curve);

// Applies forward_implied_curve `years` times.
YieldCurve roll_forward(const YieldCurve& curve, int years);

// Reads `maturity,spot_rate` rows (contiguous maturities from 1, optional header).
YieldCurve load_curve(const std::filesystem::path& path);
YieldCurve parse_curve(const std::string& text);

struct VasicekParams {
    double a = 0.1;       // mean reversion speed, per year
    double b = 0.01;      // long-run mean of the short rate (continuous)
    double sigma = 0.006; // short-rate volatility
    double r0 = 0.01;     // short rate at the start of the year

    void validate() const;

    // Mean and standard deviation of the short rate one year ahead.
    double mean_short_rate() const;
    double short_rate_stddev() const;

    // Short rate after one year for a standard normal draw (exact transition).
    double short_rate(double normal_draw) const;

    // Closed-form zero-coupon bond price for time to maturity tau given short rate r.
    double bond_price(double tau, double r) const;
};

// Year-end curve (valuation_time, maturities 1..max_maturity) implied by the simulated short rate.
YieldCurve vasicek_year_curve(const VasicekParams& params, double normal_draw, int valuation_time,
                              int max_maturity);

} // namespace demrisk

#endif
