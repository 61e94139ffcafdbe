#ifndef DEMRISK_CALIBRATION_HPP
#define DEMRISK_CALIBRATION_HPP

#include "demrisk/contract.hpp"
#include "demrisk/curve.hpp"
#include "demrisk/lifetable.hpp"

#include <vector>

namespace demrisk {

// Nodes and weights integrating against the standard normal density.
struct NormalQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Hermite rule with n points (Newton iteration on the Hermite recurrence).
NormalQuadrature gauss_hermite_normal(int n);

// Fixed model parameters and the search interval for the initial short rate.
struct VasicekConfig {
    double a = 0.1;
    double b = 0.01;
    double sigma = 0.006;
    double r0_min = -0.5;
    double r0_max = 0.5;
    int quadrature_nodes = 64;
};

// E[be_{t+1}] over the year-end Vasicek curve, by quadrature over the normal draw.
double expected_best_estimate(const VasicekParams& params, const PolicySpec& spec,
                              const PremiumSchedule& premiums, int t_next, const LifeTable& table,
                              const NormalQuadrature& rule);

struct VasicekCalibration {
    VasicekParams params;
    double target = 0.0;   // be_{t+1} on the forward-implied curve
    double achieved = 0.0; // quadrature mean at the calibrated params
    double residual() const { return achieved - target; }
};

// Solves for r0 so that the expected year-end best estimate equals its forward-implied value.
VasicekCalibration calibrate_vasicek(const YieldCurve& curve_t, const PolicySpec& spec, int t,
                                     const LifeTable& table, const VasicekConfig& config);

} // namespace demrisk

#endif
