#pragma once

#include <span>
#include <utility>

#include "primesphere/circle_method.hpp"
#include "primesphere/operators.hpp"

namespace psph {

// Exact l^1 -> l^infty operator norm of A_lambda: ||sigma_lambda||_inf,
// attained by a delta input at the argmax atom.
double endpoint_1_inf(const SphericalMeasure& measure);

// Grid sup of |sigma^| (the l2 -> l2 norm; exactly 1, attained at 0) and of
// |E^| (controls the l2 -> l2 norm of E_lambda by Plancherel).
struct L2Endpoints {
    double sigma_sup = 0.0;
    double error_sup = 0.0;
    bool overlap_flag = false;
};
L2Endpoints endpoint_2_2(const MultiplierModel& model, int grid_resolution);

// norm_1_inf^{2/p-1} * norm_2_2^{2-2/p}, upper bound for l^p -> l^{p'}.
double riesz_thorin_bound(double norm_1_inf, double norm_2_2, double p);

// ||A_lambda delta_0||_{p'} / ||delta_0||_p = ||sigma_lambda||_{p'}, a
// certified lower bound on the l^p -> l^{p'} norm (p' = p/(p-1), inf at p=1).
double delta_lower_bound(const SphericalMeasure& measure, double p);

// Least squares for value ~ c * lambda^alpha * (log lambda)^beta in log-log
// coordinates; beta fixed to 0 unless with_log.
struct RateFit {
    double alpha = 0.0;
    double beta = 0.0;
    double rms = 0.0;
    int n_samples = 0;
    bool with_log = false;
};
RateFit fit_power_law(std::span<const std::pair<double, double>> samples, bool with_log);

// Reference decay exponents at (n, k, p): the full-operator rate
// (1-n/k)(2/p-1), the main-term rate ((2-n)/k)(2/p-1), and the integer-case
// eta_p = (n/2)(2/p-1) for comparison columns.
struct ReferenceExponents {
    double improving = 0.0;
    double main_term = 0.0;
    double eta_p = 0.0;
};
ReferenceExponents reference_exponents(int n, int k, double p);

}  // namespace psph
