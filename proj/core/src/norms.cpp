#include "primesphere/norms.hpp"

#include <algorithm>
#include <cmath>

#include "primesphere/errors.hpp"

namespace psph {

double endpoint_1_inf(const SphericalMeasure& measure) { return measure.sup_mass(); }

L2Endpoints endpoint_2_2(const MultiplierModel& model, int grid_resolution) {
    if (grid_resolution < 1) throw DomainError("endpoint_2_2: grid resolution must be >= 1");
    const int n = model.spec().n;
    L2Endpoints out;
    out.overlap_flag = !model.params().arcs_disjoint;
    std::vector<double> xi(static_cast<std::size_t>(n), 0.0);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
        for (int i = 0; i < n; ++i)
            xi[static_cast<std::size_t>(i)] =
                static_cast<double>(idx[static_cast<std::size_t>(i)]) / grid_resolution;
        out.sigma_sup = std::max(out.sigma_sup, std::abs(model.raw(xi)));
        out.error_sup = std::max(out.error_sup, std::abs(model.error(xi).value));
        int j = n - 1;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == grid_resolution)
            idx[static_cast<std::size_t>(j--)] = 0;
        if (j < 0) break;
    }
    return out;
}

double riesz_thorin_bound(double norm_1_inf, double norm_2_2, double p) {
    if (p < 1.0 || p > 2.0) throw DomainError("riesz_thorin_bound: p must lie in [1, 2]");
    if (norm_1_inf <= 0.0 || norm_2_2 <= 0.0)
        throw DomainError("riesz_thorin_bound: endpoint norms must be positive");
    const double t = 2.0 / p - 1.0;  // interpolation weight of the (1, inf) endpoint
    return std::pow(norm_1_inf, t) * std::pow(norm_2_2, 2.0 - 2.0 / p);
}

double delta_lower_bound(const SphericalMeasure& measure, double p) {
    if (p < 1.0 || p > 2.0) throw DomainError("delta_lower_bound: p must lie in [1, 2]");
    if (p == 1.0) return measure.atom_lp(INFINITY);
    return measure.atom_lp(p / (p - 1.0));
}

RateFit fit_power_law(std::span<const std::pair<double, double>> samples, bool with_log) {
    if (samples.size() < 4)
        throw InsufficientDataError("fit_power_law: need at least 4 samples");
    std::vector<double> xs;
    xs.reserve(samples.size());
    for (const auto& [x, y] : samples) {
        if (x <= 1.0) throw DomainError("fit_power_law: lambda values must exceed 1");
        if (y <= 0.0) throw DomainError("fit_power_law: values must be positive");
        xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    if (std::adjacent_find(xs.begin(), xs.end()) != xs.end())
        throw DomainError("fit_power_law: lambda values must be distinct");
    const int dims = with_log ? 3 : 2;
    // normal equations for ln v = c0 + alpha ln x (+ beta ln ln x)
    double ata[3][3] = {};
    double atb[3] = {};
    for (const auto& [x, y] : samples) {
        const double row[3] = {1.0, std::log(x), with_log ? std::log(std::log(x)) : 0.0};
        const double b = std::log(y);
        for (int i = 0; i < dims; ++i) {
            for (int j = 0; j < dims; ++j) ata[i][j] += row[i] * row[j];
            atb[i] += row[i] * b;
        }
    }
    // Gaussian elimination with partial pivoting
    double m[3][4];
    for (int i = 0; i < dims; ++i) {
        for (int j = 0; j < dims; ++j) m[i][j] = ata[i][j];
        m[i][dims] = atb[i];
    }
    for (int col = 0; col < dims; ++col) {
        int pivot = col;
        for (int r = col + 1; r < dims; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
        if (std::fabs(m[pivot][col]) < 1e-300)
            throw DomainError("fit_power_law: degenerate design matrix (duplicate lambdas?)");
        std::swap(m[col], m[pivot]);
        for (int r = 0; r < dims; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int j = col; j <= dims; ++j) m[r][j] -= f * m[col][j];
        }
    }
    double coef[3] = {};
    for (int i = 0; i < dims; ++i) coef[i] = m[i][dims] / m[i][i];

    RateFit fit;
    fit.alpha = coef[1];
    fit.beta = with_log ? coef[2] : 0.0;
    fit.with_log = with_log;
    fit.n_samples = static_cast<int>(samples.size());
    double ss = 0.0;
    for (const auto& [x, y] : samples) {
        const double pred =
            coef[0] + coef[1] * std::log(x) + (with_log ? coef[2] * std::log(std::log(x)) : 0.0);
        const double resid = std::log(y) - pred;
        ss += resid * resid;
    }
    fit.rms = std::sqrt(ss / static_cast<double>(samples.size()));
    return fit;
}

ReferenceExponents reference_exponents(int n, int k, double p) {
    if (n < 2 || k < 2 || p < 1.0 || p > 2.0)
        throw DomainError("reference_exponents: bad arguments");
    const double t = 2.0 / p - 1.0;
    ReferenceExponents r;
    r.improving = (1.0 - static_cast<double>(n) / k) * t;
    r.main_term = ((2.0 - n) / k) * t;
    r.eta_p = (n / 2.0) * t;
    return r;
}

}  // namespace psph
