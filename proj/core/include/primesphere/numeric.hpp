#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace psph {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// e(t) = exp(2*pi*i*t)
inline std::complex<double> unit_phase(double t) {
    return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

// e(num/den) with the rational argument reduced exactly before any floating
// conversion; num may be negative, den >= 1.
inline std::complex<double> unit_phase_rational(std::int64_t num, std::int64_t den) {
    num %= den;
    if (num < 0) num += den;
    return unit_phase(static_cast<double>(num) / static_cast<double>(den));
}

// u reduced mod 1 into [0, 1)
inline double wrap_unit(double u) {
    double r = u - std::floor(u);
    return (r >= 1.0) ? 0.0 : r;
}

// u reduced mod 1 into [-1/2, 1/2)
inline double wrap_half(double u) {
    double r = u - std::round(u);
    return (r >= 0.5) ? r - 1.0 : r;
}

namespace detail {
template <typename T>
T pairwise_sum_impl(const T* data, std::size_t n) {
    if (n <= 16) {
        T acc{};
        for (std::size_t i = 0; i < n; ++i) acc += data[i];
        return acc;
    }
    std::size_t half = n / 2;
    return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}
}  // namespace detail

inline double pairwise_sum(std::span<const double> v) {
    return detail::pairwise_sum_impl(v.data(), v.size());
}
inline std::complex<double> pairwise_sum(std::span<const std::complex<double>> v) {
    return detail::pairwise_sum_impl(v.data(), v.size());
}

// Composite 16-point Gauss-Legendre nodes/weights on [a, b] with at least
// `min_points` nodes. Node count is rounded up to a whole number of panels.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule composite_gauss_legendre(double a, double b, int min_points);

}  // namespace psph
