#include "primesphere/operators.hpp"

#include <algorithm>
#include <cmath>

#include "primesphere/errors.hpp"
#include "primesphere/numeric.hpp"

namespace psph {

void LatticeFunction::set(Point p, std::complex<double> v) {
    if (static_cast<int>(p.size()) != dim_) throw DomainError("LatticeFunction: dimension mismatch");
    if (v == std::complex<double>{}) {
        values_.erase(p);
        return;
    }
    values_[std::move(p)] = v;
}

void LatticeFunction::add(const Point& p, std::complex<double> v) {
    if (static_cast<int>(p.size()) != dim_) throw DomainError("LatticeFunction: dimension mismatch");
    auto it = values_.find(p);
    if (it == values_.end()) {
        if (v != std::complex<double>{}) values_.emplace(p, v);
        return;
    }
    it->second += v;
    if (it->second == std::complex<double>{}) values_.erase(it);
}

std::complex<double> LatticeFunction::at(const Point& p) const {
    auto it = values_.find(p);
    return it == values_.end() ? std::complex<double>{} : it->second;
}

LatticeFunction LatticeFunction::delta(int dim) {
    LatticeFunction f(dim);
    f.set(Point(static_cast<std::size_t>(dim), 0), 1.0);
    return f;
}

LatticeFunction LatticeFunction::indicator_box(int dim, std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw DomainError("indicator_box: empty range");
    LatticeFunction f(dim);
    Point p(static_cast<std::size_t>(dim), lo);
    for (;;) {
        f.set(p, 1.0);
        int j = dim - 1;
        while (j >= 0 && p[static_cast<std::size_t>(j)] == hi) {
            p[static_cast<std::size_t>(j)] = lo;
            --j;
        }
        if (j < 0) break;
        ++p[static_cast<std::size_t>(j)];
    }
    return f;
}

double lp_norm(const LatticeFunction& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& [pt, v] : f.values()) m = std::max(m, std::abs(v));
        return m;
    }
    if (p < 1.0) throw DomainError("lp_norm: p must be >= 1");
    std::vector<double> terms;
    terms.reserve(f.support_size());
    for (const auto& [pt, v] : f.values()) terms.push_back(std::pow(std::abs(v), p));
    return std::pow(pairwise_sum(std::span<const double>(terms)), 1.0 / p);
}

double SphericalMeasure::sup_mass() const {
    double m = 0.0;
    for (double v : mass) m = std::max(m, v);
    return m;
}

double SphericalMeasure::atom_lp(double p) const {
    if (std::isinf(p)) return sup_mass();
    if (p < 1.0) throw DomainError("atom_lp: p must be >= 1");
    std::vector<double> terms(mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i) terms[i] = std::pow(mass[i], p);
    return std::pow(pairwise_sum(std::span<const double>(terms)), 1.0 / p);
}

SphericalMeasure sigma_measure(std::shared_ptr<const PrimeSphere> sphere) {
    if (!sphere || sphere->total <= 0.0)
        throw DomainError("sigma_measure: P(lambda) = 0, measure undefined");
    SphericalMeasure m;
    m.mass.resize(sphere->size());
    for (std::size_t i = 0; i < sphere->size(); ++i) m.mass[i] = sphere->weights[i] / sphere->total;
    m.sphere = std::move(sphere);
    return m;
}

LatticeFunction prime_average(const SphericalMeasure& measure, const LatticeFunction& f) {
    const PrimeSphere& sphere = *measure.sphere;
    const int n = sphere.spec.n;
    if (f.dim() != n) throw DomainError("prime_average: dimension mismatch");
    LatticeFunction out(n);
    Point l(static_cast<std::size_t>(n));
    // A f(l) = sum_p sigma(p) f(p - l), evaluated over p - s for s in supp f
    for (std::size_t i = 0; i < sphere.size(); ++i) {
        const auto p = sphere.point(i);
        for (const auto& [s, v] : f.values()) {
            for (int j = 0; j < n; ++j) l[static_cast<std::size_t>(j)] = p[j] - s[j];
            out.add(l, measure.mass[i] * v);
        }
    }
    return out;
}

LatticeFunction integer_average(const SphereSpec& spec, const LatticeFunction& f,
                                const EnumBudget& budget) {
    if (f.dim() != spec.n) throw DomainError("integer_average: dimension mismatch");
    const auto points = enumerate_integer_points(spec, budget);
    if (points.empty()) throw DomainError("integer_average: empty integer sphere");
    const double inv = 1.0 / static_cast<double>(points.size());
    LatticeFunction out(spec.n);
    Point x(static_cast<std::size_t>(spec.n));
    // S f(x) = (1/#points) sum_y f(x - y); substitute x = s + y
    for (const auto& y : points) {
        for (const auto& [s, v] : f.values()) {
            for (int j = 0; j < spec.n; ++j) x[static_cast<std::size_t>(j)] = s[j] + y[j];
            out.add(x, inv * v);
        }
    }
    return out;
}

LatticeFunction dyadic_max_delta(const std::vector<SphericalMeasure>& block) {
    if (block.empty()) throw DomainError("dyadic_max_delta: empty block");
    const int n = block.front().spec().n;
    LatticeFunction out(n);
    Point p(static_cast<std::size_t>(n));
    for (const SphericalMeasure& m : block) {
        if (m.spec().n != n) throw DomainError("dyadic_max_delta: dimension mismatch");
        const PrimeSphere& sphere = *m.sphere;
        for (std::size_t i = 0; i < sphere.size(); ++i) {
            const auto pt = sphere.point(i);
            p.assign(pt.begin(), pt.end());
            const double cur = out.at(p).real();
            if (m.mass[i] > cur) out.set(p, m.mass[i]);
        }
    }
    return out;
}

}  // namespace psph
