#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "primesphere/lattice.hpp"

namespace psph {

using Point = std::vector<std::int64_t>;

// Finitely supported complex function on Z^n. Sparse map keyed by the point,
// iterated in lexicographic order; exact zeros are pruned on insertion.
class LatticeFunction {
  public:
    explicit LatticeFunction(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    std::size_t support_size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    void set(Point p, std::complex<double> v);
    void add(const Point& p, std::complex<double> v);
    std::complex<double> at(const Point& p) const;  // 0 off support

    const std::map<Point, std::complex<double>>& values() const { return values_; }

    static LatticeFunction delta(int dim);                      // delta_0
    static LatticeFunction indicator_box(int dim, std::int64_t lo, std::int64_t hi);

  private:
    int dim_;
    std::map<Point, std::complex<double>> values_;
};

// (sum |f|^p)^{1/p}; max |f| for p = infinity (pass p = INFINITY).
double lp_norm(const LatticeFunction& f, double p);

// sigma_lambda: the probability measure log x / P(lambda) on the prime sphere.
struct SphericalMeasure {
    std::shared_ptr<const PrimeSphere> sphere;
    std::vector<double> mass;  // per sphere point, sums to 1

    const SphereSpec& spec() const { return sphere->spec; }
    double sup_mass() const;
    // sum_x sigma(x)^p)^{1/p} over atoms; max for p = infinity
    double atom_lp(double p) const;
};
SphericalMeasure sigma_measure(std::shared_ptr<const PrimeSphere> sphere);

// A_lambda f(l) = sum_p sigma(p) f(p - l), the explicit sum taken literally.
LatticeFunction prime_average(const SphericalMeasure& measure, const LatticeFunction& f);

// S_lambda f(x): unweighted average over integer points |y|^2 = lambda of f(x - y).
LatticeFunction integer_average(const SphereSpec& spec, const LatticeFunction& f,
                                const EnumBudget& budget = {});

// Pointwise max over the block of |A_lambda delta_0| = max_lambda sigma_lambda(l).
LatticeFunction dyadic_max_delta(const std::vector<SphericalMeasure>& block);

}  // namespace psph
