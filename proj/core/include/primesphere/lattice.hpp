#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace psph {

// One problem instance: the surface x_1^k + ... + x_n^k = lambda together
// with the canonical scale N = ceil(lambda^{1/k}).
struct SphereSpec {
    int n = 0;
    int k = 0;
    std::int64_t lambda = 0;
    std::int64_t N = 0;  // N^k >= lambda, (N-1)^k < lambda
};
SphereSpec make_sphere_spec(int n, int k, std::int64_t lambda);

// floor(x^{1/k}) by Newton + exact correction loop; no floating-point root.
std::int64_t integer_kth_root(std::int64_t x, int k);

// Dimension threshold n_0(k); callers warn (not block) when n < n_0(k).
int n_zero(int k);

// All points with prime coordinates on the surface, in lexicographic order,
// stored flat (point i occupies coords [i*n, (i+1)*n)).
struct PrimeSphere {
    SphereSpec spec;
    std::vector<std::int64_t> coords;
    std::vector<double> weights;  // log p = prod_i log p_i
    double total = 0.0;           // P(lambda)

    std::size_t size() const { return weights.size(); }
    std::span<const std::int64_t> point(std::size_t i) const {
        return {coords.data() + i * spec.n, static_cast<std::size_t>(spec.n)};
    }
};

enum class EnumAlgorithm {
    meet_in_middle,  // default
    brute_force,     // oracle
};

struct EnumBudget {
    std::int64_t lambda_max = 1'000'000;
};

PrimeSphere enumerate_prime_points(const SphereSpec& spec,
                                   EnumAlgorithm algo = EnumAlgorithm::meet_in_middle,
                                   const EnumBudget& budget = {});

double weighted_count(const PrimeSphere& sphere);

// P(lambda) / lambda^{n/k - 1}; undefined when P = 0.
double hua_ratio(const PrimeSphere& sphere);

// Aggregate data for one lambda, computed without materializing the point
// list: half-vector sum tables are combined split-by-split. Used by the
// decay scans, where only P, the top atom and the count matter.
struct SphereSummary {
    std::int64_t lambda = 0;
    double total = 0.0;       // P(lambda)
    double max_weight = 0.0;  // largest log p over points
    std::int64_t count = 0;   // number of points
};

// Shared tables for summary scans over many lambdas at fixed (n, k).
class SummaryScanner {
  public:
    SummaryScanner(int n, int k, std::int64_t lambda_max);
    SphereSummary summarize(std::int64_t lambda) const;

  private:
    int n_;
    int k_;
    std::int64_t lambda_max_;
    // sparse table for the floor(n/2)-coordinate half, flat for the rest
    std::vector<std::pair<std::int64_t, std::size_t>> half_sums_;  // (sum, index into half_*)
    std::vector<double> half_total_, half_max_;
    std::vector<std::int64_t> half_count_;
    std::vector<double> rest_total_, rest_max_;
    std::vector<std::int64_t> rest_count_;
};

// Signed integer points y with |y|^2 = lambda (k = 2 only), lexicographic.
std::vector<std::vector<std::int64_t>> enumerate_integer_points(const SphereSpec& spec,
                                                                const EnumBudget& budget = {});

// Admissible radius selection.
struct ProgressionRule {
    enum class Kind { all, congruence, nonempty } kind = Kind::all;
    std::int64_t a = 0;  // congruence: lambda ≡ a (mod m)
    std::int64_t m = 1;
};
// "all" | "nonempty" | "a%m" (e.g. "5%24") | "default"
ProgressionRule parse_progression_rule(const std::string& text, int n, int k);

std::vector<std::int64_t> progression_filter(int n, int k, std::int64_t lambda_min,
                                             std::int64_t lambda_max, const ProgressionRule& rule);

}  // namespace psph
