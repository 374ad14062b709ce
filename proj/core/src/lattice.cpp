#include "primesphere/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "primesphere/arith.hpp"
#include "primesphere/errors.hpp"
#include "primesphere/numeric.hpp"

namespace psph {

namespace {

// base^k, saturating at cap+1 so comparisons against cap stay exact.
std::int64_t ipow_capped(std::int64_t base, int k, std::int64_t cap) {
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i) {
        if (base != 0 && r > cap / base) return cap + 1;
        r *= base;
    }
    return r;
}

std::int64_t ceil_div_pos(std::int64_t num, std::int64_t den) {
    return (num + den - 1) / den;
}

}  // namespace

std::int64_t integer_kth_root(std::int64_t x, int k) {
    if (x < 0 || k < 1) throw DomainError("integer_kth_root: bad arguments");
    if (x <= 1) return x;
    auto r = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(x), 1.0 / k)));
    if (r < 1) r = 1;
    while (ipow_capped(r + 1, k, x) <= x) ++r;
    while (ipow_capped(r, k, x) > x) --r;
    return r;
}

SphereSpec make_sphere_spec(int n, int k, std::int64_t lambda) {
    if (n < 2) throw DomainError("sphere spec: n must be >= 2");
    if (k < 2) throw DomainError("sphere spec: k must be >= 2");
    if (lambda < 1) throw DomainError("sphere spec: lambda must be >= 1");
    SphereSpec s{n, k, lambda, 0};
    const std::int64_t r = integer_kth_root(lambda, k);
    s.N = (ipow_capped(r, k, lambda) == lambda) ? r : r + 1;
    return s;
}

int n_zero(int k) {
    if (k < 2) throw DomainError("n_zero: k must be >= 2");
    if (k <= 4) return (1 << k) + 1;
    if (k > 60) throw DomainError("n_zero: k too large");
    std::int64_t best = 0;
    for (int j = 1; j <= k - 1; ++j) {
        const std::int64_t two_j = (j < 62) ? (std::int64_t(1) << j) : std::int64_t(1) << 62;
        const std::int64_t cut = std::min<std::int64_t>(two_j, std::int64_t(j) * j + j);
        best = std::max(best, ceil_div_pos(std::int64_t(k) * j - cut, k - j + 1));
    }
    return static_cast<int>(std::int64_t(k) * k + 3 - best);
}

namespace {

struct HalfEntry {
    std::int64_t sum;
    double weight;
    std::size_t coord_offset;  // into a flat coord pool
};

// All vectors of `dim` prime coordinates with sum of k-th powers <= cap,
// appended to `pool`/`entries` in lexicographic coordinate order.
void enumerate_half(const std::vector<std::int64_t>& primes, const std::vector<double>& logs,
                    int dim, int k, std::int64_t cap, std::vector<std::int64_t>& pool,
                    std::vector<HalfEntry>& entries) {
    std::vector<std::int64_t> current(static_cast<std::size_t>(dim));
    auto rec = [&](auto&& self, int depth, std::int64_t sum, double w) -> void {
        if (depth == dim) {
            entries.push_back({sum, w, pool.size()});
            pool.insert(pool.end(), current.begin(), current.end());
            return;
        }
        for (std::size_t i = 0; i < primes.size(); ++i) {
            const std::int64_t pk = ipow_capped(primes[i], k, cap);
            if (sum + pk > cap) break;  // primes ascend
            current[static_cast<std::size_t>(depth)] = primes[i];
            self(self, depth + 1, sum + pk, w * logs[i]);
        }
    };
    rec(rec, 0, 0, 1.0);
}

PrimeSphere assemble_sorted(const SphereSpec& spec, std::vector<std::int64_t> coords,
                            std::vector<double> weights) {
    const int n = spec.n;
    const std::size_t count = weights.size();
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const std::int64_t* pa = coords.data() + a * n;
        const std::int64_t* pb = coords.data() + b * n;
        return std::lexicographical_compare(pa, pa + n, pb, pb + n);
    });
    PrimeSphere sphere;
    sphere.spec = spec;
    sphere.coords.resize(coords.size());
    sphere.weights.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t src = order[i];
        std::copy_n(coords.data() + src * n, n, sphere.coords.data() + i * n);
        sphere.weights[i] = weights[src];
    }
    sphere.total = pairwise_sum(std::span<const double>(sphere.weights));
    return sphere;
}

PrimeSphere enumerate_brute(const SphereSpec& spec) {
    const std::vector<std::int64_t> primes = primes_upto(spec.N);
    std::vector<double> logs(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) logs[i] = std::log(double(primes[i]));

    std::vector<std::int64_t> coords;
    std::vector<double> weights;
    std::vector<std::int64_t> current(static_cast<std::size_t>(spec.n));

    // plain nested search over every coordinate with exact remainder tracking
    auto rec = [&](auto&& self, int depth, std::int64_t remaining, double w) -> void {
        if (depth == spec.n) {
            if (remaining == 0) {
                coords.insert(coords.end(), current.begin(), current.end());
                weights.push_back(w);
            }
            return;
        }
        for (std::size_t i = 0; i < primes.size(); ++i) {
            const std::int64_t pk = ipow_capped(primes[i], spec.k, remaining);
            if (pk > remaining) break;
            current[static_cast<std::size_t>(depth)] = primes[i];
            self(self, depth + 1, remaining - pk, w * logs[i]);
        }
    };
    rec(rec, 0, spec.lambda, 1.0);
    return assemble_sorted(spec, std::move(coords), std::move(weights));
}

PrimeSphere enumerate_mitm(const SphereSpec& spec) {
    const std::vector<std::int64_t> primes = primes_upto(spec.N);
    std::vector<double> logs(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) logs[i] = std::log(double(primes[i]));

    const int n1 = spec.n / 2;
    const int n2 = spec.n - n1;

    std::vector<std::int64_t> pool1;
    std::vector<HalfEntry> half1;
    enumerate_half(primes, logs, n1, spec.k, spec.lambda, pool1, half1);
    std::unordered_map<std::int64_t, std::vector<std::size_t>> by_sum;
    by_sum.reserve(half1.size() * 2);
    for (std::size_t i = 0; i < half1.size(); ++i) by_sum[half1[i].sum].push_back(i);

    std::vector<std::int64_t> coords;
    std::vector<double> weights;
    std::vector<std::int64_t> tail(static_cast<std::size_t>(n2));

    auto rec = [&](auto&& self, int depth, std::int64_t remaining, double w) -> void {
        if (depth == n2) {
            auto it = by_sum.find(remaining);
            if (it == by_sum.end()) return;
            for (std::size_t idx : it->second) {
                const HalfEntry& h = half1[idx];
                coords.insert(coords.end(), pool1.begin() + h.coord_offset,
                              pool1.begin() + h.coord_offset + n1);
                coords.insert(coords.end(), tail.begin(), tail.end());
                weights.push_back(h.weight * w);
            }
            return;
        }
        for (std::size_t i = 0; i < primes.size(); ++i) {
            const std::int64_t pk = ipow_capped(primes[i], spec.k, remaining);
            if (pk > remaining) break;
            tail[static_cast<std::size_t>(depth)] = primes[i];
            self(self, depth + 1, remaining - pk, w * logs[i]);
        }
    };
    // leave the smallest-power slack for the stored half: tail sums run over
    // remaining >= 0; sums with no partner are rejected by the map lookup
    rec(rec, 0, spec.lambda, 1.0);
    return assemble_sorted(spec, std::move(coords), std::move(weights));
}

}  // namespace

PrimeSphere enumerate_prime_points(const SphereSpec& spec, EnumAlgorithm algo,
                                   const EnumBudget& budget) {
    if (spec.lambda > budget.lambda_max)
        throw ResourceError("enumerate_prime_points: lambda exceeds the enumeration budget");
    return (algo == EnumAlgorithm::brute_force) ? enumerate_brute(spec) : enumerate_mitm(spec);
}

double weighted_count(const PrimeSphere& sphere) { return sphere.total; }

double hua_ratio(const PrimeSphere& sphere) {
    if (sphere.total <= 0.0) throw DomainError("hua_ratio: P(lambda) = 0");
    const double exponent = double(sphere.spec.n) / sphere.spec.k - 1.0;
    return sphere.total / std::pow(double(sphere.spec.lambda), exponent);
}

SummaryScanner::SummaryScanner(int n, int k, std::int64_t lambda_max)
    : n_(n), k_(k), lambda_max_(lambda_max) {
    if (n < 2 || k < 2 || lambda_max < 1) throw DomainError("SummaryScanner: bad arguments");
    const std::int64_t nmax = integer_kth_root(lambda_max, k);
    const std::vector<std::int64_t> primes = primes_upto(nmax);
    std::vector<double> logs(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) logs[i] = std::log(double(primes[i]));

    const int n1 = n / 2;
    const int n2 = n - n1;

    // sparse aggregated table for the small half
    {
        std::vector<std::int64_t> pool;
        std::vector<HalfEntry> entries;
        enumerate_half(primes, logs, n1, k, lambda_max, pool, entries);
        std::unordered_map<std::int64_t, std::size_t> pos;
        for (const HalfEntry& e : entries) {
            auto [it, inserted] = pos.emplace(e.sum, half_total_.size());
            if (inserted) {
                half_sums_.emplace_back(e.sum, half_total_.size());
                half_total_.push_back(0.0);
                half_max_.push_back(0.0);
                half_count_.push_back(0);
            }
            const std::size_t j = it->second;
            half_total_[j] += e.weight;
            half_max_[j] = std::max(half_max_[j], e.weight);
            half_count_[j] += 1;
        }
        std::sort(half_sums_.begin(), half_sums_.end());
    }

    // flat tables for the big half
    rest_total_.assign(static_cast<std::size_t>(lambda_max) + 1, 0.0);
    rest_max_.assign(static_cast<std::size_t>(lambda_max) + 1, 0.0);
    rest_count_.assign(static_cast<std::size_t>(lambda_max) + 1, 0);
    std::vector<std::int64_t> pk(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) pk[i] = ipow_capped(primes[i], k, lambda_max);

    auto rec = [&](auto&& self, int depth, std::int64_t sum, double w) -> void {
        if (depth == n2) {
            const auto s = static_cast<std::size_t>(sum);
            rest_total_[s] += w;
            rest_max_[s] = std::max(rest_max_[s], w);
            rest_count_[s] += 1;
            return;
        }
        for (std::size_t i = 0; i < primes.size(); ++i) {
            if (sum + pk[i] > lambda_max) break;
            self(self, depth + 1, sum + pk[i], w * logs[i]);
        }
    };
    rec(rec, 0, 0, 1.0);
}

SphereSummary SummaryScanner::summarize(std::int64_t lambda) const {
    if (lambda < 1 || lambda > lambda_max_)
        throw DomainError("SummaryScanner: lambda outside the prepared range");
    SphereSummary s;
    s.lambda = lambda;
    std::vector<double> parts;
    parts.reserve(half_sums_.size());
    for (const auto& [sum, j] : half_sums_) {
        if (sum > lambda) break;
        const auto rest = static_cast<std::size_t>(lambda - sum);
        if (rest_count_[rest] == 0) continue;
        parts.push_back(half_total_[j] * rest_total_[rest]);
        s.count += half_count_[j] * rest_count_[rest];
        s.max_weight = std::max(s.max_weight, half_max_[j] * rest_max_[rest]);
    }
    s.total = pairwise_sum(std::span<const double>(parts));
    return s;
}

std::vector<std::vector<std::int64_t>> enumerate_integer_points(const SphereSpec& spec,
                                                                const EnumBudget& budget) {
    if (spec.k != 2)
        throw UnsupportedError("enumerate_integer_points: integer spheres only for k = 2");
    if (spec.lambda > budget.lambda_max)
        throw ResourceError("enumerate_integer_points: lambda exceeds the enumeration budget");
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> current(static_cast<std::size_t>(spec.n));
    auto rec = [&](auto&& self, int depth, std::int64_t remaining) -> void {
        if (depth == spec.n) {
            if (remaining == 0) out.push_back(current);
            return;
        }
        const std::int64_t r = integer_kth_root(remaining, 2);
        for (std::int64_t y = -r; y <= r; ++y) {
            current[static_cast<std::size_t>(depth)] = y;
            self(self, depth + 1, remaining - y * y);
        }
    };
    rec(rec, 0, spec.lambda);
    return out;  // already lexicographic: coordinates ascend left to right
}

ProgressionRule parse_progression_rule(const std::string& text, int n, int k) {
    ProgressionRule rule;
    if (text == "all") {
        rule.kind = ProgressionRule::Kind::all;
        return rule;
    }
    if (text == "nonempty") {
        rule.kind = ProgressionRule::Kind::nonempty;
        return rule;
    }
    if (text == "default") {
        if (k == 2) {
            rule.kind = ProgressionRule::Kind::congruence;
            rule.a = n % 24;
            rule.m = 24;
        } else {
            rule.kind = ProgressionRule::Kind::nonempty;
        }
        return rule;
    }
    const auto sep = text.find('%');
    if (sep == std::string::npos)
        throw DomainError("progression rule: expected all|nonempty|default|a%m, got '" + text +
                          "'");
    try {
        rule.kind = ProgressionRule::Kind::congruence;
        rule.a = std::stoll(text.substr(0, sep));
        rule.m = std::stoll(text.substr(sep + 1));
    } catch (const std::exception&) {
        throw DomainError("progression rule: cannot parse '" + text + "'");
    }
    if (rule.m < 1) throw DomainError("progression rule: modulus must be >= 1");
    rule.a = ((rule.a % rule.m) + rule.m) % rule.m;
    return rule;
}

std::vector<std::int64_t> progression_filter(int n, int k, std::int64_t lambda_min,
                                             std::int64_t lambda_max,
                                             const ProgressionRule& rule) {
    std::vector<std::int64_t> out;
    if (lambda_max < lambda_min) return out;
    lambda_min = std::max<std::int64_t>(lambda_min, 1);
    switch (rule.kind) {
        case ProgressionRule::Kind::all:
            for (std::int64_t l = lambda_min; l <= lambda_max; ++l) out.push_back(l);
            break;
        case ProgressionRule::Kind::congruence: {
            std::int64_t first = lambda_min + ((rule.a - lambda_min) % rule.m + rule.m) % rule.m;
            for (std::int64_t l = first; l <= lambda_max; l += rule.m) out.push_back(l);
            break;
        }
        case ProgressionRule::Kind::nonempty: {
            SummaryScanner scanner(n, k, lambda_max);
            for (std::int64_t l = lambda_min; l <= lambda_max; ++l)
                if (scanner.summarize(l).count > 0) out.push_back(l);
            break;
        }
    }
    return out;
}

}  // namespace psph
