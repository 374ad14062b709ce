#include "primesphere/arith.hpp"

#include <algorithm>
#include <numeric>

#include "primesphere/errors.hpp"
#include "primesphere/numeric.hpp"

namespace psph {

namespace {

constexpr std::int64_t kFactorLimit = std::int64_t(1) << 50;

// (prime, exponent) pairs by trial division.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

void check_positive(std::int64_t n, const char* who) {
    if (n < 1) throw DomainError(std::string(who) + ": argument must be >= 1");
    if (n > kFactorLimit) throw DomainError(std::string(who) + ": argument too large");
}

}  // namespace

std::int64_t euler_phi(std::int64_t n) {
    check_positive(n, "euler_phi");
    std::int64_t phi = n;
    for (auto [p, e] : factorize(n)) phi -= phi / p;
    return phi;
}

std::int64_t divisor_tau(std::int64_t n) {
    check_positive(n, "divisor_tau");
    std::int64_t t = 1;
    for (auto [p, e] : factorize(n)) t *= (e + 1);
    return t;
}

std::int64_t divisor_sigma(std::int64_t n) {
    check_positive(n, "divisor_sigma");
    std::int64_t s = 1;
    for (auto [p, e] : factorize(n)) {
        std::int64_t pk = 1, geo = 1;
        for (int i = 0; i < e; ++i) { pk *= p; geo += pk; }
        s *= geo;
    }
    return s;
}

std::vector<std::int64_t> primes_upto(std::int64_t limit) {
    std::vector<std::int64_t> out;
    if (limit < 2) return out;
    std::vector<bool> comp(static_cast<std::size_t>(limit) + 1, false);
    for (std::int64_t p = 2; p <= limit; ++p) {
        if (comp[static_cast<std::size_t>(p)]) continue;
        out.push_back(p);
        for (std::int64_t m = p * p; m <= limit; m += p) comp[static_cast<std::size_t>(m)] = true;
    }
    return out;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

UnitGroup unit_group(std::int64_t q) {
    check_positive(q, "unit_group");
    UnitGroup g;
    g.modulus = q;
    if (q == 1) {
        g.elements = {0};
        return g;
    }
    for (std::int64_t a = 1; a < q; ++a)
        if (std::gcd(a, q) == 1) g.elements.push_back(a);
    return g;
}

std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t mod) {
    if (mod <= 0) throw DomainError("mod_pow: modulus must be positive");
    if (mod == 1) return 0;
    std::int64_t result = 1;
    base %= mod;
    if (base < 0) base += mod;
    while (exp > 0) {
        if (exp & 1) result = result * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return result;
}

std::complex<double> gauss_g(const GaussSumParams& params) {
    if (params.q < 1 || params.r < 1) throw DomainError("gauss_g: moduli must be >= 1");
    if (params.k < 2) throw DomainError("gauss_g: k must be >= 2");
    const std::int64_t q = params.q, r = params.r;
    const std::int64_t l = std::lcm(q, r);
    const std::int64_t a = ((params.a % q) + q) % q;
    const std::int64_t b = ((params.b % r) + r) % r;
    const UnitGroup u = unit_group(l);
    std::vector<std::complex<double>> terms;
    terms.reserve(u.elements.size());
    for (std::int64_t x : u.elements) {
        // a x^k / q + b x / r reduced to a single rational num/(q r) exactly
        const std::int64_t n1 = a * mod_pow(x, params.k, q) % q;
        const std::int64_t n2 = b * (x % r) % r;
        terms.push_back(unit_phase_rational(n1 * r + n2 * q, q * r));
    }
    return pairwise_sum(std::span<const std::complex<double>>(terms)) /
           static_cast<double>(terms.size());
}

std::complex<double> GaussCache::g(int k, std::int64_t a, std::int64_t q, std::int64_t b,
                                   std::int64_t r) {
    a = ((a % q) + q) % q;
    b = ((b % r) + r) % r;
    const std::array<std::int64_t, 5> key{k, a, q, b, r};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    const std::complex<double> val = gauss_g({k, a, q, b, r});
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.emplace(key, val).first->second;
}

std::complex<double> gauss_row_sum(int k, std::int64_t a, std::int64_t q, std::int64_t r,
                                   std::int64_t x, GaussCache* cache) {
    if (q < 1 || r < 1) throw DomainError("gauss_row_sum: moduli must be >= 1");
    const std::int64_t ared = ((a % q) + q) % q;
    if (q == 1 ? ared != 0 : std::gcd(ared, q) != 1)
        throw DomainError("gauss_row_sum: a not a unit mod q");
    const UnitGroup u = unit_group(r);
    std::vector<std::complex<double>> terms;
    terms.reserve(u.elements.size());
    for (std::int64_t b : u.elements) {
        const std::complex<double> g =
            cache ? cache->g(k, ared, q, b, r) : gauss_g({k, ared, q, b, r});
        terms.push_back(g * unit_phase_rational(-b * (((x % r) + r) % r), r));
    }
    return pairwise_sum(std::span<const std::complex<double>>(terms));
}

double lemma_bound(std::int64_t q, std::int64_t r) {
    if (q < 1 || r < 1) throw DomainError("lemma_bound: moduli must be >= 1");
    const std::int64_t d = std::gcd(q, r);
    const std::int64_t m = r / d;
    return static_cast<double>(divisor_tau(d)) * static_cast<double>(divisor_sigma(m)) /
           static_cast<double>(euler_phi(m));
}

}  // namespace psph
