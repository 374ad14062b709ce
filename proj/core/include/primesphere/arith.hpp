#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

namespace psph {

// Exact integer / modular arithmetic and the complete exponential sums
// behind the singular series. Everything here is deterministic and uses
// trial-division factorization; moduli stay small at desk scale.

std::int64_t euler_phi(std::int64_t n);
std::int64_t divisor_tau(std::int64_t n);
std::int64_t divisor_sigma(std::int64_t n);

std::vector<std::int64_t> primes_upto(std::int64_t limit);
bool is_prime(std::int64_t n);

// Multiplicative group mod q. Convention: U_1 = {0}, phi(1) = 1, so q = 1
// sums contribute the single term e(0).
struct UnitGroup {
    std::int64_t modulus = 1;
    std::vector<std::int64_t> elements;  // strictly increasing, in [0, q)
};
UnitGroup unit_group(std::int64_t q);

// g(a,q; b,r) = (1/phi([q,r])) sum_{x in U_[q,r]} e(a x^k / q + b x / r)
struct GaussSumParams {
    int k = 2;
    std::int64_t a = 0;
    std::int64_t q = 1;
    std::int64_t b = 0;
    std::int64_t r = 1;
};
std::complex<double> gauss_g(const GaussSumParams& params);

// Memoized g(a,q;b,r) evaluations, safe for concurrent use. The exhaustive
// lemma verification and the multiplier assembly hit the same (a,q,b,r)
// tuples many times over.
class GaussCache {
  public:
    std::complex<double> g(int k, std::int64_t a, std::int64_t q, std::int64_t b, std::int64_t r);

  private:
    std::map<std::array<std::int64_t, 5>, std::complex<double>> memo_;
    std::mutex mu_;
};

// sum_{b in U_r} g(a,q;b,r) e(-b x / r); requires a in U_q.
std::complex<double> gauss_row_sum(int k, std::int64_t a, std::int64_t q, std::int64_t r,
                                   std::int64_t x, GaussCache* cache = nullptr);

// tau(gcd(q,r)) * sigma(r/gcd(q,r)) / phi(r/gcd(q,r)), the explicit constant
// that dominates |gauss_row_sum|.
double lemma_bound(std::int64_t q, std::int64_t r);

std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t mod);

}  // namespace psph
