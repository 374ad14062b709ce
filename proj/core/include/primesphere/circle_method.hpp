#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "primesphere/arith.hpp"
#include "primesphere/numeric.hpp"
#include "primesphere/operators.hpp"

namespace psph {

// Smooth even cutoff eta with eta = 1 on [-1,1] and eta = 0 outside (-2,2),
// built from the standard exp(-1/u) transition. psi is its tensorization.
namespace bump {
double eta(double t);
double eta_derivative_bound();  // sup |eta'|, for the documented invariant
// etahat(u) = integral of eta(t) e(-u t) dt over the real line; real and even.
double eta_hat(double u);
double psi(std::span<const double> x);
double psi_scaled(double t, std::span<const double> x);
}  // namespace bump

// Which unit appears in the e(-a x_i / q_i) phase of the Gauss component.
// The factored form uses the summation index a_i; the literal variant keeps
// the first coordinate's unit a_1 throughout (kept for comparison runs).
enum class GaussPhase { summation_index, first_index };

struct MajorArcParams {
    double B = 1.0;
    double C = 1.0;
    int Q = 1;                  // max(1, floor((log N)^C)), capped
    bool q_capped = false;      // the cap actually bit
    std::int64_t q_max = 1;     // singular-series truncation
    double theta = 0.0;         // truncation radius of the theta integral
    int quad_points = 512;      // base resolution per 1-dim integral
    bool arcs_disjoint = true;  // N >= 5 Q^3
    GaussPhase phase = GaussPhase::summation_index;
};

// Derive Q, q_max, theta and the disjointness flag from (spec, B, C).
// The (q, a) sum grows like (Q phi(Q))^n, so Q is capped (default 4).
MajorArcParams make_major_arc_params(const SphereSpec& spec, double B = 1.0, double C = 1.0,
                                     int q_cap = 4);
// Re-derive flags and check invariants after manual field edits.
void validate_major_arc_params(const SphereSpec& spec, MajorArcParams& params);

// dsigma~(0): total mass of the scaled continuous surface measure,
// Gamma(1 + 1/k)^n / Gamma(n/k).
double surface_mass(int n, int k);

// Normalized transform of the continuous k-spherical surface measure on the
// positive orthant, I(zeta)/I(0) with
//   I(zeta) = int_{|theta|<=Theta} prod_i v(theta, zeta_i) e(-theta lambda) dtheta,
//   v(theta, z) = int_0^N e(theta x^k + z x) dx.
// Every call runs the resolution-doubling check; disagreement beyond 1e-3
// throws ConvergenceError carrying both values.
std::complex<double> surface_ft(const SphereSpec& spec, const MajorArcParams& params,
                                std::span<const double> zeta);

// Truncated singular series S(lambda; a, q) = sum_{q <= q_max} sum_{a in U_q}
// e(-lambda a / q) prod_i g(a, q; a_i, q_i). `tail` is the magnitude of the
// last half-block q in (q_max/2, q_max], a convergence indicator.
struct SingularSeriesResult {
    std::complex<double> value;
    double tail = 0.0;
};
SingularSeriesResult singular_series(const SphereSpec& spec, std::span<const std::int64_t> avec,
                                     std::span<const std::int64_t> qvec, std::int64_t q_max,
                                     GaussCache* cache = nullptr);

// Residue tables for the qvec = 1 series: the q-th term depends on lambda
// only through lambda mod q, so scans over many lambdas reduce to table sums.
class SingularSeriesTable {
  public:
    SingularSeriesTable(int n, int k, std::int64_t q_limit);
    SingularSeriesResult eval(std::int64_t lambda, std::int64_t q_max) const;
    std::int64_t q_limit() const { return q_limit_; }

  private:
    int n_, k_;
    std::int64_t q_limit_;
    std::vector<std::vector<std::complex<double>>> terms_;  // [q][lambda mod q]
};

// G_x(a,q,qvec) = prod_i gauss_row_sum(k, a, q, q_i, x_i) in the factored
// (summation_index) form; the first_index variant evaluates the full vector
// sum over U_qvec with the a_1 phase.
std::complex<double> gauss_component(int k, std::int64_t a, std::int64_t q,
                                     std::span<const std::int64_t> qvec,
                                     std::span<const std::int64_t> x,
                                     GaussPhase phase = GaussPhase::summation_index,
                                     GaussCache* cache = nullptr);

struct MainTermValue {
    std::complex<double> value;
    bool overlap_flag = false;  // arcs not disjoint (N < 5 Q^3)
};

// Evaluators for the multiplier decomposition sigma^ = M^ + E^ of one sphere.
// Frequencies live on the torus; every xi coordinate is reduced mod 1 first.
class MultiplierModel {
  public:
    MultiplierModel(std::shared_ptr<const PrimeSphere> sphere, MajorArcParams params);

    const SphereSpec& spec() const { return sphere_->spec; }
    const MajorArcParams& params() const { return params_; }
    const PrimeSphere& sphere() const { return *sphere_; }
    const SphericalMeasure& measure() const { return measure_; }

    // sigma^(xi) = sum_x sigma(x) e(+x.xi)
    std::complex<double> raw(std::span<const double> xi) const;
    // Theorem-1 main term; componentwise arcs, mod-q nearest representative
    MainTermValue main(std::span<const double> xi) const;
    // raw - main
    MainTermValue error(std::span<const double> xi) const;

    // scaled surface transform J * I(zeta)/I(0); v-vectors cached per zeta
    std::complex<double> surface(std::span<const double> zeta) const;

    GaussCache& gauss_cache() const { return gauss_; }

    // One active arc (q, a) of a single coordinate: bump factor and the
    // reduced offset zeta = wrap(xi - a/q).
    struct ActiveArc {
        std::int64_t q = 1, a = 0;
        double bump = 0.0;
        double zeta = 0.0;
    };
    std::vector<ActiveArc> active_arcs(double xi_coord) const;

    std::vector<std::complex<double>> v_row(double zeta) const;  // v(theta_j, zeta) over nodes
    const QuadratureRule& theta_rule() const { return theta_rule_; }
    std::complex<double> i_zero() const { return i_zero_; }
    // S(lambda; a, q) for the arcs of one combo, memoized by the (q, a) multiset
    std::complex<double> series_for(std::span<const ActiveArc* const> combo) const;

  private:
    std::shared_ptr<const PrimeSphere> sphere_;
    MajorArcParams params_;
    SphericalMeasure measure_;
    QuadratureRule theta_rule_;
    std::complex<double> i_zero_;
    double mass_scale_;  // surface_mass(n, k)

    mutable GaussCache gauss_;
    mutable std::unordered_map<std::int64_t, std::vector<std::complex<double>>> v_cache_;
    mutable std::map<std::vector<std::pair<std::int64_t, std::int64_t>>, std::complex<double>>
        series_cache_;
    mutable std::mutex mu_;
};

// Free functions mirroring the operation names.
std::complex<double> raw_multiplier(const MultiplierModel& m, std::span<const double> xi);
MainTermValue main_multiplier(const MultiplierModel& m, std::span<const double> xi);
MainTermValue error_multiplier(const MultiplierModel& m, std::span<const double> xi);

// Closed form of main(0): J * lambda^{n/k-1} * S_trunc(lambda; 0, 1; q_max) / P.
// Only the q = 1 arc survives the bump at xi = 0 once N >= 4Q. Equal to
// main_multiplier at 0 (unit-tested); usable without materializing points.
double main_term_at_zero(const SphereSpec& spec, const MajorArcParams& params, double total_mass,
                         const SingularSeriesTable* table = nullptr, GaussCache* cache = nullptr);

// K_lambda on the box [-R, R]^n: M^ sampled on the L^n grid (L = 2R + 1) and
// inverted by the discrete transform. The per-theta-node rank-1 structure of
// the sampled multiplier is exploited, which is an exact rearrangement.
struct KernelResult {
    LatticeFunction values;
    double sup = 0.0;
    double alias_estimate = 0.0;  // heuristic image tail with M = n + 1
    bool overlap_flag = false;
};
KernelResult main_kernel(const MultiplierModel& m, std::int64_t box_radius,
                         std::int64_t cell_budget = 8'000'000);

// (psi~_{N/Q,qvec} * dsigma_lambda)(x) by direct quadrature in the theta
// representation, with the one-dimensional smoothing profile etahat.
std::complex<double> kernel_term_convolution(const MultiplierModel& m,
                                             std::span<const std::int64_t> qvec,
                                             std::span<const double> x);

// K^{a,q}(x) = e(-lambda a / q) G_x(a, q, qvec) (psi~ * dsigma)(x)
std::complex<double> kernel_term(const MultiplierModel& m, std::int64_t a, std::int64_t q,
                                 std::span<const std::int64_t> qvec, std::span<const double> x);

// q * Q^{1+eps} * N^{-n}, the per-q bound from trivially summing over a in U_q.
double trivial_a_sum_bound(const MultiplierModel& m, std::int64_t q, double epsilon = 0.1);

}  // namespace psph
