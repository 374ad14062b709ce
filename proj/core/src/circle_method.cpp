#include "primesphere/circle_method.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "primesphere/errors.hpp"

namespace psph {

// ---------------------------------------------------------------------------
// bump profile
// ---------------------------------------------------------------------------

namespace bump {

namespace {
double transition(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
}  // namespace

double eta(double t) {
    t = std::fabs(t);
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    const double a = transition(2.0 - t);
    const double b = transition(t - 1.0);
    return a / (a + b);
}

double eta_derivative_bound() {
    // finite-difference sup of |eta'|; the transition is symmetric so the
    // value is cached once
    static const double bound = [] {
        double m = 0.0;
        const int grid = 20000;
        for (int i = 0; i < grid; ++i) {
            const double t0 = 1.0 + i / double(grid);
            const double t1 = 1.0 + (i + 1) / double(grid);
            m = std::max(m, std::fabs(eta(t1) - eta(t0)) * grid);
        }
        return m;
    }();
    return bound;
}

namespace {
// etahat on [0, kEtaHatMax], uniform grid with linear interpolation. eta is
// C-infinity with compact support, so the transform decays faster than any
// power; beyond the table it is below 1e-12.
constexpr double kEtaHatMax = 24.0;
constexpr int kEtaHatPerUnit = 1024;

std::vector<double> build_eta_hat_table() {
    const int count = static_cast<int>(kEtaHatMax) * kEtaHatPerUnit + 1;
    std::vector<double> table(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double u = i / double(kEtaHatPerUnit);
        const int pts = std::max(512, static_cast<int>(64.0 * (u + 1.0)));
        const QuadratureRule rule = composite_gauss_legendre(0.0, 2.0, pts);
        double acc = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            acc += rule.weights[j] * eta(rule.nodes[j]) * std::cos(kTwoPi * u * rule.nodes[j]);
        table[static_cast<std::size_t>(i)] = 2.0 * acc;
    }
    return table;
}
}  // namespace

double eta_hat(double u) {
    static const std::vector<double> table = build_eta_hat_table();
    u = std::fabs(u);
    if (u >= kEtaHatMax) return 0.0;
    const double idx = u * kEtaHatPerUnit;
    const auto lo = static_cast<std::size_t>(idx);
    const double frac = idx - static_cast<double>(lo);
    return table[lo] * (1.0 - frac) + table[lo + 1] * frac;
}

double psi(std::span<const double> x) {
    double v = 1.0;
    for (double c : x) {
        v *= eta(c);
        if (v == 0.0) return 0.0;
    }
    return v;
}

double psi_scaled(double t, std::span<const double> x) {
    double v = 1.0;
    for (double c : x) {
        v *= eta(t * c);
        if (v == 0.0) return 0.0;
    }
    return v;
}

}  // namespace bump

// ---------------------------------------------------------------------------
// parameters
// ---------------------------------------------------------------------------

namespace {

double theta_radius(const SphereSpec& spec) {
    // tail of the theta integral, estimated by the 1/(|theta| N^k) decay of
    // v, kept below 1e-4: (Theta N^k)^{1-n} / (n-1) <= 1e-4
    const double t = (spec.n > 2)
                         ? std::pow((spec.n - 1) * 1e-4, -1.0 / (spec.n - 1))
                         : 1e4;
    const double factor = std::clamp(t, 4.0, 256.0);
    return factor / std::pow(static_cast<double>(spec.N), spec.k);
}

}  // namespace

MajorArcParams make_major_arc_params(const SphereSpec& spec, double B, double C, int q_cap) {
    if (B <= 0.0 || C <= 0.0) throw DomainError("major arc params: B, C must be positive");
    MajorArcParams p;
    p.B = B;
    p.C = C;
    const double q_formula = std::floor(std::pow(std::log(static_cast<double>(spec.N)), C));
    std::int64_t q = std::max<std::int64_t>(1, static_cast<std::int64_t>(q_formula));
    if (q > q_cap) {
        q = q_cap;
        p.q_capped = true;
    }
    p.Q = static_cast<int>(q);
    p.q_max = std::max<std::int64_t>(spec.N, p.Q);
    p.theta = theta_radius(spec);
    p.quad_points = 512;
    p.arcs_disjoint = spec.N >= 5 * q * q * q;
    return p;
}

void validate_major_arc_params(const SphereSpec& spec, MajorArcParams& params) {
    if (params.Q < 1) throw DomainError("major arc params: Q must be >= 1");
    if (params.quad_points < 64) throw DomainError("major arc params: quad_points must be >= 64");
    if (params.q_max < params.Q) params.q_max = params.Q;
    if (params.theta <= 0.0) params.theta = theta_radius(spec);
    const std::int64_t q = params.Q;
    params.arcs_disjoint = spec.N >= 5 * q * q * q;
}

double surface_mass(int n, int k) {
    return std::exp(n * std::lgamma(1.0 + 1.0 / k) - std::lgamma(static_cast<double>(n) / k));
}

// ---------------------------------------------------------------------------
// oscillatory integrals
// ---------------------------------------------------------------------------

namespace {

// v(theta, zeta) = int_0^N e(theta x^k + zeta x) dx, resolution scaled with
// the total phase variation.
std::complex<double> v_integral(const SphereSpec& spec, double theta, double zeta,
                                int quad_points) {
    const double nd = static_cast<double>(spec.N);
    const double cycles = std::fabs(theta) * std::pow(nd, spec.k) + std::fabs(zeta) * nd;
    const int pts = std::max(quad_points, static_cast<int>(10.0 * (cycles + 1.0)));
    const QuadratureRule rule = composite_gauss_legendre(0.0, nd, pts);
    std::vector<std::complex<double>> terms(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i];
        terms[i] = rule.weights[i] * unit_phase(theta * std::pow(x, spec.k) + zeta * x);
    }
    return pairwise_sum(std::span<const std::complex<double>>(terms));
}

QuadratureRule make_theta_rule(const SphereSpec& spec, double theta, int quad_points) {
    const double cycles = 2.0 * theta * static_cast<double>(spec.lambda);
    const int pts = std::max(quad_points, static_cast<int>(10.0 * (cycles + 1.0)));
    return composite_gauss_legendre(-theta, theta, pts);
}

std::complex<double> oscillatory_i(const SphereSpec& spec, const MajorArcParams& params,
                                   std::span<const double> zeta, int quad_points) {
    const QuadratureRule rule = make_theta_rule(spec, params.theta, quad_points);
    // v rows per distinct zeta coordinate
    std::vector<double> distinct;
    for (double z : zeta)
        if (std::find(distinct.begin(), distinct.end(), z) == distinct.end()) distinct.push_back(z);
    std::vector<std::vector<std::complex<double>>> rows(distinct.size());
    for (std::size_t d = 0; d < distinct.size(); ++d) {
        rows[d].resize(rule.nodes.size());
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            rows[d][j] = v_integral(spec, rule.nodes[j], distinct[d], quad_points);
    }
    std::vector<std::complex<double>> terms(rule.nodes.size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        std::complex<double> prod = unit_phase(-rule.nodes[j] * static_cast<double>(spec.lambda)) *
                                    rule.weights[j];
        for (double z : zeta) {
            const std::size_t d = static_cast<std::size_t>(
                std::find(distinct.begin(), distinct.end(), z) - distinct.begin());
            prod *= rows[d][j];
        }
        terms[j] = prod;
    }
    return pairwise_sum(std::span<const std::complex<double>>(terms));
}

}  // namespace

std::complex<double> surface_ft(const SphereSpec& spec, const MajorArcParams& params,
                                std::span<const double> zeta) {
    if (static_cast<int>(zeta.size()) != spec.n) throw DomainError("surface_ft: dimension mismatch");
    const std::vector<double> zero(static_cast<std::size_t>(spec.n), 0.0);
    const std::complex<double> coarse =
        oscillatory_i(spec, params, zeta, params.quad_points) /
        oscillatory_i(spec, params, zero, params.quad_points);
    const std::complex<double> fine =
        oscillatory_i(spec, params, zeta, 2 * params.quad_points) /
        oscillatory_i(spec, params, zero, 2 * params.quad_points);
    if (std::abs(fine - coarse) > 1e-3)
        throw ConvergenceError("surface_ft: quadrature did not stabilize under doubling", coarse,
                               fine);
    return fine;
}

// ---------------------------------------------------------------------------
// singular series
// ---------------------------------------------------------------------------

SingularSeriesResult singular_series(const SphereSpec& spec, std::span<const std::int64_t> avec,
                                     std::span<const std::int64_t> qvec, std::int64_t q_max,
                                     GaussCache* cache) {
    if (static_cast<int>(avec.size()) != spec.n || static_cast<int>(qvec.size()) != spec.n)
        throw DomainError("singular_series: dimension mismatch");
    if (q_max < 1) throw DomainError("singular_series: q_max must be >= 1");
    for (int i = 0; i < spec.n; ++i) {
        if (qvec[i] < 1) throw DomainError("singular_series: moduli must be >= 1");
        const std::int64_t a = ((avec[i] % qvec[i]) + qvec[i]) % qvec[i];
        if (qvec[i] == 1 ? a != 0 : std::gcd(a, qvec[i]) != 1)
            throw DomainError("singular_series: a_i not a unit mod q_i");
    }
    GaussCache local;
    GaussCache& gc = cache ? *cache : local;

    std::vector<std::complex<double>> per_q(static_cast<std::size_t>(q_max));
    for (std::int64_t q = 1; q <= q_max; ++q) {
        const UnitGroup u = unit_group(q);
        std::vector<std::complex<double>> terms;
        terms.reserve(u.elements.size());
        for (std::int64_t a : u.elements) {
            std::complex<double> prod =
                unit_phase_rational(-(spec.lambda % q) * a, q);
            for (int i = 0; i < spec.n; ++i) prod *= gc.g(spec.k, a, q, avec[i], qvec[i]);
            terms.push_back(prod);
        }
        per_q[static_cast<std::size_t>(q - 1)] =
            pairwise_sum(std::span<const std::complex<double>>(terms));
    }
    SingularSeriesResult out;
    out.value = pairwise_sum(std::span<const std::complex<double>>(per_q));
    std::complex<double> tail{};
    for (std::int64_t q = q_max / 2 + 1; q <= q_max; ++q)
        tail += per_q[static_cast<std::size_t>(q - 1)];
    out.tail = std::abs(tail);
    return out;
}

SingularSeriesTable::SingularSeriesTable(int n, int k, std::int64_t q_limit)
    : n_(n), k_(k), q_limit_(q_limit) {
    if (n < 1 || k < 2 || q_limit < 1) throw DomainError("SingularSeriesTable: bad arguments");
    terms_.resize(static_cast<std::size_t>(q_limit) + 1);
    for (std::int64_t q = 2; q <= q_limit; ++q) {
        const UnitGroup u = unit_group(q);
        // root-of-unity table e(m/q)
        std::vector<std::complex<double>> roots(static_cast<std::size_t>(q));
        for (std::int64_t m = 0; m < q; ++m)
            roots[static_cast<std::size_t>(m)] = unit_phase_rational(m, q);
        // g(a, q; 0, 1)^n for each unit a
        std::vector<std::complex<double>> gn(u.elements.size());
        for (std::size_t ai = 0; ai < u.elements.size(); ++ai) {
            const std::int64_t a = u.elements[ai];
            std::complex<double> acc{};
            for (std::int64_t x : u.elements) acc += roots[static_cast<std::size_t>(
                a * mod_pow(x, k, q) % q)];
            acc /= static_cast<double>(u.elements.size());
            gn[ai] = std::pow(acc, n);
        }
        auto& row = terms_[static_cast<std::size_t>(q)];
        row.resize(static_cast<std::size_t>(q));
        for (std::int64_t r = 0; r < q; ++r) {
            std::complex<double> acc{};
            for (std::size_t ai = 0; ai < u.elements.size(); ++ai) {
                const std::int64_t m = (q - r * u.elements[ai] % q) % q;  // e(-r a / q)
                acc += roots[static_cast<std::size_t>(m)] * gn[ai];
            }
            row[static_cast<std::size_t>(r)] = acc;
        }
    }
}

SingularSeriesResult SingularSeriesTable::eval(std::int64_t lambda, std::int64_t q_max) const {
    if (q_max > q_limit_) throw DomainError("SingularSeriesTable: q_max beyond the prepared limit");
    if (q_max < 1) throw DomainError("SingularSeriesTable: q_max must be >= 1");
    std::vector<std::complex<double>> per_q(static_cast<std::size_t>(q_max), 0.0);
    per_q[0] = 1.0;  // q = 1 contributes e(0)
    for (std::int64_t q = 2; q <= q_max; ++q)
        per_q[static_cast<std::size_t>(q - 1)] =
            terms_[static_cast<std::size_t>(q)][static_cast<std::size_t>(lambda % q)];
    SingularSeriesResult out;
    out.value = pairwise_sum(std::span<const std::complex<double>>(per_q));
    std::complex<double> tail{};
    for (std::int64_t q = q_max / 2 + 1; q <= q_max; ++q)
        tail += per_q[static_cast<std::size_t>(q - 1)];
    out.tail = std::abs(tail);
    return out;
}

// ---------------------------------------------------------------------------
// Gauss component
// ---------------------------------------------------------------------------

std::complex<double> gauss_component(int k, std::int64_t a, std::int64_t q,
                                     std::span<const std::int64_t> qvec,
                                     std::span<const std::int64_t> x, GaussPhase phase,
                                     GaussCache* cache) {
    if (qvec.size() != x.size()) throw DomainError("gauss_component: dimension mismatch");
    GaussCache local;
    GaussCache& gc = cache ? *cache : local;

    if (phase == GaussPhase::summation_index) {
        std::complex<double> prod = 1.0;
        for (std::size_t i = 0; i < qvec.size(); ++i)
            prod *= gauss_row_sum(k, a, q, qvec[i], x[i], &gc);
        return prod;
    }

    // literal variant: full sum over U_qvec with the first coordinate's unit
    // in every phase
    std::vector<UnitGroup> groups;
    groups.reserve(qvec.size());
    for (std::int64_t qi : qvec) groups.push_back(unit_group(qi));
    std::vector<std::size_t> idx(qvec.size(), 0);
    std::complex<double> total{};
    for (;;) {
        const std::int64_t a1 = groups[0].elements[idx[0]];
        std::complex<double> prod = 1.0;
        for (std::size_t i = 0; i < qvec.size(); ++i) {
            const std::int64_t ai = groups[i].elements[idx[i]];
            prod *= gc.g(k, a, q, ai, qvec[i]);
            prod *= unit_phase_rational(-a1 * (((x[i] % qvec[i]) + qvec[i]) % qvec[i]), qvec[i]);
        }
        total += prod;
        std::size_t j = qvec.size();
        while (j > 0 && ++idx[j - 1] == groups[j - 1].elements.size()) idx[--j] = 0;
        if (j == 0) break;
    }
    return total;
}

// ---------------------------------------------------------------------------
// multiplier model
// ---------------------------------------------------------------------------

MultiplierModel::MultiplierModel(std::shared_ptr<const PrimeSphere> sphere, MajorArcParams params)
    : sphere_(std::move(sphere)), params_(params) {
    if (!sphere_) throw DomainError("MultiplierModel: null sphere");
    validate_major_arc_params(sphere_->spec, params_);
    measure_ = sigma_measure(sphere_);
    theta_rule_ = make_theta_rule(sphere_->spec, params_.theta, params_.quad_points);
    mass_scale_ = surface_mass(sphere_->spec.n, sphere_->spec.k);

    std::vector<std::complex<double>> terms(theta_rule_.nodes.size());
    const auto& zero_row = v_row(0.0);
    for (std::size_t j = 0; j < theta_rule_.nodes.size(); ++j) {
        std::complex<double> p = zero_row[j];
        std::complex<double> prod = 1.0;
        for (int i = 0; i < sphere_->spec.n; ++i) prod *= p;
        terms[j] = theta_rule_.weights[j] *
                   unit_phase(-theta_rule_.nodes[j] * static_cast<double>(sphere_->spec.lambda)) *
                   prod;
    }
    i_zero_ = pairwise_sum(std::span<const std::complex<double>>(terms));
}

std::vector<std::complex<double>> MultiplierModel::v_row(double zeta) const {
    const std::int64_t key = std::bit_cast<std::int64_t>(zeta);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = v_cache_.find(key);
        if (it != v_cache_.end()) return it->second;
    }
    std::vector<std::complex<double>> row(theta_rule_.nodes.size());
    for (std::size_t j = 0; j < theta_rule_.nodes.size(); ++j)
        row[j] = v_integral(sphere_->spec, theta_rule_.nodes[j], zeta, params_.quad_points);
    std::lock_guard<std::mutex> lock(mu_);
    return v_cache_.emplace(key, std::move(row)).first->second;
}

std::complex<double> MultiplierModel::surface(std::span<const double> zeta) const {
    const SphereSpec& spec = sphere_->spec;
    if (static_cast<int>(zeta.size()) != spec.n)
        throw DomainError("MultiplierModel::surface: dimension mismatch");
    std::vector<std::vector<std::complex<double>>> rows;
    rows.reserve(zeta.size());
    for (double z : zeta) rows.push_back(v_row(z));
    std::vector<std::complex<double>> terms(theta_rule_.nodes.size());
    for (std::size_t j = 0; j < theta_rule_.nodes.size(); ++j) {
        std::complex<double> prod =
            theta_rule_.weights[j] *
            unit_phase(-theta_rule_.nodes[j] * static_cast<double>(spec.lambda));
        for (const auto& row : rows) prod *= row[j];
        terms[j] = prod;
    }
    return mass_scale_ * pairwise_sum(std::span<const std::complex<double>>(terms)) / i_zero_;
}

std::complex<double> MultiplierModel::raw(std::span<const double> xi) const {
    const SphereSpec& spec = sphere_->spec;
    if (static_cast<int>(xi.size()) != spec.n) throw DomainError("raw multiplier: dimension mismatch");
    std::vector<double> wrapped(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j) wrapped[j] = wrap_unit(xi[j]);
    static thread_local std::vector<std::complex<double>> terms;
    terms.resize(sphere_->size());
    for (std::size_t i = 0; i < sphere_->size(); ++i) {
        const auto pt = sphere_->point(i);
        double phase = 0.0;
        for (int j = 0; j < spec.n; ++j)
            phase += wrap_unit(static_cast<double>(pt[j]) * wrapped[static_cast<std::size_t>(j)]);
        terms[i] = measure_.mass[i] * unit_phase(phase);
    }
    return pairwise_sum(std::span<const std::complex<double>>(terms));
}

std::vector<MultiplierModel::ActiveArc> MultiplierModel::active_arcs(double xi_coord) const {
    const SphereSpec& spec = sphere_->spec;
    std::vector<ActiveArc> out;
    const double scale = static_cast<double>(spec.N) / params_.Q;
    for (std::int64_t q = 1; q <= params_.Q; ++q) {
        const UnitGroup u = unit_group(q);
        for (std::int64_t a : u.elements) {
            // offset of xi from the reduced fraction a/q, taken mod 1
            const double zeta = wrap_half(xi_coord - static_cast<double>(a) / q);
            const double t = static_cast<double>(q) * zeta;
            const double b = bump::eta(scale * t);
            if (b > 0.0) out.push_back({q, a, b, zeta});
        }
    }
    return out;
}

std::complex<double> MultiplierModel::series_for(
    std::span<const MultiplierModel::ActiveArc* const> combo) const {
    std::vector<std::pair<std::int64_t, std::int64_t>> key;
    key.reserve(combo.size());
    for (const ActiveArc* arc : combo) key.emplace_back(arc->q, arc->a);
    std::sort(key.begin(), key.end());
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = series_cache_.find(key);
        if (it != series_cache_.end()) return it->second;
    }
    std::vector<std::int64_t> avec(combo.size()), qvec(combo.size());
    for (std::size_t i = 0; i < combo.size(); ++i) {
        qvec[i] = key[i].first;
        avec[i] = key[i].second;
    }
    const std::complex<double> val =
        singular_series(sphere_->spec, avec, qvec, params_.q_max, &gauss_).value;
    std::lock_guard<std::mutex> lock(mu_);
    return series_cache_.emplace(std::move(key), val).first->second;
}

MainTermValue MultiplierModel::main(std::span<const double> xi) const {
    const SphereSpec& spec = sphere_->spec;
    if (static_cast<int>(xi.size()) != spec.n)
        throw DomainError("main multiplier: dimension mismatch");
    MainTermValue out;
    out.overlap_flag = !params_.arcs_disjoint;

    std::vector<std::vector<ActiveArc>> arcs(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
        arcs[i] = active_arcs(wrap_unit(xi[i]));
        if (arcs[i].empty()) {
            out.value = 0.0;
            return out;  // some coordinate is on no major arc
        }
    }

    const double scale = std::pow(static_cast<double>(spec.lambda),
                                  static_cast<double>(spec.n) / spec.k - 1.0) /
                         sphere_->total;

    std::vector<std::size_t> idx(xi.size(), 0);
    std::vector<const ActiveArc*> combo(xi.size());
    std::vector<double> zeta(xi.size());
    std::complex<double> total{};
    for (;;) {
        double bump_product = 1.0;
        for (std::size_t i = 0; i < xi.size(); ++i) {
            combo[i] = &arcs[i][idx[i]];
            bump_product *= combo[i]->bump;
            zeta[i] = combo[i]->zeta;
        }
        const std::complex<double> series =
            series_for(std::span<const ActiveArc* const>(combo));
        total += series * bump_product * surface(zeta);

        std::size_t j = xi.size();
        while (j > 0 && ++idx[j - 1] == arcs[j - 1].size()) idx[--j] = 0;
        if (j == 0) break;
    }
    out.value = scale * total;
    return out;
}

MainTermValue MultiplierModel::error(std::span<const double> xi) const {
    MainTermValue m = main(xi);
    m.value = raw(xi) - m.value;
    return m;
}

std::complex<double> raw_multiplier(const MultiplierModel& m, std::span<const double> xi) {
    return m.raw(xi);
}
MainTermValue main_multiplier(const MultiplierModel& m, std::span<const double> xi) {
    return m.main(xi);
}
MainTermValue error_multiplier(const MultiplierModel& m, std::span<const double> xi) {
    return m.error(xi);
}

double main_term_at_zero(const SphereSpec& spec, const MajorArcParams& params, double total_mass,
                         const SingularSeriesTable* table, GaussCache* cache) {
    if (total_mass <= 0.0) throw DomainError("main_term_at_zero: P(lambda) = 0");
    std::complex<double> series;
    if (table && params.q_max <= table->q_limit()) {
        series = table->eval(spec.lambda, params.q_max).value;
    } else {
        const std::vector<std::int64_t> ones(static_cast<std::size_t>(spec.n), 1);
        const std::vector<std::int64_t> zeros(static_cast<std::size_t>(spec.n), 0);
        series = singular_series(spec, zeros, ones, params.q_max, cache).value;
    }
    const double scale =
        std::pow(static_cast<double>(spec.lambda), static_cast<double>(spec.n) / spec.k - 1.0) /
        total_mass;
    return scale * series.real() * surface_mass(spec.n, spec.k);
}

// ---------------------------------------------------------------------------
// main-term kernel on a grid
// ---------------------------------------------------------------------------

KernelResult main_kernel(const MultiplierModel& m, std::int64_t box_radius,
                         std::int64_t cell_budget) {
    const SphereSpec& spec = m.spec();
    const MajorArcParams& params = m.params();
    if (box_radius < spec.N) throw DomainError("main_kernel: box_radius must be >= N");
    const std::int64_t L = 2 * box_radius + 1;

    double cells_d = 1.0;
    for (int i = 0; i < spec.n; ++i) cells_d *= static_cast<double>(L);
    if (cells_d > static_cast<double>(cell_budget))
        throw ResourceError("main_kernel: grid exceeds the cell budget");
    const auto cells = static_cast<std::size_t>(cells_d);

    // Per-axis arc structure of the frequency grid m/L (identical for every
    // axis). Pair types index the distinct (q, a) arcs that appear.
    struct PairType {
        std::int64_t q, a;
        std::vector<std::pair<std::size_t, MultiplierModel::ActiveArc>> support;  // (m, arc)
    };
    std::vector<PairType> types;
    for (std::size_t g = 0; g < static_cast<std::size_t>(L); ++g) {
        const double xi = static_cast<double>(g) / static_cast<double>(L);
        for (const auto& arc : m.active_arcs(xi)) {
            auto it = std::find_if(types.begin(), types.end(), [&](const PairType& t) {
                return t.q == arc.q && t.a == arc.a;
            });
            if (it == types.end()) {
                types.push_back({arc.q, arc.a, {}});
                it = std::prev(types.end());
            }
            it->support.emplace_back(g, arc);
        }
    }
    if (types.empty()) throw DomainError("main_kernel: no arc meets the frequency grid");

    const QuadratureRule& rule = m.theta_rule();
    const std::size_t nj = rule.nodes.size();

    // W[t][j][x + R] = (1/L) sum_{m in supp t} bump * v_j(zeta) e(-x m / L)
    std::vector<std::vector<std::vector<std::complex<double>>>> W(types.size());
    for (std::size_t t = 0; t < types.size(); ++t) {
        W[t].assign(nj, std::vector<std::complex<double>>(static_cast<std::size_t>(L)));
        for (const auto& [g, arc] : types[t].support) {
            const auto& row = m.v_row(arc.zeta);
            for (std::int64_t x = -box_radius; x <= box_radius; ++x) {
                const std::complex<double> phase =
                    unit_phase(-static_cast<double>(x) * static_cast<double>(g) /
                               static_cast<double>(L));
                const std::size_t xi = static_cast<std::size_t>(x + box_radius);
                for (std::size_t j = 0; j < nj; ++j)
                    W[t][j][xi] += arc.bump * row[j] * phase / static_cast<double>(L);
            }
        }
    }

    const double scale = std::pow(static_cast<double>(spec.lambda),
                                  static_cast<double>(spec.n) / spec.k - 1.0) /
                         m.sphere().total;
    const double mass = surface_mass(spec.n, spec.k);

    std::vector<std::complex<double>> kernel(cells, 0.0);
    std::vector<std::complex<double>> partial;

    // every assignment of one pair type per coordinate
    std::vector<std::size_t> assign(static_cast<std::size_t>(spec.n), 0);
    std::vector<const MultiplierModel::ActiveArc*> combo(static_cast<std::size_t>(spec.n));
    for (;;) {
        // singular series for this assignment
        std::vector<MultiplierModel::ActiveArc> reps(static_cast<std::size_t>(spec.n));
        for (int i = 0; i < spec.n; ++i) {
            reps[static_cast<std::size_t>(i)].q = types[assign[static_cast<std::size_t>(i)]].q;
            reps[static_cast<std::size_t>(i)].a = types[assign[static_cast<std::size_t>(i)]].a;
            combo[static_cast<std::size_t>(i)] = &reps[static_cast<std::size_t>(i)];
        }
        const std::complex<double> series =
            m.series_for(std::span<const MultiplierModel::ActiveArc* const>(combo));

        for (std::size_t j = 0; j < nj; ++j) {
            const std::complex<double> coef =
                series * scale * mass / m.i_zero() * rule.weights[j] *
                unit_phase(-rule.nodes[j] * static_cast<double>(spec.lambda));
            // accumulate coef * outer product of the per-axis vectors
            partial.assign(1, coef);
            for (int i = 0; i < spec.n; ++i) {
                const auto& axis = W[assign[static_cast<std::size_t>(i)]][j];
                std::vector<std::complex<double>> next(partial.size() * axis.size());
                std::size_t w = 0;
                for (const std::complex<double>& p : partial)
                    for (const std::complex<double>& ax : axis) next[w++] = p * ax;
                partial = std::move(next);
            }
            for (std::size_t c = 0; c < cells; ++c) kernel[c] += partial[c];
        }

        std::size_t d = assign.size();
        while (d > 0 && ++assign[d - 1] == types.size()) assign[--d] = 0;
        if (d == 0) break;
    }

    KernelResult result{LatticeFunction(spec.n)};
    result.overlap_flag = !params.arcs_disjoint;
    Point p(static_cast<std::size_t>(spec.n), -box_radius);
    for (std::size_t c = 0; c < cells; ++c) {
        result.sup = std::max(result.sup, std::abs(kernel[c]));
        result.values.set(p, kernel[c]);
        int j = spec.n - 1;
        while (j >= 0 && p[static_cast<std::size_t>(j)] == box_radius) {
            p[static_cast<std::size_t>(j)] = -box_radius;
            --j;
        }
        if (j >= 0) ++p[static_cast<std::size_t>(j)];
    }

    std::int64_t q_tilde = 1;
    for (const PairType& t : types) q_tilde = std::max(q_tilde, t.q);
    result.alias_estimate =
        result.sup * 2.0 * spec.n /
        std::pow(1.0 + static_cast<double>(L) / (static_cast<double>(spec.N) * q_tilde),
                 spec.n + 1);
    return result;
}

// ---------------------------------------------------------------------------
// kernel term verification ops
// ---------------------------------------------------------------------------

std::complex<double> kernel_term_convolution(const MultiplierModel& m,
                                             std::span<const std::int64_t> qvec,
                                             std::span<const double> x) {
    const SphereSpec& spec = m.spec();
    const MajorArcParams& params = m.params();
    if (static_cast<int>(qvec.size()) != spec.n || static_cast<int>(x.size()) != spec.n)
        throw DomainError("kernel_term_convolution: dimension mismatch");

    const double nd = static_cast<double>(spec.N);
    const QuadratureRule& rule = m.theta_rule();

    // w_i(theta, u) = (Q/(N q_i)) int_0^N etahat((u - y) Q / (N q_i)) e(theta y^k) dy
    std::vector<std::vector<std::complex<double>>> rows(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double width = nd * static_cast<double>(qvec[i]) / params.Q;
        rows[i].resize(rule.nodes.size());
        const double cycles_space = std::pow(nd, spec.k) * params.theta;
        const int pts = std::max(params.quad_points, static_cast<int>(10.0 * (cycles_space + 1.0)));
        const QuadratureRule yrule = composite_gauss_legendre(0.0, nd, pts);
        std::vector<double> profile(yrule.nodes.size());
        for (std::size_t y = 0; y < yrule.nodes.size(); ++y)
            profile[y] = bump::eta_hat((x[i] - yrule.nodes[y]) / width) / width;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            std::vector<std::complex<double>> terms(yrule.nodes.size());
            for (std::size_t y = 0; y < yrule.nodes.size(); ++y)
                terms[y] = yrule.weights[y] * profile[y] *
                           unit_phase(rule.nodes[j] * std::pow(yrule.nodes[y], spec.k));
            rows[i][j] = pairwise_sum(std::span<const std::complex<double>>(terms));
        }
    }

    std::vector<std::complex<double>> terms(rule.nodes.size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        std::complex<double> prod =
            rule.weights[j] * unit_phase(-rule.nodes[j] * static_cast<double>(spec.lambda));
        for (const auto& row : rows) prod *= row[j];
        terms[j] = prod;
    }
    return surface_mass(spec.n, spec.k) *
           pairwise_sum(std::span<const std::complex<double>>(terms)) / m.i_zero();
}

std::complex<double> kernel_term(const MultiplierModel& m, std::int64_t a, std::int64_t q,
                                 std::span<const std::int64_t> qvec, std::span<const double> x) {
    const SphereSpec& spec = m.spec();
    std::vector<std::int64_t> xi(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xi[i] = static_cast<std::int64_t>(std::llround(x[i]));
    const std::complex<double> g =
        gauss_component(spec.k, a, q, qvec, xi, m.params().phase, &m.gauss_cache());
    const std::complex<double> phase = unit_phase_rational(-(spec.lambda % q) * a, q);
    return phase * g * kernel_term_convolution(m, qvec, x);
}

double trivial_a_sum_bound(const MultiplierModel& m, std::int64_t q, double epsilon) {
    if (q < 1) throw DomainError("trivial_a_sum_bound: q must be >= 1");
    const SphereSpec& spec = m.spec();
    return static_cast<double>(q) * std::pow(static_cast<double>(m.params().Q), 1.0 + epsilon) *
           std::pow(static_cast<double>(spec.N), -spec.n);
}

}  // namespace psph
