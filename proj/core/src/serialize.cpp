#include "primesphere/serialize.hpp"

#include <cstdio>

#include "json.hpp"

namespace psph {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_csv(const PrimeSphere& sphere) {
    std::string out;
    const int n = sphere.spec.n;
    for (int i = 0; i < n; ++i) {
        out += 'x';
        out += std::to_string(i + 1);
        out += ',';
    }
    out += "weight\n";
    for (std::size_t i = 0; i < sphere.size(); ++i) {
        for (std::int64_t c : sphere.point(i)) {
            out += std::to_string(c);
            out += ',';
        }
        out += format_double(sphere.weights[i]);
        out += '\n';
    }
    return out;
}

std::string to_json(const PrimeSphere& sphere) {
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < sphere.size(); ++i) {
        nlohmann::json pt;
        pt["x"] = std::vector<std::int64_t>(sphere.point(i).begin(), sphere.point(i).end());
        pt["weight"] = sphere.weights[i];
        points.push_back(std::move(pt));
    }
    nlohmann::json j;
    j["n"] = sphere.spec.n;
    j["k"] = sphere.spec.k;
    j["lambda"] = sphere.spec.lambda;
    j["N"] = sphere.spec.N;
    j["count"] = sphere.size();
    j["P"] = sphere.total;
    j["points"] = std::move(points);
    return j.dump(2);
}

std::string to_csv(const LatticeFunction& f) {
    std::string out;
    for (int i = 0; i < f.dim(); ++i) {
        out += 'x';
        out += std::to_string(i + 1);
        out += ',';
    }
    out += "re,im\n";
    for (const auto& [p, v] : f.values()) {
        for (std::int64_t c : p) {
            out += std::to_string(c);
            out += ',';
        }
        out += format_double(v.real());
        out += ',';
        out += format_double(v.imag());
        out += '\n';
    }
    return out;
}

std::string to_json(const LatticeFunction& f) {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& [p, v] : f.values()) {
        nlohmann::json item;
        item["x"] = p;
        item["re"] = v.real();
        item["im"] = v.imag();
        values.push_back(std::move(item));
    }
    nlohmann::json j;
    j["dim"] = f.dim();
    j["values"] = std::move(values);
    return j.dump(2);
}

std::string to_json(const RateFit& fit) {
    nlohmann::json j;
    j["alpha"] = fit.alpha;
    j["beta"] = fit.beta;
    j["rms"] = fit.rms;
    j["n_samples"] = fit.n_samples;
    j["with_log"] = fit.with_log;
    return j.dump(2);
}

}  // namespace psph
