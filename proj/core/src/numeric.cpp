#include "primesphere/numeric.hpp"

namespace psph {

namespace {
// 16-point Gauss-Legendre on [-1, 1], positive half.
constexpr double kGlNodes[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499,
};
constexpr double kGlWeights[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541,
};
}  // namespace

QuadratureRule composite_gauss_legendre(double a, double b, int min_points) {
    int panels = (min_points + 15) / 16;
    if (panels < 1) panels = 1;
    QuadratureRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * 16);
    rule.weights.reserve(static_cast<std::size_t>(panels) * 16);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double scale = 0.5 * h;
        for (int i = 7; i >= 0; --i) {
            rule.nodes.push_back(mid - scale * kGlNodes[i]);
            rule.weights.push_back(scale * kGlWeights[i]);
        }
        for (int i = 0; i < 8; ++i) {
            rule.nodes.push_back(mid + scale * kGlNodes[i]);
            rule.weights.push_back(scale * kGlWeights[i]);
        }
    }
    return rule;
}

}  // namespace psph
