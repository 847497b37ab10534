#include "vche/quadrature.hpp"

#include <stdexcept>

namespace vche {

namespace {

// Abscissae/weights for the positive half of the symmetric rules; the full
// rule is { (-x, w), (+x, w) } over these entries.
struct HalfRule {
    const Real* nodes;
    const Real* weights;
    int count;
};

constexpr Real kNodes8[] = {
    0.1834346424956498, 0.5255324099163290,
    0.7966664774136267, 0.9602898564975363,
};
constexpr Real kWeights8[] = {
    0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763,
};

constexpr Real kNodes16[] = {
    0.0950125098376374, 0.2816035507792589,
    0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499,
};
constexpr Real kWeights16[] = {
    0.1894506104550685, 0.1826034150449236,
    0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541,
};

HalfRule half_rule(int points) {
    if (points == 8) return {kNodes8, kWeights8, 4};
    if (points == 16) return {kNodes16, kWeights16, 8};
    throw std::invalid_argument("gauss_legendre: only 8- and 16-point rules are tabulated");
}

} // namespace

std::vector<std::pair<Real, Real>> gauss_legendre(int points) {
    const HalfRule half = half_rule(points);
    std::vector<std::pair<Real, Real>> rule;
    rule.reserve(static_cast<std::size_t>(points));
    // Ascending node order keeps downstream reductions deterministic.
    for (int i = half.count - 1; i >= 0; --i)
        rule.emplace_back(-half.nodes[i], half.weights[i]);
    for (int i = 0; i < half.count; ++i)
        rule.emplace_back(half.nodes[i], half.weights[i]);
    return rule;
}

std::vector<std::pair<Real, Real>> gauss_legendre(int points, Real a, Real b) {
    auto rule = gauss_legendre(points);
    const Real mid = 0.5 * (a + b);
    const Real scale = 0.5 * (b - a);
    for (auto& [node, weight] : rule) {
        node = mid + scale * node;
        weight *= scale;
    }
    return rule;
}

} // namespace vche
