#include "hyperperiods/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hyperperiods/error.hpp"

namespace hyperperiods {

namespace {

constexpr Complex kI(0.0, 1.0);

bool lexicographic_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

double distance_to_segment(Complex p, Complex a, Complex b) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    const double s = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + s * ab));
}

Complex continuation_step(const std::function<Complex(Complex)>& g, Complex z0, Complex y0,
                          Complex z1, int depth, const ContinuationOptions& options) {
    const Complex w = g(z1);
    if (w == Complex(0.0))
        throw Error("quadrature.PathThroughBranchPoint", "continuation path hits a zero of f");
    Complex candidate = std::sqrt(w);
    if (std::abs(candidate - y0) > std::abs(candidate + y0)) candidate = -candidate;
    if (std::abs(candidate - y0) <= options.step_tolerance * std::abs(y0)) return candidate;
    if (depth >= options.max_bisections)
        throw Error("quadrature.StepRefinementExceeded",
                    "continuation step could not be resolved after " +
                        std::to_string(options.max_bisections) + " bisections");
    const Complex mid = 0.5 * (z0 + z1);
    const Complex ymid = continuation_step(g, z0, y0, mid, depth + 1, options);
    return continuation_step(g, mid, ymid, z1, depth + 1, options);
}

struct ChordGeometry {
    Complex a, b, mid, half, rho;
};

ChordGeometry chord_geometry(const HyperellipticCurve& curve, std::size_t from, std::size_t to) {
    const auto& branch = curve.branch();
    if (from >= branch.size() || to >= branch.size() || from == to)
        throw Error("quadrature.NonAdjacentEndpoints",
                    "segment endpoints must be two distinct branch points of the curve");
    ChordGeometry c;
    c.a = branch[from];
    c.b = branch[to];
    c.mid = 0.5 * (c.a + c.b);
    c.half = 0.5 * (c.b - c.a);
    c.rho = lexicographic_less(c.a, c.b) ? c.half : -c.half;

    const double limit = branch.separation_tolerance() * branch.diameter();
    for (std::size_t i = 0; i < branch.size(); ++i) {
        if (i == from || i == to) continue;
        if (distance_to_segment(branch[i], c.a, c.b) <= limit)
            throw Error("quadrature.BranchPointOnSegment",
                        "branch point " + std::to_string(i) + " lies on the chord " +
                            std::to_string(from) + " -> " + std::to_string(to));
    }
    return c;
}

// sqrt(h) at each t in `ts`, continued from the principal root at t = 0.
std::vector<Complex> chord_sqrt_h(const HyperellipticCurve& curve, std::size_t from,
                                  std::size_t to, const ChordGeometry& c,
                                  const std::vector<double>& ts,
                                  const ContinuationOptions& options) {
    const auto h = [&](Complex x) { return curve.evaluate_without(x, from, to); };
    const Complex start = std::sqrt(h(c.mid));

    std::vector<std::size_t> positive, negative;
    std::vector<Complex> out(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (ts[k] > 0.0) positive.push_back(k);
        else if (ts[k] < 0.0) negative.push_back(k);
        else out[k] = start;
    }
    std::sort(positive.begin(), positive.end(), [&](auto i, auto j) { return ts[i] < ts[j]; });
    std::sort(negative.begin(), negative.end(), [&](auto i, auto j) { return ts[i] > ts[j]; });

    for (const auto* side : {&positive, &negative}) {
        if (side->empty()) continue;
        std::vector<Complex> path{c.mid};
        for (auto k : *side) path.push_back(c.mid + c.half * ts[k]);
        const auto ys = continue_sqrt(h, path, start, options);
        for (std::size_t n = 0; n < side->size(); ++n) out[(*side)[n]] = ys[n + 1];
    }
    return out;
}

struct RuleSums {
    std::vector<Complex> values;
    std::vector<double> magnitudes;
};

RuleSums chebyshev_rule(const HyperellipticCurve& curve, std::size_t from, std::size_t to,
                        const ChordGeometry& c, int order, const ContinuationOptions& options) {
    const int g = curve.genus();
    const auto ts = chebyshev_nodes(order);
    const auto roots = chord_sqrt_h(curve, from, to, c, ts, options);

    RuleSums sums{std::vector<Complex>(static_cast<std::size_t>(g), Complex(0.0)),
                  std::vector<double>(static_cast<std::size_t>(g), 0.0)};
    const double weight = std::numbers::pi / order;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const Complex x = c.mid + c.half * ts[k];
        // dx / y with the sqrt(1 - t^2) absorbed by the Chebyshev weight.
        Complex term = weight * c.half / (kI * c.rho * roots[k]);
        for (int e = 0; e < g; ++e) {
            sums.values[e] += term;
            sums.magnitudes[e] += std::abs(term);
            term *= x;
        }
    }
    return sums;
}

}  // namespace

std::vector<double> chebyshev_nodes(int n) {
    std::vector<double> nodes(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k)
        nodes[k - 1] = std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * n));
    return nodes;
}

std::vector<Complex> continue_sqrt(const std::function<Complex(Complex)>& g,
                                   std::span<const Complex> path, Complex start_value,
                                   const ContinuationOptions& options) {
    std::vector<Complex> ys;
    if (path.empty()) return ys;
    ys.reserve(path.size());
    ys.push_back(start_value);
    for (std::size_t k = 1; k < path.size(); ++k)
        ys.push_back(continuation_step(g, path[k - 1], ys.back(), path[k], 0, options));
    return ys;
}

SheetTrace analytic_sqrt_continuation(const HyperellipticCurve& curve,
                                      std::span<const Complex> path, int start_sign,
                                      const ContinuationOptions& options) {
    if (start_sign != 1 && start_sign != -1)
        throw Error("quadrature.InvalidSheet", "start_sign must be +1 or -1");
    const auto& branch = curve.branch();
    const double limit = branch.separation_tolerance() * branch.diameter();
    for (const auto& z : path) {
        for (std::size_t i = 0; i < branch.size(); ++i) {
            if (std::abs(z - branch[i]) <= limit)
                throw Error("quadrature.PathThroughBranchPoint",
                            "path node passes through branch point " + std::to_string(i));
        }
    }
    SheetTrace trace;
    trace.path_nodes.assign(path.begin(), path.end());
    trace.start_sign = start_sign;
    if (path.empty()) return trace;
    const auto f = [&](Complex x) { return curve.evaluate(x); };
    const Complex start = static_cast<double>(start_sign) * std::sqrt(f(path[0]));
    trace.y_values = continue_sqrt(f, path, start, options);
    return trace;
}

std::vector<SegmentIntegralResult> segment_integrals(const HyperellipticCurve& curve,
                                                     std::size_t from, std::size_t to,
                                                     const QuadratureOptions& options) {
    if (options.order < 1)
        throw Error("quadrature.InvalidOrder", "quadrature order must be positive");
    const ChordGeometry c = chord_geometry(curve, from, to);
    const auto coarse = chebyshev_rule(curve, from, to, c, options.order, options.continuation);
    const auto fine = chebyshev_rule(curve, from, to, c, 2 * options.order, options.continuation);

    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<SegmentIntegralResult> results;
    results.reserve(coarse.values.size());
    for (std::size_t e = 0; e < coarse.values.size(); ++e) {
        SegmentIntegralResult r;
        r.value = coarse.values[e];
        r.order = options.order;
        r.error_estimate = std::abs(coarse.values[e] - fine.values[e]);
        r.roundoff_floor = 16.0 * eps * std::max(coarse.magnitudes[e], fine.magnitudes[e]);
        results.push_back(r);
    }
    return results;
}

SegmentIntegralResult segment_integral(const HyperellipticCurve& curve, std::size_t from,
                                       std::size_t to, Differential differential,
                                       const QuadratureOptions& options) {
    if (differential.exponent < 0 || differential.exponent >= curve.genus())
        throw Error("quadrature.InvalidDifferential",
                    "differential exponent must lie in [0, g-1]");
    return segment_integrals(curve, from, to, options)[differential.exponent];
}

Complex segment_reference_y(const HyperellipticCurve& curve, std::size_t from, std::size_t to) {
    const ChordGeometry c = chord_geometry(curve, from, to);
    return kI * c.rho * std::sqrt(curve.evaluate_without(c.mid, from, to));
}

Complex chord_factor(Complex a, Complex b, Complex x) {
    const Complex d = x - 0.5 * (a + b);
    const Complex q = 0.5 * (b - a) / d;
    return d * std::sqrt(1.0 - q * q);
}

}  // namespace hyperperiods
