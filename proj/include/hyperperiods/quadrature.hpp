#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hyperperiods/hypercurve.hpp"

namespace hyperperiods {

struct ContinuationOptions {
    // Largest accepted relative change |y_next - y_prev| / |y_prev| per step;
    // larger steps are bisected.
    double step_tolerance = 0.5;
    int max_bisections = 20;
};

struct QuadratureOptions {
    int order = 64;
    ContinuationOptions continuation;
};

struct SegmentIntegralResult {
    Complex value;
    int order = 0;
    // |value(order) - value(2 * order)|
    double error_estimate = 0.0;
    // Rounding error scale of the node sum; the estimate cannot resolve below it.
    double roundoff_floor = 0.0;
};

// One continuous branch of sqrt(f) sampled along a path.
struct SheetTrace {
    std::vector<Complex> path_nodes;
    std::vector<Complex> y_values;
    int start_sign = 1;
};

// Continues sqrt(g) along `path` from `start_value` at path[0], bisecting steps
// whose relative change exceeds the step tolerance.
std::vector<Complex> continue_sqrt(const std::function<Complex(Complex)>& g,
                                   std::span<const Complex> path, Complex start_value,
                                   const ContinuationOptions& options = {});

SheetTrace analytic_sqrt_continuation(const HyperellipticCurve& curve,
                                      std::span<const Complex> path, int start_sign,
                                      const ContinuationOptions& options = {});

// Integral of x^e dx / y along the chord from branch point `from` to branch
// point `to`. On the chord, y = i * rho * sqrt(1 - t^2) * sqrt(h(x)) where
// x = m + r t, h = f / ((x - b_from)(x - b_to)), sqrt(h) is continued from the
// principal root at the midpoint, and rho is the half-chord oriented from the
// lexicographically smaller endpoint. Reversing the chord negates the result.
SegmentIntegralResult segment_integral(const HyperellipticCurve& curve, std::size_t from,
                                       std::size_t to, Differential differential,
                                       const QuadratureOptions& options = {});

// Same integral for every differential of the basis, sharing one continuation.
std::vector<SegmentIntegralResult> segment_integrals(const HyperellipticCurve& curve,
                                                     std::size_t from, std::size_t to,
                                                     const QuadratureOptions& options = {});

// The chord branch y at the midpoint of the chord, as used by segment_integral.
Complex segment_reference_y(const HyperellipticCurve& curve, std::size_t from, std::size_t to);

// sqrt((x - a)(x - b)) with its cut exactly on the closed segment [a, b] and
// asymptotic to x at infinity. Symmetric in a and b.
Complex chord_factor(Complex a, Complex b, Complex x);

// Gauss-Chebyshev nodes cos((2k - 1) pi / (2n)), k = 1..n.
std::vector<double> chebyshev_nodes(int n);

}  // namespace hyperperiods
