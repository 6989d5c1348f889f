#include "hyperperiods/hypercurve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hyperperiods/error.hpp"

namespace hyperperiods {

namespace {

std::string describe(Complex z) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << z.real() << ", " << z.imag() << ")";
    return os.str();
}

bool lexicographic_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

}  // namespace

BranchPointSet::BranchPointSet(std::vector<Complex> points, double separation_tolerance)
    : points_(std::move(points)), separation_tolerance_(separation_tolerance) {
    if (!(separation_tolerance_ >= 0.0))
        throw Error("hypercurve.InvalidTolerance", "separation tolerance must be nonnegative");
    for (const auto& p : points_) {
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
            throw Error("hypercurve.InvalidPoint", "branch point " + describe(p) + " is not finite");
    }
    if (points_.size() < 2) return;

    double diam = 0.0;
    double closest = std::numeric_limits<double>::infinity();
    std::size_t ci = 0, cj = 1;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        for (std::size_t j = i + 1; j < points_.size(); ++j) {
            const double d = std::abs(points_[i] - points_[j]);
            diam = std::max(diam, d);
            if (d < closest) {
                closest = d;
                ci = i;
                cj = j;
            }
        }
    }
    diameter_ = diam;
    min_separation_ = closest;
    if (!(closest > separation_tolerance_ * diam)) {
        throw Error("hypercurve.DuplicatePoint",
                    "branch points " + std::to_string(ci) + " " + describe(points_[ci]) + " and " +
                        std::to_string(cj) + " " + describe(points_[cj]) +
                        " are closer than the separation tolerance");
    }
}

HyperellipticCurve::HyperellipticCurve(BranchPointSet branch) : branch_(std::move(branch)) {
    const std::size_t n = branch_.size();
    if (n < 4)
        throw Error("hypercurve.TooFewPoints",
                    "need at least 4 branch points, got " + std::to_string(n));
    if (n % 2 != 0)
        throw Error("hypercurve.OddCount",
                    std::to_string(n) +
                        " branch points: odd-degree models must pass through mobius_normalize first");
    genus_ = static_cast<int>(n / 2) - 1;

    // Expand in a canonical order so the coefficients do not depend on the
    // order in which the points were supplied.
    std::vector<Complex> sorted(branch_.points().begin(), branch_.points().end());
    std::sort(sorted.begin(), sorted.end(), lexicographic_less);
    fcoeffs_.assign(1, Complex(1.0));
    for (const auto& b : sorted) {
        std::vector<Complex> next(fcoeffs_.size() + 1, Complex(0.0));
        for (std::size_t k = 0; k < fcoeffs_.size(); ++k) {
            next[k + 1] += fcoeffs_[k];
            next[k] -= b * fcoeffs_[k];
        }
        fcoeffs_ = std::move(next);
    }
}

Complex HyperellipticCurve::evaluate(Complex x) const {
    Complex value(1.0);
    for (const auto& b : branch_.points()) value *= (x - b);
    return value;
}

Complex HyperellipticCurve::evaluate_without(Complex x, std::size_t skip0, std::size_t skip1) const {
    Complex value(1.0);
    const auto pts = branch_.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i == skip0 || i == skip1) continue;
        value *= (x - pts[i]);
    }
    return value;
}

HyperellipticCurve curve_from_branch_points(std::span<const Complex> points,
                                            double separation_tolerance) {
    return HyperellipticCurve(
        BranchPointSet(std::vector<Complex>(points.begin(), points.end()), separation_tolerance));
}

std::pair<BranchPointSet, TransformRecord> mobius_normalize(std::span<const Complex> points,
                                                            double separation_tolerance) {
    BranchPointSet input(std::vector<Complex>(points.begin(), points.end()), separation_tolerance);
    if (points.size() < 3 || points.size() % 2 == 0)
        throw Error("hypercurve.OddCount",
                    "mobius_normalize expects an odd number (>= 3) of finite branch points, got " +
                        std::to_string(points.size()));

    Complex centroid(0.0);
    for (const auto& p : points) centroid += p;
    centroid /= static_cast<double>(points.size());
    const Complex center = centroid + Complex(1.0 + input.diameter(), 0.0);

    // x -> 1/(x - center); infinity lands on the origin.
    std::vector<Complex> image;
    image.reserve(points.size() + 1);
    for (const auto& p : points) image.push_back(1.0 / (p - center));
    image.emplace_back(0.0, 0.0);

    return {BranchPointSet(std::move(image), separation_tolerance),
            TransformRecord{center, points.size()}};
}

Complex evaluate_f(const HyperellipticCurve& curve, Complex x) { return curve.evaluate(x); }

std::vector<Differential> differential_basis(const HyperellipticCurve& curve) {
    std::vector<Differential> basis;
    basis.reserve(static_cast<std::size_t>(curve.genus()));
    for (int e = 0; e < curve.genus(); ++e) basis.push_back(Differential{e});
    return basis;
}

}  // namespace hyperperiods
