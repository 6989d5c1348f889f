#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace hyperperiods {

using Complex = std::complex<double>;

// Points closer than this fraction of the point-set diameter are duplicates.
inline constexpr double kDefaultSeparation = 1e-9;

// Distinct finite ramification points, kept in the order supplied.
class BranchPointSet {
public:
    explicit BranchPointSet(std::vector<Complex> points,
                            double separation_tolerance = kDefaultSeparation);

    std::span<const Complex> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    const Complex& operator[](std::size_t i) const { return points_[i]; }

    double diameter() const noexcept { return diameter_; }
    double min_separation() const noexcept { return min_separation_; }
    double separation_tolerance() const noexcept { return separation_tolerance_; }

private:
    std::vector<Complex> points_;
    double diameter_ = 0.0;
    double min_separation_ = 0.0;
    double separation_tolerance_ = kDefaultSeparation;
};

// Holomorphic differential x^exponent dx / y.
struct Differential {
    int exponent = 0;
};

// y^2 = f(x) = prod (x - b_i) over 2g+2 finite branch points.
class HyperellipticCurve {
public:
    explicit HyperellipticCurve(BranchPointSet branch);

    const BranchPointSet& branch() const noexcept { return branch_; }
    int genus() const noexcept { return genus_; }

    // Monic coefficients in ascending powers, size 2g+3.
    const std::vector<Complex>& coefficients() const noexcept { return fcoeffs_; }

    // f(x) in product form.
    Complex evaluate(Complex x) const;

    // f(x) / ((x - b_skip0)(x - b_skip1)) in product form.
    Complex evaluate_without(Complex x, std::size_t skip0, std::size_t skip1) const;

private:
    BranchPointSet branch_;
    int genus_ = 0;
    std::vector<Complex> fcoeffs_;
};

// Record of the map x -> 1/(x - center) used to move the branch point at
// infinity of an odd-degree model to the origin.
struct TransformRecord {
    Complex center;
    std::size_t original_count = 0;
};

HyperellipticCurve curve_from_branch_points(std::span<const Complex> points,
                                            double separation_tolerance = kDefaultSeparation);

std::pair<BranchPointSet, TransformRecord> mobius_normalize(
    std::span<const Complex> points, double separation_tolerance = kDefaultSeparation);

Complex evaluate_f(const HyperellipticCurve& curve, Complex x);

std::vector<Differential> differential_basis(const HyperellipticCurve& curve);

}  // namespace hyperperiods
