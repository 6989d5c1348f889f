#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hyperperiods/hypercurve.hpp"

namespace hyperperiods {

// Dense row-major integer matrix; all homology arithmetic is exact.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static IntMatrix identity(std::size_t n);
    // [[0, I], [-I, 0]] of size 2g.
    static IntMatrix standard_symplectic(std::size_t g);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& rhs) const;
    IntMatrix operator-() const;
    bool operator==(const IntMatrix& rhs) const = default;

    bool is_antisymmetric() const;
    // Exact determinant by fraction-free elimination.
    std::int64_t determinant() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::int64_t> data_;
};

struct HomologyOptions {
    // A foreign branch point must lie outside the Bernstein ellipse of every
    // chord that passes through a point at clearance * chord length from the
    // chord midpoint, measured perpendicular to the chord.
    double clearance = 0.3;
};

// Minimal accepted Bernstein ellipse parameter for a clearance fraction.
double clearance_ellipse_parameter(double clearance);

// Bernstein ellipse parameter of `point` relative to the chord [a, b]; 1 on the chord.
double chord_ellipse_parameter(Complex a, Complex b, Complex point);

struct SpanningPath {
    std::vector<std::size_t> order;
    // 2g+1 consecutive index pairs (order[k], order[k+1]).
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    // Smallest Bernstein parameter over all (chord, foreign point) pairs.
    double min_ellipse_parameter = 0.0;
};

struct Traversal {
    std::size_t segment = 0;
    int direction = 1;  // +1 along the path order, -1 against it
    int sheet = 1;      // relative to the chord branch of segment_integral
};

enum class CycleKind { Pair, Cross };

struct Cycle {
    std::vector<Traversal> traversals;
    std::string label;
    CycleKind kind = CycleKind::Pair;
    int index = 0;
};

// Pair-cycles C_0..C_g (counterclockwise around cuts 0..g, the even-position
// path segments) followed by cross-cycles D_1..D_g (around the segment joining
// cut k-1 to cut k, oriented so that C_k . D_k = +1).
struct CycleSet {
    int genus = 0;
    SpanningPath path;
    std::vector<Cycle> cycles;
    IntMatrix intersection;

    std::size_t pair_index(int k) const { return static_cast<std::size_t>(k); }
    std::size_t cross_index(int k) const { return static_cast<std::size_t>(genus + k); }
};

struct SymplecticTransform {
    IntMatrix T;
};

struct CanonicalBasis {
    CycleSet cycles;
    // Positions in `cycles.cycles` of the generators C_1..C_g, D_1..D_g.
    std::vector<std::size_t> generators;
    SymplecticTransform transform;
    // Row i: coefficients of basis cycle i (alpha_1..alpha_g, beta_1..beta_g)
    // over all 2g+1 stored cycles.
    std::vector<std::vector<std::int64_t>> combinations;
    // Intersection matrix of the basis cycles; equals J.
    IntMatrix basis_intersection;
};

SpanningPath spanning_path(const BranchPointSet& branch, const HomologyOptions& options = {});

CycleSet build_cycles(const HyperellipticCurve& curve, const SpanningPath& path);

IntMatrix intersection_matrix(const CycleSet& cycles);

// True when consecutive traversals join end to end and the sheet flips at each
// junction, so the loop closes on the sheet it started from.
bool is_closed(const Cycle& cycle, const SpanningPath& path);

SymplecticTransform symplectic_reduce(const IntMatrix& M);

CanonicalBasis canonical_basis(const HyperellipticCurve& curve,
                               const HomologyOptions& options = {});

}  // namespace hyperperiods
