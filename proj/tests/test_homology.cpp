#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "hyperperiods/error.hpp"
#include "hyperperiods/homology.hpp"
#include "oracles.hpp"

using namespace hyperperiods;

namespace {

std::string code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

std::vector<Complex> line_points(int n) {
    std::vector<Complex> pts;
    for (int i = 0; i < n; ++i) pts.push_back(static_cast<double>(i));
    return pts;
}

// Intersection matrix of the ladder: C_k . D_k = 1, C_{k-1} . D_k = -1.
IntMatrix ladder(int g) {
    const auto n = static_cast<std::size_t>(2 * g + 1);
    IntMatrix m(n, n);
    for (int k = 1; k <= g; ++k) {
        const auto d = static_cast<std::size_t>(g + k);
        m(static_cast<std::size_t>(k), d) = 1;
        m(d, static_cast<std::size_t>(k)) = -1;
        m(static_cast<std::size_t>(k - 1), d) = -1;
        m(d, static_cast<std::size_t>(k - 1)) = 1;
    }
    return m;
}

}  // namespace

TEST_CASE("integer matrix basics") {
    const auto J = IntMatrix::standard_symplectic(2);
    CHECK(J.is_antisymmetric());
    CHECK(J.determinant() == 1);
    CHECK(J * J == -IntMatrix::identity(4));
    CHECK(J.transpose() == -J);
    IntMatrix s(2, 2);
    s(0, 0) = 2;
    s(0, 1) = 1;
    s(1, 0) = 7;
    s(1, 1) = 4;
    CHECK(s.determinant() == 1);
}

TEST_CASE("clearance threshold in Bernstein form") {
    CHECK(clearance_ellipse_parameter(0.3) == doctest::Approx(0.6 + std::sqrt(1.36)));
    CHECK(chord_ellipse_parameter(-1.0, 1.0, 0.0) == doctest::Approx(1.0));
    CHECK(chord_ellipse_parameter(-1.0, 1.0, Complex(0.0, 0.6)) == doctest::Approx(0.6 + std::sqrt(1.36)));
    CHECK(code_of([] { spanning_path(BranchPointSet({0.0, 1.0, 2.0, 3.0}), HomologyOptions{-1.0}); }) ==
          "homology.InvalidClearance");
}

TEST_CASE("collinear points give the natural path") {
    const auto c = curve_from_branch_points(line_points(8));
    const auto path = spanning_path(c.branch());
    std::vector<std::size_t> want(8);
    std::iota(want.begin(), want.end(), 0);
    CHECK(path.order == want);
    CHECK(path.segments.size() == 7);
}

TEST_CASE("spanning paths are clear by an independent check") {
    std::mt19937_64 rng(41);
    int found = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto pts = oracle::disk_points(2 * (1 + trial % 4) + 2, rng);
        try {
            const auto path = spanning_path(BranchPointSet(pts));
            CHECK(oracle::order_is_clear(pts, path.order, 0.3));
            ++found;
        } catch (const Error& e) {
            CHECK(e.code() == "homology.NoClearPath");
        }
    }
    MESSAGE("clear paths found for " << found << " of 200 random sets");
    CHECK(found > 100);
}

TEST_CASE("hill climbing against brute force on six points") {
    std::mt19937_64 rng(43);
    int brute_ok = 0, climb_ok = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto pts = oracle::disk_points(6, rng);
        std::vector<std::size_t> order(6);
        std::iota(order.begin(), order.end(), 0);
        bool any = false;
        do {
            if (oracle::order_is_clear(pts, order, 0.3)) any = true;
        } while (!any && std::next_permutation(order.begin(), order.end()));
        bool climbed = false;
        try {
            spanning_path(BranchPointSet(pts));
            climbed = true;
        } catch (const Error&) {
        }
        brute_ok += any;
        climb_ok += climbed;
        // A path found by the climber is always admissible for brute force.
        if (climbed) CHECK(any);
    }
    MESSAGE("six-point sets with a clear ordering: brute force " << brute_ok << ", hill climb " << climb_ok);
}

TEST_CASE("no clear path reports the offending geometry") {
    // A point sitting next to the only possible chord.
    const std::vector<Complex> pts = {0.0, 1.0, Complex(0.5, 0.01), 10.0};
    try {
        spanning_path(BranchPointSet(pts));
        FAIL("expected NoClearPath");
    } catch (const Error& e) {
        CHECK(e.code() == "homology.NoClearPath");
    }
}

TEST_CASE("cycle sets on the ladder") {
    for (int g = 1; g <= 5; ++g) {
        const auto c = curve_from_branch_points(line_points(2 * g + 2));
        const auto set = build_cycles(c, spanning_path(c.branch()));
        CHECK(set.cycles.size() == static_cast<std::size_t>(2 * g + 1));
        CHECK(set.intersection == ladder(g));
        CHECK(set.intersection.is_antisymmetric());
        for (const auto& cyc : set.cycles) CHECK(is_closed(cyc, set.path));
        CHECK(set.cycles[set.pair_index(0)].label == "pair-0");
        CHECK(set.cycles[set.cross_index(1)].label == "cross-1");
    }
}

TEST_CASE("combinatorial intersections match the geometric crossing oracle") {
    std::mt19937_64 rng(47);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int g = 1 + trial % 4;
        const auto pts = oracle::disk_points(static_cast<std::size_t>(2 * g + 2), rng);
        const auto c = curve_from_branch_points(pts);
        SpanningPath path;
        try {
            path = spanning_path(c.branch());
        } catch (const Error&) {
            continue;
        }
        const auto set = build_cycles(c, path);
        for (bool right : {true, false}) {
            const auto drawn = oracle::draw_cycles(c, set, right);
            CHECK(drawn.consistent);
            CHECK(oracle::geometric_intersection(c, set, drawn) == set.intersection);
        }
        ++checked;
    }
    CHECK(checked > 30);
}

TEST_CASE("symplectic reduction of the standard forms") {
    for (std::size_t g = 1; g <= 4; ++g) {
        const auto J = IntMatrix::standard_symplectic(g);
        CHECK(symplectic_reduce(J).T == IntMatrix::identity(2 * g));
        const auto T = symplectic_reduce(-J).T;
        CHECK(T * (-J) * T.transpose() == J);
    }
}

TEST_CASE("symplectic reduction of random unimodular scrambles") {
    std::mt19937_64 rng(53);
    for (std::size_t g = 1; g <= 4; ++g) {
        const auto J = IntMatrix::standard_symplectic(g);
        for (int trial = 0; trial < 200; ++trial) {
            const auto S = oracle::random_unimodular(2 * g, rng);
            const auto M = S * J * S.transpose();
            const auto T = symplectic_reduce(M).T;
            CHECK(std::abs(T.determinant()) == 1);
            CHECK(T * M * T.transpose() == J);
        }
    }
}

TEST_CASE("symplectic reduction rejects bad input") {
    IntMatrix sym(2, 2);
    sym(0, 1) = 1;
    sym(1, 0) = 1;
    CHECK(code_of([&] { symplectic_reduce(sym); }) == "homology.NotAntisymmetric");
    IntMatrix twice = IntMatrix::standard_symplectic(1);
    twice(0, 1) = 2;
    twice(1, 0) = -2;
    CHECK(code_of([&] { symplectic_reduce(twice); }) == "homology.NotUnimodular");
    CHECK(code_of([&] { symplectic_reduce(IntMatrix(2, 3)); }) == "homology.ShapeMismatch");
}

TEST_CASE("canonical basis intersects as J") {
    std::mt19937_64 rng(59);
    int built = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int g = 1 + trial % 5;
        const auto c = curve_from_branch_points(oracle::disk_points(static_cast<std::size_t>(2 * g + 2), rng));
        try {
            const auto basis = canonical_basis(c);
            const auto J = IntMatrix::standard_symplectic(static_cast<std::size_t>(g));
            CHECK(basis.basis_intersection == J);
            // Recompute from the combinations over all stored cycles.
            const auto& M = basis.cycles.intersection;
            const std::size_t n = 2 * static_cast<std::size_t>(g);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    std::int64_t v = 0;
                    for (std::size_t a = 0; a < M.rows(); ++a)
                        for (std::size_t b = 0; b < M.cols(); ++b)
                            v += basis.combinations[i][a] * M(a, b) * basis.combinations[j][b];
                    CHECK(v == J(i, j));
                }
            ++built;
        } catch (const Error& e) {
            CHECK(e.code() == "homology.NoClearPath");
        }
    }
    CHECK(built > 20);
}
