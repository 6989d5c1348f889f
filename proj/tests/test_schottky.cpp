#include <doctest.h>

#include <random>

#include "hyperperiods/error.hpp"
#include "hyperperiods/schottky.hpp"
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

ComplexMatrix sixth_roots_pair_periods() {
    std::vector<Complex> pts;
    for (int k = 0; k < 6; ++k) pts.push_back(std::polar(1.0, k * std::numbers::pi / 3));
    return raw_periods(curve_from_branch_points(pts)).pair_periods;
}

}  // namespace

TEST_CASE("null relation on constructed matrices") {
    for (int g = 1; g <= 6; ++g) {
        const auto flat = synthetic_flat_pair_periods(g);
        const auto r = null_relation_residual(flat);
        CHECK(r.coefficients == std::vector<std::int64_t>(static_cast<std::size_t>(g + 1), 1));
        REQUIRE(r.residuals.size() == static_cast<std::size_t>(g));
        for (int j = 0; j < g; ++j) CHECK(std::abs(r.residuals[static_cast<std::size_t>(j)] - double(g + 1) * flat(0, j)) < 1e-14);
        CHECK(r.max_relative == doctest::Approx(g + 1.0));

        ComplexMatrix balanced = ComplexMatrix::Zero(g + 1, g);
        for (int k = 0; k < g; ++k)
            for (int j = 0; j < g; ++j) {
                balanced(k, j) = Complex(k + 1, j - 2);
                balanced(g, j) -= balanced(k, j);
            }
        const auto z = null_relation_residual(balanced);
        for (const auto& v : z.residuals) CHECK(v == Complex(0.0));
        CHECK(z.max_relative == 0.0);
    }
}

TEST_CASE("custom relations") {
    const auto pp = sixth_roots_pair_periods();
    const std::vector<std::int64_t> ones = {1, 1, 1};
    CHECK(custom_relation_residual(pp, ones).max_relative == null_relation_residual(pp).max_relative);
    const std::vector<std::int64_t> zeros = {0, 0, 0};
    CHECK(custom_relation_residual(pp, zeros).max_relative == 0.0);
    const std::vector<std::int64_t> short_list = {1, 1};
    CHECK(code_of([&] { custom_relation_residual(pp, short_list); }) == "schottky.LengthMismatch");
}

TEST_CASE("some signed combination of the four genus-3 pair-cycles vanishes") {
    std::mt19937_64 rng(97);
    int curves = 0;
    for (int trial = 0; trial < 20 && curves < 5; ++trial) {
        PeriodTable t;
        try {
            t = raw_periods(curve_from_branch_points(oracle::disk_points(8, rng)));
        } catch (const Error&) {
            continue;
        }
        double best = INFINITY;
        for (int mask = 0; mask < 16; ++mask) {
            std::vector<std::int64_t> c(4);
            for (int k = 0; k < 4; ++k) c[static_cast<std::size_t>(k)] = (mask >> k) & 1 ? -1 : 1;
            best = std::min(best, custom_relation_residual(t.pair_periods, c).max_relative);
        }
        CHECK(best <= 1e-8);
        ++curves;
    }
    CHECK(curves == 5);
}

TEST_CASE("flatness measure") {
    ComplexMatrix same(3, 2);
    same << 1.0, Complex(0, 2), 1.0, Complex(0, 2), 1.0, Complex(0, 2);
    CHECK(flatness_measure(same) == 0.0);
    ComplexMatrix anti(2, 2);
    anti << Complex(1, 1), 2.0, Complex(-1, -1), -2.0;
    CHECK(flatness_measure(anti) == doctest::Approx(2.0));
    CHECK(code_of([] { flatness_measure(ComplexMatrix::Zero(3, 2)); }) == "schottky.ZeroMatrix");
    const double f = flatness_measure(sixth_roots_pair_periods());
    MESSAGE("sixth-roots flatness " << f);
    CHECK(f > 0.0);
}

TEST_CASE("exclusion of flat candidates") {
    for (int g = 1; g <= 6; ++g) {
        const auto v = hyperelliptic_exclusion(synthetic_flat_pair_periods(g));
        CHECK(v.excluded);
        CHECK(v.flatness == 0.0);
        CHECK(v.bound_constant == doctest::Approx((2.0 * g + 1) / (g + 1) + 1));
        CHECK(v.witness.find("no hyperelliptic curve") != std::string::npos);
    }
    const auto real = hyperelliptic_exclusion(sixth_roots_pair_periods());
    CHECK_FALSE(real.excluded);
    CHECK(code_of([] { hyperelliptic_exclusion(ComplexMatrix::Zero(2, 1)); }) == "schottky.ZeroMatrix");
}

TEST_CASE("flat rows that nearly sum to zero are nearly zero") {
    // Any matrix meets the hypotheses with eps = max(row spread, |row sum|) / M,
    // so the bound row norm <= C * eps * M is checked on arbitrary candidates.
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int g = 1; g <= 6; ++g) {
        const double C = (2.0 * g + 1) / (g + 1) + 1;
        for (int trial = 0; trial < 500; ++trial) {
            const double noise = std::pow(10.0, -(trial % 10));
            const double cancel = (trial / 10) % 2 == 0 ? 1.0 : 0.0;
            Eigen::RowVectorXcd r(g);
            for (int j = 0; j < g; ++j) r(j) = Complex(u(rng), u(rng));
            ComplexMatrix m(g + 1, g);
            for (int k = 0; k <= g; ++k)
                for (int j = 0; j < g; ++j) m(k, j) = r(j) + noise * Complex(u(rng), u(rng));
            const Eigen::RowVectorXcd mean = m.colwise().mean();
            for (int k = 0; k <= g; ++k) m.row(k) -= cancel * mean;
            double M = 0;
            for (int k = 0; k <= g; ++k) M = std::max(M, m.row(k).cwiseAbs().maxCoeff());
            const double eps = std::max(flatness_measure(m), m.colwise().sum().cwiseAbs().maxCoeff() / M);
            for (int k = 0; k <= g; ++k) CHECK(m.row(k).cwiseAbs().maxCoeff() <= C * eps * M * (1 + 1e-12));
        }
    }
}

TEST_CASE("scaling invariance of residuals and flatness") {
    const auto pp = sixth_roots_pair_periods();
    const double f = flatness_measure(pp);
    const double r = null_relation_residual(pp).max_relative;
    for (const Complex lambda : {Complex(3.5, 0), Complex(-0.25, 2), Complex(1e-3, 1e-3)}) {
        const ComplexMatrix s = lambda * pp;
        CHECK(std::abs(flatness_measure(s) - f) <= 1e-12 * f);
        CHECK(std::abs(null_relation_residual(s).max_relative - r) <= 1e-12 + 1e-12 * r);
    }
}

TEST_CASE("equal-modulus abelian varieties") {
    const auto one = equal_modulus_abelian_variety(1, 0);
    CHECK(one(0, 0) == Complex(0, 1));
    for (int g = 1; g <= 8; ++g)
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto m = equal_modulus_abelian_variety(g, seed);
            const auto r = riemann_residuals(m);
            CHECK(r.symmetry_residual == 0.0);
            CHECK(r.min_imag_eigenvalue > 0.0);
            const auto mod = m.cwiseAbs();
            CHECK(mod.maxCoeff() - mod.minCoeff() <= 1e-12);
            CHECK(equal_modulus_abelian_variety(g, seed) == m);
        }
    CHECK(code_of([] { equal_modulus_abelian_variety(0, 1); }) == "schottky.InvalidGenus");
}
