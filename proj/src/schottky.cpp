#include "hyperperiods/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hyperperiods/error.hpp"

namespace hyperperiods {

namespace {

double row_norm(const ComplexMatrix& m, Eigen::Index r) { return m.row(r).cwiseAbs().maxCoeff(); }

double max_row_norm(const ComplexMatrix& m) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) best = std::max(best, row_norm(m, r));
    return best;
}

// Uniform in [0, 1) from the top 53 bits; independent of the standard library's
// distribution implementations.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

RelationResidual custom_relation_residual(const ComplexMatrix& pair_periods,
                                          std::span<const std::int64_t> coefficients) {
    if (static_cast<Eigen::Index>(coefficients.size()) != pair_periods.rows())
        throw Error("schottky.LengthMismatch",
                    "expected " + std::to_string(pair_periods.rows()) + " coefficients, got " +
                        std::to_string(coefficients.size()));
    RelationResidual out;
    out.coefficients.assign(coefficients.begin(), coefficients.end());
    for (Eigen::Index j = 0; j < pair_periods.cols(); ++j) {
        Complex sum(0.0);
        double scale = 0.0;
        for (Eigen::Index k = 0; k < pair_periods.rows(); ++k) {
            sum += static_cast<double>(coefficients[static_cast<std::size_t>(k)]) * pair_periods(k, j);
            scale = std::max(scale, std::abs(pair_periods(k, j)));
        }
        out.residuals.push_back(sum);
        const double rel = scale > 0.0 ? std::abs(sum) / scale : (std::abs(sum) > 0.0 ? INFINITY : 0.0);
        out.max_relative = std::max(out.max_relative, rel);
    }
    return out;
}

RelationResidual null_relation_residual(const ComplexMatrix& pair_periods) {
    const std::vector<std::int64_t> ones(static_cast<std::size_t>(pair_periods.rows()), 1);
    return custom_relation_residual(pair_periods, ones);
}

double flatness_measure(const ComplexMatrix& pair_periods, double zero_threshold) {
    if (pair_periods.size() == 0) throw Error("schottky.ZeroMatrix", "empty pair-period matrix");
    const double scale = max_row_norm(pair_periods);
    if (!(scale > zero_threshold))
        throw Error("schottky.ZeroMatrix", "pair periods vanish; flatness is undefined");
    double widest = 0.0;
    for (Eigen::Index a = 0; a < pair_periods.rows(); ++a)
        for (Eigen::Index b = a + 1; b < pair_periods.rows(); ++b)
            widest = std::max(widest, (pair_periods.row(a) - pair_periods.row(b)).cwiseAbs().maxCoeff());
    return widest / scale;
}

ExclusionVerdict hyperelliptic_exclusion(const ComplexMatrix& pair_periods,
                                         const SchottkyOptions& options) {
    ExclusionVerdict v;
    v.flatness = flatness_measure(pair_periods, options.zero_threshold);
    v.max_row_norm = max_row_norm(pair_periods);
    const auto null = null_relation_residual(pair_periods);
    v.null_relative = null.max_relative;
    const double g = static_cast<double>(pair_periods.cols());
    v.bound_constant = (2.0 * g + 1.0) / (g + 1.0) + 1.0;
    v.excluded = v.flatness <= options.flatness_threshold;

    double row_sum = 0.0;
    for (const auto& r : null.residuals) row_sum = std::max(row_sum, std::abs(r));

    std::ostringstream os;
    os.precision(6);
    const auto rows = pair_periods.rows();
    if (v.excluded) {
        os << "all " << rows << " pair-cycle period rows agree to flatness " << v.flatness
           << " <= " << options.flatness_threshold << ", so their sum is about " << rows
           << " * r with |sum| = " << row_sum << "; the null relation sum_k C_k ~ 0 would force every row norm <= "
           << v.bound_constant << " * " << options.flatness_threshold << " * " << v.max_row_norm
           << " = " << v.bound_constant * options.flatness_threshold * v.max_row_norm
           << ", contradicting the largest row norm " << v.max_row_norm
           << "; no hyperelliptic curve has these periods";
    } else {
        os << "rows differ (flatness " << v.flatness << " > " << options.flatness_threshold
           << "); null relation max relative residual " << v.null_relative
           << "; no contradiction with a hyperelliptic curve";
    }
    v.witness = os.str();
    return v;
}

ComplexMatrix equal_modulus_abelian_variety(int g, std::uint64_t seed) {
    if (g < 1) throw Error("schottky.InvalidGenus", "genus must be at least 1");
    constexpr int kAttempts = 8;
    constexpr int kShrinkSteps = 64;
    const double pi = std::numbers::pi;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt));
        Eigen::MatrixXd phase = Eigen::MatrixXd::Zero(g, g);
        for (int i = 0; i < g; ++i)
            for (int j = i + 1; j < g; ++j) phase(i, j) = phase(j, i) = (2.0 * unit_uniform(rng) - 1.0) * pi;

        for (int step = 0; step <= kShrinkSteps; ++step) {
            ComplexMatrix m(g, g);
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j)
                    m(i, j) = (i == j) ? Complex(0.0, 1.0) : std::polar(1.0, phase(i, j));
            const auto r = riemann_residuals(m);
            if (r.min_imag_eigenvalue > 1e-9 && r.symmetry_residual == 0.0) return m;
            // Rotate off-diagonal phases halfway toward the real axis.
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j) {
                    if (i == j) continue;
                    const double target = std::abs(phase(i, j)) > pi / 2 ? std::copysign(pi, phase(i, j)) : 0.0;
                    phase(i, j) = target + 0.5 * (phase(i, j) - target);
                }
        }
    }
    throw Error("schottky.ConstructionFailed",
                "no equal-modulus matrix with positive-definite imaginary part after bounded retries");
}

ComplexMatrix synthetic_flat_pair_periods(int g) {
    if (g < 1) throw Error("schottky.InvalidGenus", "genus must be at least 1");
    ComplexMatrix m(g + 1, g);
    for (int j = 0; j < g; ++j) {
        const Complex r = std::polar(1.0 + 0.25 * j, 0.3 + 0.7 * j);
        for (int k = 0; k <= g; ++k) m(k, j) = r;
    }
    return m;
}

}  // namespace hyperperiods
