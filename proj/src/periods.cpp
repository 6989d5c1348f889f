#include "hyperperiods/periods.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "hyperperiods/error.hpp"

namespace hyperperiods {

PeriodTable raw_periods(const HyperellipticCurve& curve, const PeriodOptions& options) {
    PeriodTable table;
    table.basis = canonical_basis(curve, options.homology);
    const CycleSet& set = table.basis.cycles;
    const int g = curve.genus();
    const std::size_t nseg = set.path.segments.size();

    std::vector<std::vector<SegmentIntegralResult>> segment(nseg);
    for (std::size_t s = 0; s < nseg; ++s) {
        const auto [i, j] = set.path.segments[s];
        segment[s] = segment_integrals(curve, i, j, options.quadrature);
    }

    // Cycle periods and their error budgets, one row per stored cycle.
    const std::size_t ncycles = set.cycles.size();
    ComplexMatrix cycle_periods = ComplexMatrix::Zero(static_cast<Eigen::Index>(ncycles), g);
    Eigen::MatrixXd cycle_errors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ncycles), g);
    for (std::size_t c = 0; c < ncycles; ++c) {
        for (const auto& t : set.cycles[c].traversals) {
            const double sign = static_cast<double>(t.direction * t.sheet);
            for (int e = 0; e < g; ++e) {
                const auto& r = segment[t.segment][static_cast<std::size_t>(e)];
                cycle_periods(static_cast<Eigen::Index>(c), e) += sign * r.value;
                cycle_errors(static_cast<Eigen::Index>(c), e) += r.error_estimate + r.roundoff_floor;
            }
        }
    }

    table.pair_periods = cycle_periods.topRows(g + 1);
    double bound = cycle_errors.topRows(g + 1).maxCoeff();

    table.A.resize(g, g);
    table.B.resize(g, g);
    const auto& comb = table.basis.combinations;
    for (int b = 0; b < 2 * g; ++b) {
        for (int e = 0; e < g; ++e) {
            Complex value(0.0);
            double err = 0.0;
            for (std::size_t c = 0; c < ncycles; ++c) {
                const auto k = comb[static_cast<std::size_t>(b)][c];
                if (k == 0) continue;
                value += static_cast<double>(k) * cycle_periods(static_cast<Eigen::Index>(c), e);
                err += static_cast<double>(std::llabs(k)) * cycle_errors(static_cast<Eigen::Index>(c), e);
            }
            if (b < g) table.A(e, b) = value;
            else table.B(e, b - g) = value;
            bound = std::max(bound, err);
        }
    }
    table.error_bound = bound;

    table.condition_number = condition_number(table.A);
    if (!(table.condition_number <= options.max_condition)) {
        std::ostringstream os;
        os << "A-period matrix has condition number " << table.condition_number << " above "
           << options.max_condition;
        throw Error("periods.SingularAMatrix", os.str());
    }
    return table;
}

double condition_number(const ComplexMatrix& a) {
    if (a.rows() == 0 || a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const auto& sv = svd.singularValues();
    const double smax = sv(0), smin = sv(sv.size() - 1);
    return smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
}

RiemannResiduals riemann_residuals(const ComplexMatrix& omega) {
    RiemannResiduals r;
    if (omega.rows() != omega.cols() || omega.rows() == 0)
        throw Error("periods.NonSquare", "Riemann residuals need a nonempty square matrix");
    const double scale = omega.cwiseAbs().maxCoeff();
    const double asym = (omega - omega.transpose()).cwiseAbs().maxCoeff();
    r.symmetry_residual = scale > 0.0 ? asym / scale : 0.0;
    const Eigen::MatrixXd im = omega.imag();
    const Eigen::MatrixXd sym = 0.5 * (im + im.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    r.min_imag_eigenvalue = eig.eigenvalues().minCoeff();
    return r;
}

PeriodMatrix unchecked_period_matrix(const PeriodTable& table, const PeriodOptions& options) {
    if (!(condition_number(table.A) <= options.max_condition))
        throw Error("periods.SingularAMatrix", "A-period matrix is singular to working precision");
    PeriodMatrix pm;
    pm.omega = table.A.fullPivLu().solve(table.B);
    const auto r = riemann_residuals(pm.omega);
    pm.symmetry_residual = r.symmetry_residual;
    pm.min_imag_eigenvalue = r.min_imag_eigenvalue;
    return pm;
}

PeriodMatrix normalized_period_matrix(const PeriodTable& table, const PeriodOptions& options) {
    PeriodMatrix pm = unchecked_period_matrix(table, options);
    if (!(pm.symmetry_residual <= options.symmetry_tolerance) || !(pm.min_imag_eigenvalue > 0.0)) {
        std::ostringstream os;
        os << "normalized period matrix fails the Riemann conditions (symmetry residual "
           << pm.symmetry_residual << ", smallest imaginary eigenvalue " << pm.min_imag_eigenvalue
           << "); this is an internal failure, not a property of the curve";
        throw Error("periods.RiemannViolation", os.str());
    }
    return pm;
}

}  // namespace hyperperiods
