#pragma once

#include <Eigen/Dense>

#include "hyperperiods/homology.hpp"
#include "hyperperiods/hypercurve.hpp"
#include "hyperperiods/quadrature.hpp"

namespace hyperperiods {

using ComplexMatrix = Eigen::MatrixXcd;

struct PeriodOptions {
    QuadratureOptions quadrature;
    HomologyOptions homology;
    double symmetry_tolerance = 1e-6;
    // Condition number of A above which the normalization is refused.
    double max_condition = 1e12;
};

// Raw periods. A(i, j) and B(i, j) are the periods of x^i dx / y over the
// basis cycles alpha_j and beta_j; pair_periods(k, i) is the period of
// x^i dx / y over the pair-cycle C_k.
struct PeriodTable {
    ComplexMatrix A;
    ComplexMatrix B;
    ComplexMatrix pair_periods;
    // Largest propagated quadrature error (estimate plus rounding floor) over
    // every entry of A, B and pair_periods.
    double error_bound = 0.0;
    double condition_number = 0.0;
    CanonicalBasis basis;
};

struct RiemannResiduals {
    double symmetry_residual = 0.0;
    double min_imag_eigenvalue = 0.0;
};

struct PeriodMatrix {
    ComplexMatrix omega;
    double symmetry_residual = 0.0;
    double min_imag_eigenvalue = 0.0;
};

PeriodTable raw_periods(const HyperellipticCurve& curve, const PeriodOptions& options = {});

// Omega = A^{-1} B. Throws periods.RiemannViolation when the result is not
// symmetric within tolerance or its imaginary part is not positive definite.
PeriodMatrix normalized_period_matrix(const PeriodTable& table, const PeriodOptions& options = {});

// Omega = A^{-1} B with diagnostics but without the Riemann acceptance check.
PeriodMatrix unchecked_period_matrix(const PeriodTable& table, const PeriodOptions& options = {});

// Ratio of extreme singular values; infinite for singular or non-square input.
double condition_number(const ComplexMatrix& a);

// max |W_ij - W_ji| / max |W_ij| and the smallest eigenvalue of the
// symmetrized imaginary part.
RiemannResiduals riemann_residuals(const ComplexMatrix& omega);

}  // namespace hyperperiods
