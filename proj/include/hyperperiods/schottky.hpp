#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hyperperiods/periods.hpp"

namespace hyperperiods {

struct SchottkyOptions {
    double flatness_threshold = 1e-6;
    // Largest row norm at or below which the candidate counts as the zero matrix.
    double zero_threshold = 1e-12;
};

struct RelationResidual {
    std::vector<std::int64_t> coefficients;
    // sum_k c_k * pair_periods(k, j), one entry per differential.
    std::vector<Complex> residuals;
    // max_j |residual_j| / max_k |pair_periods(k, j)|
    double max_relative = 0.0;
};

struct ExclusionVerdict {
    bool excluded = false;
    double flatness = 0.0;
    double max_row_norm = 0.0;
    // Every row norm is at most bound_constant * flatness_threshold * max_row_norm
    // when the rows are flat and sum to (nearly) zero.
    double bound_constant = 0.0;
    double null_relative = 0.0;
    std::string witness;
};

RelationResidual null_relation_residual(const ComplexMatrix& pair_periods);

RelationResidual custom_relation_residual(const ComplexMatrix& pair_periods,
                                          std::span<const std::int64_t> coefficients);

// Largest pairwise row distance (max-modulus norm) over the largest row norm.
double flatness_measure(const ComplexMatrix& pair_periods, double zero_threshold = 1e-12);

ExclusionVerdict hyperelliptic_exclusion(const ComplexMatrix& pair_periods,
                                         const SchottkyOptions& options = {});

// Symmetric g x g matrix with every entry of modulus one and positive-definite
// imaginary part. Deterministic in (g, seed).
ComplexMatrix equal_modulus_abelian_variety(int g, std::uint64_t seed);

// (g+1) x g candidate whose rows are all equal and nonzero.
ComplexMatrix synthetic_flat_pair_periods(int g);

}  // namespace hyperperiods
