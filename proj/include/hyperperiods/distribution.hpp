#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperperiods/periods.hpp"

namespace hyperperiods {

enum class RealMode { Modulus, ModulusSquared, Argument };
enum class EntrySelection { UpperTriangle, All };
enum class Verdict { ConcaveUp, Straight, Mixed };

inline constexpr double kFlatnessTolerance = 1e-9;

struct PeriodDistribution {
    RealMode mode = RealMode::Modulus;
    std::vector<double> values;  // weakly decreasing
    std::string source;
};

struct ConcavityProfile {
    std::vector<double> second_differences;
    double fraction_nonnegative = 0.0;
    Verdict verdict = Verdict::Mixed;
};

struct IngestedMatrix {
    ComplexMatrix matrix;
    RiemannResiduals residuals;
    // "computed curve" for period JSON written by this tool, otherwise "ingested matrix".
    std::string source;
};

std::vector<double> to_real_list(std::span<const Complex> periods, RealMode mode);

// Descending stable sort.
PeriodDistribution sorted_distribution(std::vector<double> values, RealMode mode,
                                       std::string source);

ConcavityProfile concavity_profile(const PeriodDistribution& dist,
                                   double flatness_tolerance = kFlatnessTolerance);

// Axial circular variance 1 - |mean exp(2 i arg z)|.
double argument_spread(std::span<const Complex> periods);

// Upper triangle including the diagonal (row by row), or every entry.
std::vector<Complex> period_entries(const ComplexMatrix& omega, EntrySelection selection);

// Plain-text matrix (rows of `re im` pairs, `#` comments) or period JSON.
IngestedMatrix ingest_matrix(std::string_view data);

// Plain-text matrix with optional leading `#` comment lines.
std::string emit_matrix(const ComplexMatrix& matrix, const std::vector<std::string>& comments = {});

// `rank,value` rows of the (n, p_n) plot.
std::string distribution_csv(const PeriodDistribution& dist);

std::string to_string(RealMode mode);
std::string to_string(EntrySelection selection);
std::string to_string(Verdict verdict);
RealMode parse_real_mode(std::string_view text);
EntrySelection parse_entry_selection(std::string_view text);

}  // namespace hyperperiods
