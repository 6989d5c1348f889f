#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperperiods/distribution.hpp"
#include "hyperperiods/periods.hpp"

namespace hyperperiods::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitExcluded = 3;

struct RunConfig {
    int quadrature_order = 64;
    double symmetry_tolerance = 1e-6;
    double flatness_epsilon = 1e-6;
    RealMode distribution_mode = RealMode::Modulus;
    EntrySelection entry_selection = EntrySelection::UpperTriangle;
    double clearance = 0.3;
    double separation = kDefaultSeparation;
    double step_tolerance = 0.5;
    std::uint64_t seed = 0;
    // Empty means standard output.
    std::string output_path;
};

// Throws cli.Usage on an order below 8 or a nonpositive tolerance.
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

PeriodOptions period_options(const RunConfig& config);

struct CurveRun {
    HyperellipticCurve curve;
    std::optional<TransformRecord> mobius;
    PeriodTable table;
    PeriodMatrix matrix;
};

// Branch points to a Riemann-accepted period matrix; odd-length input is
// Moebius-normalized first.
CurveRun compute_curve(const std::vector<Complex>& points, const RunConfig& config);

nlohmann::json periods_json(const CurveRun& run, const RunConfig& config);

// Entry point for the `hyperperiods` binary. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperperiods::cli
