#include "hyperperiods/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hyperperiods/error.hpp"
#include "hyperperiods/io.hpp"
#include "hyperperiods/schottky.hpp"

namespace hyperperiods::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

nlohmann::json error_json(const std::string& code, std::string message) {
    const auto prefix = code + ": ";
    if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
    return {{"error", {{"code", code}, {"message", message}}}};
}

void emit(const std::string& text, const RunConfig& config, std::ostream& out) {
    if (config.output_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(config.output_path, std::ios::binary);
    if (!file) throw Error("cli.IOError", "cannot write " + config.output_path);
    file << text;
    if (!file) throw Error("cli.IOError", "failed writing " + config.output_path);
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::vector<std::int64_t> parse_coefficients(const std::string& text) {
    std::vector<std::int64_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = std::min(text.find(',', pos), text.size());
        std::string_view token(text.data() + pos, comma - pos);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (!token.empty() && token.front() == '+') token.remove_prefix(1);
        std::int64_t value = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
            throw Error("cli.Usage", "--coeffs expects comma-separated integers, got \"" + text + "\"");
        out.push_back(value);
        pos = comma + 1;
    }
    return out;
}

int parse_synthetic_genus(std::string text) {
    if (text.rfind("g=", 0) == 0) text.erase(0, 2);
    int g = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), g);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || g < 1)
        throw Error("cli.Usage", "--synthetic-flat expects g=G with G >= 1");
    return g;
}

nlohmann::json residual_json(const RelationResidual& r) {
    auto residuals = nlohmann::json::array();
    for (const auto& z : r.residuals) residuals.push_back(io::to_json(z));
    return {{"coefficients", r.coefficients}, {"residuals", residuals}, {"max_relative", r.max_relative}};
}

nlohmann::json metadata(const std::optional<TransformRecord>& mobius) {
    nlohmann::json m{{"tool", "hyperperiods"}, {"version", kVersion}};
    if (mobius) {
        m["mobius"] = {{"map", "x -> 1/(x - center)"},
                       {"center", io::to_json(mobius->center)},
                       {"original_count", mobius->original_count}};
    } else {
        m["mobius"] = nullptr;
    }
    return m;
}

std::vector<Complex> load_points(const std::string& path) {
    return io::parse_branch_points(io::read_file(path));
}

int cmd_periods(const std::string& input, const std::string& dump_cycles, const RunConfig& config,
                std::ostream& out) {
    const auto result = compute_curve(load_points(input), config);
    if (!dump_cycles.empty()) {
        auto diag = io::to_json(result.table.basis.cycles);
        diag["transform"] = io::to_json(result.table.basis.transform.T);
        diag["generators"] = result.table.basis.generators;
        diag["combinations"] = result.table.basis.combinations;
        diag["basis_intersection"] = io::to_json(result.table.basis.basis_intersection);
        auto points = nlohmann::json::array();
        for (const auto& p : result.curve.branch().points()) points.push_back(io::to_json(p));
        diag["branch_points"] = points;
        diag["config"] = to_json(config);
        std::ofstream file(dump_cycles, std::ios::binary);
        if (!file) throw Error("cli.IOError", "cannot write " + dump_cycles);
        file << dump(diag);
    }
    emit(dump(periods_json(result, config)), config, out);
    return kExitOk;
}

int cmd_analyze(const std::string& input, const std::string& format, const std::string& stats_path,
                const RunConfig& config, std::ostream& out) {
    const auto ingested = ingest_matrix(io::read_file(input));
    const auto entries = period_entries(ingested.matrix, config.entry_selection);
    const auto dist = sorted_distribution(to_real_list(entries, config.distribution_mode),
                                          config.distribution_mode, ingested.source);

    nlohmann::json stats;
    stats["source"] = dist.source;
    stats["mode"] = to_string(dist.mode);
    stats["entries"] = to_string(config.entry_selection);
    stats["count"] = dist.values.size();
    stats["values"] = dist.values;
    if (dist.values.size() >= 3) {
        const auto profile = concavity_profile(dist);
        stats["concavity"] = {{"second_differences", profile.second_differences},
                              {"fraction_nonnegative", profile.fraction_nonnegative},
                              {"verdict", to_string(profile.verdict)}};
    } else {
        stats["concavity"] = nullptr;
    }
    const bool has_zero = std::any_of(entries.begin(), entries.end(), [](Complex z) { return z == Complex(0.0); });
    stats["argument_spread"] = has_zero ? nlohmann::json(nullptr) : nlohmann::json(argument_spread(entries));
    stats["riemann"] = {{"symmetry_residual", ingested.residuals.symmetry_residual},
                        {"min_imag_eigenvalue", ingested.residuals.min_imag_eigenvalue}};
    stats["config"] = to_json(config);
    stats["metadata"] = metadata(std::nullopt);

    if (!stats_path.empty()) {
        std::ofstream file(stats_path, std::ios::binary);
        if (!file) throw Error("cli.IOError", "cannot write " + stats_path);
        file << dump(stats);
    }
    emit(format == "json" ? dump(stats) : distribution_csv(dist), config, out);
    return kExitOk;
}

int cmd_check(const std::string& input, const std::string& coeffs, const std::string& synthetic,
              const RunConfig& config, std::ostream& out) {
    ComplexMatrix candidate;
    std::string source;
    std::optional<TransformRecord> mobius;
    if (!synthetic.empty()) {
        const int g = parse_synthetic_genus(synthetic);
        candidate = synthetic_flat_pair_periods(g);
        source = "synthetic flat, genus " + std::to_string(g);
    } else if (!input.empty()) {
        const auto text = io::read_file(input);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw Error("cli.ParseError", std::string("input is not valid JSON: ") + e.what());
        }
        if (doc.is_object() && doc.contains("pair_periods")) {
            candidate = io::complex_matrix_from_json(doc["pair_periods"]);
            source = "pair_periods file";
        } else {
            const auto result = compute_curve(io::parse_branch_points(text), config);
            candidate = result.table.pair_periods;
            mobius = result.mobius;
            source = "computed curve";
        }
    } else {
        throw Error("cli.Usage", "check needs an INPUT file or --synthetic-flat g=G");
    }

    SchottkyOptions options;
    options.flatness_threshold = config.flatness_epsilon;

    nlohmann::json report;
    report["source"] = source;
    report["genus"] = candidate.cols();
    report["pair_periods"] = io::to_json(candidate);
    report["null_relation"] = residual_json(null_relation_residual(candidate));
    if (!coeffs.empty())
        report["custom_relation"] = residual_json(custom_relation_residual(candidate, parse_coefficients(coeffs)));
    const auto verdict = hyperelliptic_exclusion(candidate, options);
    report["excluded"] = verdict.excluded;
    report["flatness"] = verdict.flatness;
    report["witness"] = verdict.witness;
    report["max_row_norm"] = verdict.max_row_norm;
    report["bound_constant"] = verdict.bound_constant;
    report["config"] = to_json(config);
    report["metadata"] = metadata(mobius);
    emit(dump(report), config, out);
    return verdict.excluded ? kExitExcluded : kExitOk;
}

int cmd_sample(int genus, const RunConfig& config, std::ostream& out) {
    if (genus < 1) throw Error("cli.Usage", "sample needs --genus >= 1");
    const auto m = equal_modulus_abelian_variety(genus, config.seed);
    const auto r = riemann_residuals(m);
    const std::vector<std::string> comments = {
        "equal-modulus abelian variety, genus " + std::to_string(genus) + ", seed " + std::to_string(config.seed),
        "symmetry_residual " + io::format_double(r.symmetry_residual),
        "min_imag_eigenvalue " + io::format_double(r.min_imag_eigenvalue),
    };
    emit(emit_matrix(m, comments), config, out);
    return kExitOk;
}

}  // namespace

void validate(const RunConfig& config) {
    if (config.quadrature_order < 8) throw Error("cli.Usage", "--order must be at least 8");
    if (!(config.symmetry_tolerance > 0.0)) throw Error("cli.Usage", "--tolerance must be positive");
    if (!(config.flatness_epsilon > 0.0)) throw Error("cli.Usage", "--epsilon must be positive");
    if (!(config.clearance > 0.0)) throw Error("cli.Usage", "--clearance must be positive");
    if (!(config.separation > 0.0)) throw Error("cli.Usage", "--separation must be positive");
    if (!(config.step_tolerance > 0.0)) throw Error("cli.Usage", "--step-tolerance must be positive");
}

nlohmann::json to_json(const RunConfig& config) {
    return {{"quadrature_order", config.quadrature_order},
            {"symmetry_tolerance", config.symmetry_tolerance},
            {"flatness_epsilon", config.flatness_epsilon},
            {"distribution_mode", to_string(config.distribution_mode)},
            {"entry_selection", to_string(config.entry_selection)},
            {"clearance", config.clearance},
            {"separation", config.separation},
            {"step_tolerance", config.step_tolerance},
            {"seed", config.seed},
            {"output_path", config.output_path.empty() ? nlohmann::json(nullptr) : nlohmann::json(config.output_path)}};
}

PeriodOptions period_options(const RunConfig& config) {
    PeriodOptions o;
    o.quadrature.order = config.quadrature_order;
    o.quadrature.continuation.step_tolerance = config.step_tolerance;
    o.homology.clearance = config.clearance;
    o.symmetry_tolerance = config.symmetry_tolerance;
    return o;
}

CurveRun compute_curve(const std::vector<Complex>& points, const RunConfig& config) {
    validate(config);
    std::optional<TransformRecord> mobius;
    std::optional<HyperellipticCurve> curve;
    if (points.size() % 2 == 1 && points.size() >= 3) {
        auto [branch, record] = mobius_normalize(points, config.separation);
        mobius = record;
        curve.emplace(std::move(branch));
    } else {
        curve.emplace(curve_from_branch_points(points, config.separation));
    }
    const auto options = period_options(config);
    auto table = raw_periods(*curve, options);
    auto matrix = normalized_period_matrix(table, options);
    return CurveRun{std::move(*curve), mobius, std::move(table), std::move(matrix)};
}

nlohmann::json periods_json(const CurveRun& run, const RunConfig& config) {
    nlohmann::json j;
    j["genus"] = run.curve.genus();
    j["omega"] = io::to_json(run.matrix.omega);
    j["symmetry_residual"] = run.matrix.symmetry_residual;
    j["min_imag_eigenvalue"] = run.matrix.min_imag_eigenvalue;
    j["error_bound"] = run.table.error_bound;
    j["condition_number"] = run.table.condition_number;
    j["transform"] = io::to_json(run.table.basis.transform.T);
    j["pair_periods"] = io::to_json(run.table.pair_periods);
    j["config"] = to_json(config);
    j["metadata"] = metadata(run.mobius);
    return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    std::string input, dump_cycles, format = "csv", stats_path, coeffs, synthetic, mode = "modulus",
                                     entries = "upper";
    int genus = 0;

    CLI::App app{"Period matrices of hyperelliptic curves and their period distributions", "hyperperiods"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    auto add_numeric = [&](CLI::App* sub) {
        sub->add_option("--order", config.quadrature_order, "Gauss-Chebyshev order (>= 8)");
        sub->add_option("--tolerance", config.symmetry_tolerance, "Riemann symmetry tolerance");
        sub->add_option("--clearance", config.clearance, "Spanning-path clearance fraction");
        sub->add_option("--separation", config.separation, "Relative duplicate-point tolerance");
        sub->add_option("--step-tolerance", config.step_tolerance, "Relative step bound for sqrt continuation");
    };

    auto* periods = app.add_subcommand("periods", "Compute the normalized period matrix of a curve");
    periods->add_option("input", input, "Curve JSON {\"branch_points\": [[re, im], ...]}")->required();
    add_numeric(periods);
    periods->add_option("--dump-cycles", dump_cycles, "Write cycles, intersections and transform as JSON");
    periods->add_option("-o,--output", config.output_path, "Output file");

    auto* analyze = app.add_subcommand("analyze", "Sorted period distribution of a matrix");
    analyze->add_option("input", input, "Period JSON or plain-text matrix")->required();
    analyze->add_option("--mode", mode, "modulus | modulus2 | argument");
    analyze->add_option("--entries", entries, "upper | all");
    analyze->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    analyze->add_option("--stats", stats_path, "Also write the statistics JSON here");
    analyze->add_option("-o,--output", config.output_path, "Output file");

    auto* check = app.add_subcommand("check", "Null-relation residual and flat-period exclusion");
    check->add_option("input", input, "Curve JSON or a JSON object with pair_periods");
    add_numeric(check);
    check->add_option("--epsilon", config.flatness_epsilon, "Flatness threshold");
    check->add_option("--coeffs", coeffs, "Integer combination c0,c1,... of the pair-cycles");
    check->add_option("--synthetic-flat", synthetic, "Use an all-equal-row candidate, g=G");
    check->add_option("-o,--output", config.output_path, "Output file");

    auto* sample = app.add_subcommand("sample", "Equal-modulus abelian variety in matrix text format");
    sample->add_option("--genus", genus, "Genus g >= 1")->required();
    sample->add_option("--seed", config.seed, "Random seed");
    sample->add_option("-o,--output", config.output_path, "Output file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << error_json("cli.Usage", e.what()).dump() << "\n";
        return kExitError;
    }

    try {
        config.distribution_mode = parse_real_mode(mode);
        config.entry_selection = parse_entry_selection(entries);
        validate(config);
        if (periods->parsed()) return cmd_periods(input, dump_cycles, config, out);
        if (analyze->parsed()) return cmd_analyze(input, format, stats_path, config, out);
        if (check->parsed()) return cmd_check(input, coeffs, synthetic, config, out);
        return cmd_sample(genus, config, out);
    } catch (const Error& e) {
        err << error_json(e.code(), e.what()).dump() << "\n";
    } catch (const std::exception& e) {
        err << error_json("cli.Internal", e.what()).dump() << "\n";
    }
    return kExitError;
}

}  // namespace hyperperiods::cli
