#include "hyperperiods/distribution.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "hyperperiods/error.hpp"
#include "hyperperiods/io.hpp"

namespace hyperperiods {

std::vector<double> to_real_list(std::span<const Complex> periods, RealMode mode) {
    if (periods.empty()) throw Error("distribution.Empty", "no periods supplied");
    std::vector<double> out;
    out.reserve(periods.size());
    for (const auto& z : periods) {
        switch (mode) {
            case RealMode::Modulus: out.push_back(std::abs(z)); break;
            case RealMode::ModulusSquared: out.push_back(std::norm(z)); break;
            case RealMode::Argument:
                if (z == Complex(0.0))
                    throw Error("distribution.ArgumentOfZero", "argument of a zero period");
                out.push_back(std::arg(z));
                break;
        }
    }
    return out;
}

PeriodDistribution sorted_distribution(std::vector<double> values, RealMode mode,
                                       std::string source) {
    if (values.empty()) throw Error("distribution.Empty", "no values supplied");
    std::stable_sort(values.begin(), values.end(), std::greater<>());
    return PeriodDistribution{mode, std::move(values), std::move(source)};
}

ConcavityProfile concavity_profile(const PeriodDistribution& dist, double flatness_tolerance) {
    const auto& p = dist.values;
    if (p.size() < 3)
        throw Error("distribution.TooShort", "concavity needs at least three values");
    ConcavityProfile profile;
    double scale = 0.0;
    for (double v : p) scale = std::max(scale, std::abs(v));
    const double tol = flatness_tolerance * scale;

    double largest = 0.0;
    std::size_t nonnegative = 0;
    for (std::size_t n = 1; n + 1 < p.size(); ++n) {
        const double d2 = p[n + 1] - 2.0 * p[n] + p[n - 1];
        profile.second_differences.push_back(d2);
        largest = std::max(largest, std::abs(d2));
        if (d2 >= -tol) ++nonnegative;
    }
    profile.fraction_nonnegative =
        static_cast<double>(nonnegative) / static_cast<double>(profile.second_differences.size());
    if (largest <= tol) profile.verdict = Verdict::Straight;
    else if (nonnegative == profile.second_differences.size()) profile.verdict = Verdict::ConcaveUp;
    else profile.verdict = Verdict::Mixed;
    return profile;
}

double argument_spread(std::span<const Complex> periods) {
    if (periods.empty()) throw Error("distribution.Empty", "no periods supplied");
    Complex mean(0.0);
    for (const auto& z : periods) {
        if (z == Complex(0.0)) throw Error("distribution.ArgumentOfZero", "argument of a zero period");
        const Complex u = z / std::abs(z);
        mean += u * u;
    }
    mean /= static_cast<double>(periods.size());
    return std::clamp(1.0 - std::abs(mean), 0.0, 1.0);
}

std::vector<Complex> period_entries(const ComplexMatrix& omega, EntrySelection selection) {
    std::vector<Complex> out;
    for (Eigen::Index i = 0; i < omega.rows(); ++i)
        for (Eigen::Index j = selection == EntrySelection::UpperTriangle ? i : 0; j < omega.cols(); ++j)
            out.push_back(omega(i, j));
    return out;
}

namespace {

ComplexMatrix parse_text_matrix(std::string_view data) {
    std::vector<std::vector<Complex>> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= data.size()) {
        const auto end = std::min(data.find('\n', pos), data.size());
        std::string_view line = data.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        std::vector<double> numbers;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i >= line.size()) break;
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            const std::string_view token = line.substr(i, j - i);
            double v = 0.0;
            const char* first = token.data();
            if (!token.empty() && token.front() == '+') ++first;
            const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), v);
            if (ec != std::errc() || ptr != token.data() + token.size())
                throw Error("distribution.ParseError",
                            "line " + std::to_string(line_no) + ": bad number '" + std::string(token) + "'");
            numbers.push_back(v);
            i = j;
        }
        if (numbers.empty()) continue;
        if (numbers.size() % 2 != 0)
            throw Error("distribution.ParseError",
                        "line " + std::to_string(line_no) + ": entries must be `re im` pairs");
        std::vector<Complex> row;
        for (std::size_t k = 0; k < numbers.size(); k += 2) row.emplace_back(numbers[k], numbers[k + 1]);
        if (!rows.empty() && row.size() != rows.front().size())
            throw Error("distribution.ParseError", "line " + std::to_string(line_no) + ": ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error("distribution.ParseError", "no matrix rows found");
    ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

}  // namespace

IngestedMatrix ingest_matrix(std::string_view data) {
    IngestedMatrix out;
    const auto first = data.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && data[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(data);
        } catch (const nlohmann::json::exception& e) {
            throw Error("distribution.ParseError", std::string("invalid JSON: ") + e.what());
        }
        if (!doc.contains("omega"))
            throw Error("distribution.ParseError", "JSON input has no \"omega\" matrix");
        out.matrix = io::complex_matrix_from_json(doc["omega"]);
        out.source = doc.contains("genus") ? "computed curve" : "ingested matrix";
    } else {
        out.matrix = parse_text_matrix(data);
        out.source = "ingested matrix";
    }
    if (out.matrix.rows() != out.matrix.cols())
        throw Error("distribution.NonSquare", "period matrix must be square");
    out.residuals = riemann_residuals(out.matrix);
    return out;
}

std::string emit_matrix(const ComplexMatrix& matrix, const std::vector<std::string>& comments) {
    std::ostringstream os;
    for (const auto& c : comments) os << "# " << c << "\n";
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            if (j > 0) os << "  ";
            os << io::format_double(matrix(i, j).real()) << " " << io::format_double(matrix(i, j).imag());
        }
        os << "\n";
    }
    return os.str();
}

std::string distribution_csv(const PeriodDistribution& dist) {
    std::ostringstream os;
    os << "rank,value\n";
    for (std::size_t n = 0; n < dist.values.size(); ++n)
        os << (n + 1) << "," << io::format_double(dist.values[n]) << "\n";
    return os.str();
}

std::string to_string(RealMode mode) {
    switch (mode) {
        case RealMode::Modulus: return "modulus";
        case RealMode::ModulusSquared: return "modulus2";
        case RealMode::Argument: return "argument";
    }
    return "modulus";
}

std::string to_string(EntrySelection selection) {
    return selection == EntrySelection::UpperTriangle ? "upper" : "all";
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::ConcaveUp: return "concave_up";
        case Verdict::Straight: return "straight";
        case Verdict::Mixed: return "mixed";
    }
    return "mixed";
}

RealMode parse_real_mode(std::string_view text) {
    if (text == "modulus") return RealMode::Modulus;
    if (text == "modulus2" || text == "modulus_squared") return RealMode::ModulusSquared;
    if (text == "argument") return RealMode::Argument;
    throw Error("cli.Usage", "unknown mode '" + std::string(text) + "'");
}

EntrySelection parse_entry_selection(std::string_view text) {
    if (text == "upper") return EntrySelection::UpperTriangle;
    if (text == "all") return EntrySelection::All;
    throw Error("cli.Usage", "unknown entry selection '" + std::string(text) + "'");
}

}  // namespace hyperperiods
