#include "hyperperiods/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "hyperperiods/error.hpp"

namespace hyperperiods::io {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    std::string s(buf);
    if (std::isfinite(value) && s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

std::vector<Complex> parse_branch_points(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("cli.ParseError", std::string("curve input is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("branch_points") || !doc["branch_points"].is_array())
        throw Error("cli.ParseError", "curve input needs a \"branch_points\" array");
    std::vector<Complex> points;
    for (const auto& p : doc["branch_points"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw Error("cli.ParseError", "each branch point must be a [re, im] pair of numbers");
        points.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return points;
}

nlohmann::json to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json to_json(const ComplexMatrix& m) {
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json to_json(const IntMatrix& m) {
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json to_json(const CycleSet& set) {
    nlohmann::json out;
    out["genus"] = set.genus;
    out["path_order"] = set.path.order;
    auto segs = nlohmann::json::array();
    for (const auto& [a, b] : set.path.segments) segs.push_back({a, b});
    out["segments"] = segs;
    auto cycles = nlohmann::json::array();
    for (const auto& c : set.cycles) {
        auto trav = nlohmann::json::array();
        for (const auto& t : c.traversals)
            trav.push_back({{"segment", t.segment}, {"direction", t.direction}, {"sheet", t.sheet}});
        cycles.push_back({{"label", c.label}, {"traversals", trav}});
    }
    out["cycles"] = cycles;
    out["intersection"] = to_json(set.intersection);
    return out;
}

ComplexMatrix complex_matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw Error("distribution.ParseError", "matrix must be a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = -1;
    ComplexMatrix m;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array()) throw Error("distribution.ParseError", "matrix row is not an array");
        if (cols < 0) {
            cols = static_cast<Eigen::Index>(row.size());
            m.resize(rows, cols);
        } else if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw Error("distribution.ParseError", "ragged matrix rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& z = row[static_cast<std::size_t>(c)];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
                throw Error("distribution.ParseError", "matrix entries must be [re, im] pairs");
            m(i, c) = Complex(z[0].get<double>(), z[1].get<double>());
        }
    }
    if (cols == 0) throw Error("distribution.ParseError", "empty matrix rows");
    return m;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cli.IOError", "cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace hyperperiods::io
