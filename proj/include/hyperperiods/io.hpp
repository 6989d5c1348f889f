#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hyperperiods/homology.hpp"
#include "hyperperiods/periods.hpp"

namespace hyperperiods::io {

// 17 significant digits; integral values keep a trailing ".0".
std::string format_double(double value);

// Parses {"branch_points": [[re, im], ...]}.
std::vector<Complex> parse_branch_points(std::string_view json_text);

nlohmann::json to_json(Complex z);
nlohmann::json to_json(const ComplexMatrix& m);
nlohmann::json to_json(const IntMatrix& m);
nlohmann::json to_json(const CycleSet& set);

ComplexMatrix complex_matrix_from_json(const nlohmann::json& j);

std::string read_file(const std::string& path);

}  // namespace hyperperiods::io
