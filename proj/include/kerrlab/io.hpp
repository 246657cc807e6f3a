#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "kerrlab/state.hpp"

namespace kerrlab::io {

using json = nlohmann::json;

json layout_to_json(const ModeLayout& layout);
ModeLayout layout_from_json(const json& j);

/// {"layout": [...], "amplitudes": [[re, im], ...]}
json state_to_json(const StateVector& state);
StateVector state_from_json(const json& j);

/// {"layout": [...], "matrix": [[[re, im], ...], ...]} (row-major)
json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const json& j);

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

/// Decimal with 17 significant digits, '.' separator.
std::string format_double(double value);

/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace kerrlab::io
