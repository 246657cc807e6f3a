#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace kerrlab::cli {

using json = nlohmann::json;

inline constexpr const char* kToolName = "kerr-lab";
inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputeError = 1;
inline constexpr int kExitConfigInvalid = 2;

struct Diagnostic {
    std::string path;  ///< dotted key path, e.g. "parameters.kerr.T"
    std::string message;
};

/// Parses JSON text; throws Error(parse_error) carrying line and column.
json parse_config_text(const std::string& text);

/// Every schema violation in `config`; empty means run() would accept it.
std::vector<Diagnostic> validate(const json& config);

/// Reads and validates a config file. Parse failures come back as one diagnostic.
std::vector<Diagnostic> validate_file(const std::filesystem::path& path);

/// Copy of a valid config with every default written out.
json resolve_defaults(const json& config);

/// FNV-1a 64 over the compact dump of the resolved config, as "fnv1a64:<hex>".
std::string config_hash(const json& resolved);

struct RunOptions {
    std::optional<std::filesystem::path> output_dir;
    std::optional<std::uint64_t> seed;
};

/// Runs one scenario and writes its artifacts plus manifest.json.
/// Returns kExitOk, kExitConfigInvalid or kExitComputeError.
int run(const json& config, const RunOptions& options, std::ostream& err);
int run_file(const std::filesystem::path& path, const RunOptions& options, std::ostream& err);

}  // namespace kerrlab::cli
