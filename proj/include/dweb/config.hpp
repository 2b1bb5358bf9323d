#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dweb/params.hpp"
#include "dweb/schema_generator.hpp"

namespace dweb {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Effective configuration of one run: exactly one of high/low is active.
struct RunConfig {
    std::optional<HighLevelParams> high = HighLevelParams{};
    std::optional<LowLevelParams> low;
    WorkloadParams workload;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "dweb-out";
    bool emit_insert = true;
    bool emit_workload = true;
    double spread = 0.1;
    GeneratorLimits limits;
    // Post-derivation density override (every fact table), for exact setups.
    std::optional<double> density_override;
};

// Parses `KEY = value` lines ('#' comments, blank lines allowed) onto `config`.
// A file is either high-level (AVG_* keys) or low-level (NB_FT, TOT_NB_DIM, ...);
// mixing the two families or using an unknown key is a ValidationError.
// Workload and artifact keys (SEED, SPREAD, MAX_ROWS, ...) combine with either
// family. Manifest-only keys (TOOL_VERSION, WAREHOUSE_MEGABYTES, CHECKSUM ...)
// are accepted and ignored so a manifest can be replayed as a config.
void load_config_text(std::string_view text, RunConfig& config);
void load_config_file(const std::filesystem::path& path, RunConfig& config);

// The active parameter family of `config`, rendered back as config lines
// (used verbatim inside the manifest).
std::string render_config_lines(const RunConfig& config, const LowLevelParams& resolved);

// List encodings used by low-level keys: "a,b,c" per fact table/dimension and
// "a,b;c,d" for per-dimension/per-fact matrices.
std::string render_int_list(const std::vector<int>& values);
std::string render_real_list(const std::vector<double>& values);
std::string render_int_matrix(const std::vector<std::vector<int>>& rows);

}  // namespace dweb
