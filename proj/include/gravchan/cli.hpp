#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gravchan/channel.hpp"
#include "gravchan/interferometer.hpp"
#include "gravchan/noise.hpp"

namespace gravchan::cli {

inline constexpr int kConfigSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitInternal = 4;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Validated contents of a run configuration document.
struct RunConfig {
    std::uint64_t seed = 42;
    InterferometerParams interferometer;
    ChannelSpec channel = BellChannel{};
    std::size_t remote_atom = 0;
    /// Empty when the scan falls back to total_phase(interferometer).
    std::vector<double> delta_phi_grid;
    NoiseParams noise;
    double tolerance = 1e-4;
    std::size_t entropy_grid = 1024;
    std::optional<std::string> csv_path;
    std::optional<std::string> json_path;

    /// The document as validated, after command-line overrides.
    nlohmann::json document;
};

/// Rejects unknown keys, wrong types and out-of-range values with ConfigError.
RunConfig parse_config(const nlohmann::json& document);

nlohmann::json load_json(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

/// Formats with 17 significant digits.
std::string format_number(double value);

std::string fringe_csv(const RunConfig& config, nlohmann::json& summary);
std::string noise_csv(const RunConfig& config, nlohmann::json& summary);
nlohmann::json optimize_summary(const RunConfig& config);
nlohmann::json prepare_summary(const RunConfig& config);

/// Entry point shared by the gravchan executable and the tests. `args`
/// excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gravchan::cli
