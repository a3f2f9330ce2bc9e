#pragma once

#include "cogl/graph.hpp"
#include "cogl/trainer.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace cogl {

enum class RunMode { cogl, gcn_baseline };

/// Environment variable that overrides [output] dir from the config file.
inline constexpr const char* kOutputDirEnv = "COGL_OUTPUT_DIR";

/// Everything a CLI run needs: dataset location, preprocessing, training
/// hyperparameters, and where to write outputs.
///
/// The config file is INI-style:
///
///     [data]
///     dir = data/cora            ; or edges/features/labels/splits individually
///     normalize_features = true
///     subsample = 0              ; 0 keeps every node
///     [model]
///     d_dim = 70
///     dropout = 0.5              ; sets input_dropout and hidden_dropout
///     [train]
///     mode = cogl                ; or gcn-baseline
///     alpha = 0.4
///     [output]
///     dir = runs/cora
///
/// Relative paths resolve against the config file's directory.
struct RunConfig {
    DatasetPaths data;
    std::size_t subsample = 0;
    std::uint64_t subsample_seed = 0;
    bool normalize_features = true;
    TrainConfig train;
    RunMode mode = RunMode::cogl;
    std::filesystem::path output_dir = "runs/default";

    /// Apply one `section.key = value` setting. Throws config_error for unknown
    /// keys or unparsable values.
    void set(std::string_view key, std::string_view value, const std::filesystem::path& base_dir = {});

    /// Train settings with the mode applied: gcn-baseline forces alpha = beta = 0.
    TrainConfig effective_train() const;

    /// Fully resolved settings, defaults included.
    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parse an INI config file. Throws config_error with the file name on failure.
RunConfig load_run_config(const std::filesystem::path& path);

/// Load, subsample and preprocess the dataset named by `cfg`.
Graph load_dataset(const RunConfig& cfg);

std::string to_string(RunMode m);
RunMode parse_mode(std::string_view s);

} // namespace cogl
