#pragma once

#include "cogl/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace cogl {

using Mask = std::vector<std::uint8_t>;

/// Attributed graph with labels and a train/val/test split.
///
/// adjacency is symmetric with a zero diagonal; labels is one-hot for labeled
/// nodes and all-zero otherwise.
struct Graph {
    Matrix adjacency;
    Matrix features;
    Matrix labels;
    Mask train_mask;
    Mask val_mask;
    Mask test_mask;

    std::size_t n_nodes() const noexcept { return adjacency.rows(); }
    std::size_t n_features() const noexcept { return features.cols(); }
    std::size_t n_classes() const noexcept { return labels.cols(); }

    friend bool operator==(const Graph&, const Graph&) = default;
};

/// D^{-1/2} (I + A) D^{-1/2}, D the degree matrix of I + A.
struct NormalizedAdjacency {
    Matrix a_tilde;
};

struct DatasetPaths {
    std::filesystem::path edges;
    std::filesystem::path features;
    std::filesystem::path labels;
    std::filesystem::path splits;

    /// edges.tsv, features.csv, labels.csv, splits.json inside `dir`.
    static DatasetPaths in_directory(const std::filesystem::path& dir);

    friend bool operator==(const DatasetPaths&, const DatasetPaths&) = default;
};

std::size_t count(const Mask& m);

} // namespace cogl
