#pragma once

#include "cogl/graph.hpp"

#include <cstdint>
#include <filesystem>

namespace cogl {

/// Load a graph from the four text files.
///
/// Formats:
///  - edges.tsv: `src<TAB>dst[<TAB>weight]`, 0-based ids, `#` starts a comment.
///    Each undirected edge may be listed once; self-loops are dropped.
///  - features.csv: one comma-separated row per node; the row count fixes |V|.
///  - labels.csv: `node_id,class_index`; nodes without a line are unlabeled.
///  - splits.json: `{"train": [...], "val": [...], "test": [...]}`.
///
/// Throws load_error with `file:line` context on malformed input, out-of-range
/// ids, conflicting labels, overlapping masks, or unlabeled split members.
Graph load_graph(const DatasetPaths& paths);

/// Write the graph back in the same formats; load_graph(save_graph(g)) == g.
void save_graph(const Graph& g, const DatasetPaths& paths);

NormalizedAdjacency normalize_adjacency(const Graph& g);

/// Induced subgraph on k nodes drawn uniformly without replacement.
/// Kept nodes retain their relative order; masks are restricted.
/// Throws config_error for k == 0 or k > |V|.
Graph subsample_nodes(const Graph& g, std::size_t k, std::uint64_t seed);

/// Checks the Graph invariants; throws load_error describing the first violation.
void validate(const Graph& g);

/// Divide every feature row by its sum; all-zero rows are left unchanged.
Graph row_normalize_features(Graph g);

} // namespace cogl
