#pragma once

#include "cogl/graph.hpp"

#include <cstddef>
#include <cstdint>

namespace cogl {

/// Attributed stochastic block model with bag-of-words features.
///
/// Each class owns a block of "topic" feature columns. A node switches on
/// `words_per_node` columns, each drawn from its class block with probability
/// `topic_prob` and uniformly otherwise. Each node starts `edges_per_node`
/// edges whose endpoint shares its class with probability `homophily`.
struct SyntheticSpec {
    std::size_t nodes = 400;
    std::size_t classes = 4;
    std::size_t features = 120;
    std::size_t words_per_node = 12;
    double topic_prob = 0.35;
    std::size_t edges_per_node = 2;
    double homophily = 0.8;
    std::size_t train_per_class = 10;
    std::size_t val = 100;
    std::size_t test = 200;
    std::uint64_t seed = 1;
};

/// Deterministic for a given spec. Throws config_error if the split sizes exceed the node count.
Graph make_synthetic(const SyntheticSpec& spec);

} // namespace cogl
