#include "cogl/synthetic.hpp"

#include "cogl/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace cogl {

Graph make_synthetic(const SyntheticSpec& s) {
    if (s.classes == 0 || s.features < s.classes || s.nodes < s.classes) {
        throw config_error("make_synthetic: need at least one node and one feature column per class");
    }
    if (s.train_per_class * s.classes + s.val + s.test > s.nodes) {
        throw config_error("make_synthetic: split sizes exceed the node count");
    }
    std::mt19937_64 rng(s.seed);
    const std::size_t n = s.nodes;

    std::vector<std::size_t> cls(n);
    for (std::size_t i = 0; i < n; ++i) {
        cls[i] = i % s.classes;
    }
    std::shuffle(cls.begin(), cls.end(), rng);
    std::vector<std::vector<std::size_t>> members(s.classes);
    for (std::size_t i = 0; i < n; ++i) {
        members[cls[i]].push_back(i);
    }

    Graph g;
    g.labels = Matrix(n, s.classes);
    g.features = Matrix(n, s.features);
    const std::size_t block = s.features / s.classes;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> any_col(0, s.features - 1);
    std::uniform_int_distribution<std::size_t> in_block(0, block - 1);
    for (std::size_t i = 0; i < n; ++i) {
        g.labels(i, cls[i]) = 1.0;
        for (std::size_t w = 0; w < s.words_per_node; ++w) {
            const std::size_t col = unif(rng) < s.topic_prob ? cls[i] * block + in_block(rng) : any_col(rng);
            g.features(i, col) = 1.0;
        }
    }

    g.adjacency = Matrix(n, n);
    std::uniform_int_distribution<std::size_t> any_node(0, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t e = 0; e < s.edges_per_node; ++e) {
            std::size_t j = i;
            if (unif(rng) < s.homophily) {
                const auto& same = members[cls[i]];
                std::uniform_int_distribution<std::size_t> pick(0, same.size() - 1);
                j = same[pick(rng)];
            } else {
                j = any_node(rng);
            }
            if (j != i) {
                g.adjacency(i, j) = g.adjacency(j, i) = 1.0;
            }
        }
    }

    g.train_mask.assign(n, 0);
    g.val_mask.assign(n, 0);
    g.test_mask.assign(n, 0);
    std::vector<std::size_t> rest;
    for (std::size_t c = 0; c < s.classes; ++c) {
        auto m = members[c];
        std::shuffle(m.begin(), m.end(), rng);
        const std::size_t take = std::min(s.train_per_class, m.size());
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (k < take) {
                g.train_mask[m[k]] = 1;
            } else {
                rest.push_back(m[k]);
            }
        }
    }
    std::shuffle(rest.begin(), rest.end(), rng);
    for (std::size_t k = 0; k < rest.size() && k < s.val + s.test; ++k) {
        (k < s.val ? g.val_mask : g.test_mask)[rest[k]] = 1;
    }
    return g;
}

} // namespace cogl
