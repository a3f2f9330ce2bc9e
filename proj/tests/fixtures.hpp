#pragma once

#include "cogl/graph.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

namespace fixture {

using cogl::Graph;
using cogl::Mask;
using cogl::Matrix;

/// Two disjoint k-cliques; clique c has class c and features on column c only.
/// Per clique: node 0 trains, node 1 validates, the rest test.
inline Graph two_cliques(std::size_t k = 5) {
    const std::size_t n = 2 * k;
    Graph g;
    g.adjacency = Matrix(n, n);
    g.features = Matrix(n, 4);
    g.labels = Matrix(n, 2);
    g.train_mask.assign(n, 0);
    g.val_mask.assign(n, 0);
    g.test_mask.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = i / k;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && j / k == c) {
                g.adjacency(i, j) = 1.0;
            }
        }
        g.features(i, c) = 1.0;
        g.labels(i, c) = 1.0;
        const std::size_t pos = i % k;
        (pos == 0 ? g.train_mask : pos == 1 ? g.val_mask : g.test_mask)[i] = 1;
    }
    return g;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("cogl_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

} // namespace fixture
