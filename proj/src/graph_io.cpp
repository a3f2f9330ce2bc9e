#include "cogl/graph_io.hpp"

#include "cogl/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

namespace cogl {

namespace fs = std::filesystem;

DatasetPaths DatasetPaths::in_directory(const fs::path& dir) {
    return {dir / "edges.tsv", dir / "features.csv", dir / "labels.csv", dir / "splits.json"};
}

std::size_t count(const Mask& m) { return static_cast<std::size_t>(std::count(m.begin(), m.end(), 1)); }

namespace {

[[noreturn]] void fail(const fs::path& file, std::size_t line, const std::string& what) {
    throw load_error(file.string() + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const fs::path& p) {
    std::ifstream in(p);
    if (!in) {
        throw load_error(p.string() + ": cannot open file");
    }
    return in;
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
    }
    std::ofstream out(p);
    if (!out) {
        throw load_error(p.string() + ": cannot open for writing");
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Content before any `#`, trimmed.
std::string_view strip_comment(std::string_view s) {
    const auto h = s.find('#');
    return trim(h == std::string_view::npos ? s : s.substr(0, h));
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    if (s.empty()) {
        return false;
    }
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

Matrix read_features(const fs::path& path) {
    auto in = open_in(path);
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = strip_comment(line);
        if (body.empty()) {
            continue;
        }
        const auto fields = split(body, ',');
        if (rows == 0) {
            cols = fields.size();
        } else if (fields.size() != cols) {
            fail(path, lineno,
                 "expected " + std::to_string(cols) + " feature columns, found " + std::to_string(fields.size()));
        }
        for (auto f : fields) {
            double v = 0.0;
            if (!parse_number(f, v) || !std::isfinite(v)) {
                fail(path, lineno, "invalid feature value '" + std::string(f) + "'");
            }
            data.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) {
        throw load_error(path.string() + ": no feature rows");
    }
    return Matrix(rows, cols, std::move(data));
}

Matrix read_edges(const fs::path& path, std::size_t n) {
    auto in = open_in(path);
    Matrix adj(n, n);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = strip_comment(line);
        if (body.empty()) {
            continue;
        }
        const auto fields = split(body, '\t');
        if (fields.size() != 2 && fields.size() != 3) {
            fail(path, lineno, "expected 'src<TAB>dst[<TAB>weight]'");
        }
        std::size_t src = 0;
        std::size_t dst = 0;
        if (!parse_number(fields[0], src) || !parse_number(fields[1], dst)) {
            fail(path, lineno, "invalid node id");
        }
        if (src >= n || dst >= n) {
            fail(path, lineno,
                 "node id " + std::to_string(std::max(src, dst)) + " out of range (|V| = " + std::to_string(n) + ")");
        }
        double w = 1.0;
        if (fields.size() == 3 && (!parse_number(fields[2], w) || !std::isfinite(w) || w <= 0.0)) {
            fail(path, lineno, "edge weight must be a positive real");
        }
        if (src == dst) {
            continue;
        }
        adj(src, dst) = w;
        adj(dst, src) = w;
    }
    return adj;
}

Matrix read_labels(const fs::path& path, std::size_t n) {
    auto in = open_in(path);
    std::vector<long> cls(n, -1);
    long max_class = -1;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = strip_comment(line);
        if (body.empty()) {
            continue;
        }
        const auto fields = split(body, ',');
        std::size_t node = 0;
        long c = 0;
        if (fields.size() != 2 || !parse_number(fields[0], node) || !parse_number(fields[1], c) || c < 0) {
            fail(path, lineno, "expected 'node_id,class_index'");
        }
        if (node >= n) {
            fail(path, lineno, "node id " + std::to_string(node) + " out of range (|V| = " + std::to_string(n) + ")");
        }
        if (cls[node] >= 0 && cls[node] != c) {
            fail(path, lineno, "node " + std::to_string(node) + " has more than one class (label row not one-hot)");
        }
        cls[node] = c;
        max_class = std::max(max_class, c);
    }
    if (max_class < 0) {
        throw load_error(path.string() + ": no labels");
    }
    Matrix y(n, static_cast<std::size_t>(max_class + 1));
    for (std::size_t i = 0; i < n; ++i) {
        if (cls[i] >= 0) {
            y(i, static_cast<std::size_t>(cls[i])) = 1.0;
        }
    }
    return y;
}

void read_splits(const fs::path& path, Graph& g) {
    auto in = open_in(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw load_error(path.string() + ": " + e.what());
    }
    const std::size_t n = g.n_nodes();
    g.train_mask.assign(n, 0);
    g.val_mask.assign(n, 0);
    g.test_mask.assign(n, 0);
    const std::pair<const char*, Mask*> parts[] = {{"train", &g.train_mask}, {"val", &g.val_mask}, {"test", &g.test_mask}};
    for (auto [key, mask] : parts) {
        if (!j.contains(key) || !j[key].is_array()) {
            throw load_error(path.string() + ": missing integer array '" + key + "'");
        }
        for (const auto& v : j[key]) {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
                throw load_error(path.string() + ": '" + key + "' holds a non-integer or negative id");
            }
            const auto id = v.get<std::size_t>();
            if (id >= n) {
                throw load_error(path.string() + ": '" + key + "' id " + std::to_string(id) + " out of range");
            }
            if (g.train_mask[id] || g.val_mask[id] || g.test_mask[id]) {
                throw load_error(path.string() + ": node " + std::to_string(id) + " appears in more than one split");
            }
            (*mask)[id] = 1;
        }
    }
}

void write_number(std::ostream& out, double v) {
    std::array<char, 32> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.write(buf.data(), p - buf.data());
}

} // namespace

void validate(const Graph& g) {
    const std::size_t n = g.n_nodes();
    if (g.adjacency.cols() != n || g.features.rows() != n || g.labels.rows() != n || g.train_mask.size() != n ||
        g.val_mask.size() != n || g.test_mask.size() != n) {
        throw load_error("graph: component sizes disagree with |V| = " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (g.adjacency(i, i) != 0.0) {
            throw load_error("graph: nonzero diagonal at node " + std::to_string(i));
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(g.adjacency(i, j) - g.adjacency(j, i)) > 1e-12 || g.adjacency(i, j) < 0.0) {
                throw load_error("graph: adjacency not symmetric/non-negative at (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
            }
        }
        double row_sum = 0.0;
        for (double v : g.labels.row(i)) {
            if (v != 0.0 && v != 1.0) {
                throw load_error("graph: label row " + std::to_string(i) + " is not one-hot");
            }
            row_sum += v;
        }
        const bool in_split = g.train_mask[i] || g.val_mask[i] || g.test_mask[i];
        if (row_sum > 1.0 || (in_split && row_sum != 1.0)) {
            throw load_error("graph: label row " + std::to_string(i) + " is not one-hot");
        }
        if (int(g.train_mask[i] != 0) + int(g.val_mask[i] != 0) + int(g.test_mask[i] != 0) > 1) {
            throw load_error("graph: node " + std::to_string(i) + " appears in more than one split");
        }
    }
}

Graph load_graph(const DatasetPaths& paths) {
    Graph g;
    g.features = read_features(paths.features);
    const std::size_t n = g.features.rows();
    g.adjacency = read_edges(paths.edges, n);
    g.labels = read_labels(paths.labels, n);
    read_splits(paths.splits, g);
    for (std::size_t i = 0; i < n; ++i) {
        const bool in_split = g.train_mask[i] || g.val_mask[i] || g.test_mask[i];
        double s = 0.0;
        for (double v : g.labels.row(i)) {
            s += v;
        }
        if (in_split && s != 1.0) {
            throw load_error(paths.splits.string() + ": node " + std::to_string(i) + " is in a split but has no label");
        }
    }
    validate(g);
    return g;
}

void save_graph(const Graph& g, const DatasetPaths& paths) {
    const std::size_t n = g.n_nodes();
    {
        auto out = open_out(paths.edges);
        out << "# src\tdst[\tweight]\n";
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double w = g.adjacency(i, j);
                if (w == 0.0) {
                    continue;
                }
                out << i << '\t' << j;
                if (w != 1.0) {
                    out << '\t';
                    write_number(out, w);
                }
                out << '\n';
            }
        }
    }
    {
        auto out = open_out(paths.features);
        for (std::size_t i = 0; i < n; ++i) {
            auto r = g.features.row(i);
            for (std::size_t k = 0; k < r.size(); ++k) {
                if (k) {
                    out << ',';
                }
                write_number(out, r[k]);
            }
            out << '\n';
        }
    }
    {
        auto out = open_out(paths.labels);
        for (std::size_t i = 0; i < n; ++i) {
            auto r = g.labels.row(i);
            const auto it = std::find(r.begin(), r.end(), 1.0);
            if (it != r.end()) {
                out << i << ',' << (it - r.begin()) << '\n';
            }
        }
    }
    {
        nlohmann::json j;
        auto ids = [&](const Mask& m) {
            std::vector<std::size_t> v;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i]) {
                    v.push_back(i);
                }
            }
            return v;
        };
        j["train"] = ids(g.train_mask);
        j["val"] = ids(g.val_mask);
        j["test"] = ids(g.test_mask);
        auto out = open_out(paths.splits);
        out << j.dump() << '\n';
    }
}

NormalizedAdjacency normalize_adjacency(const Graph& g) {
    const std::size_t n = g.n_nodes();
    std::vector<double> inv_sqrt_deg(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = 1.0;
        for (double v : g.adjacency.row(i)) {
            d += v;
        }
        inv_sqrt_deg[i] = 1.0 / std::sqrt(d);
    }
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double w = (i == j ? 1.0 : 0.0) + g.adjacency(i, j);
            if (w != 0.0) {
                a(i, j) = inv_sqrt_deg[i] * w * inv_sqrt_deg[j];
            }
        }
    }
    return {std::move(a)};
}

Graph subsample_nodes(const Graph& g, std::size_t k, std::uint64_t seed) {
    const std::size_t n = g.n_nodes();
    if (k == 0) {
        throw config_error("subsample_nodes: k must be positive");
    }
    if (k > n) {
        throw config_error("subsample_nodes: k = " + std::to_string(k) + " exceeds |V| = " + std::to_string(n));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(k);
    std::sort(order.begin(), order.end());

    Graph s;
    s.adjacency = Matrix(k, k);
    s.features = Matrix(k, g.n_features());
    s.labels = Matrix(k, g.n_classes());
    s.train_mask.resize(k);
    s.val_mask.resize(k);
    s.test_mask.resize(k);
    for (std::size_t a = 0; a < k; ++a) {
        const std::size_t i = order[a];
        for (std::size_t b = 0; b < k; ++b) {
            s.adjacency(a, b) = g.adjacency(i, order[b]);
        }
        std::copy_n(g.features.row(i).begin(), g.n_features(), s.features.row(a).begin());
        std::copy_n(g.labels.row(i).begin(), g.n_classes(), s.labels.row(a).begin());
        s.train_mask[a] = g.train_mask[i];
        s.val_mask[a] = g.val_mask[i];
        s.test_mask[a] = g.test_mask[i];
    }
    return s;
}

Graph row_normalize_features(Graph g) {
    for (std::size_t i = 0; i < g.features.rows(); ++i) {
        auto r = g.features.row(i);
        double s = 0.0;
        for (double v : r) {
            s += v;
        }
        if (s != 0.0) {
            for (double& v : r) {
                v /= s;
            }
        }
    }
    return g;
}

} // namespace cogl
