#pragma once

// Scalar-loop reference implementations. Deliberately naive: every quantity is
// computed entry by entry straight from its definition, sharing no code with
// the library.

#include "cogl/graph.hpp"
#include "cogl/matrix.hpp"
#include "cogl/params.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using cogl::Matrix;

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                acc += a(i, k) * b(k, j);
            }
            c(i, j) = acc;
        }
    }
    return c;
}

inline Matrix relu(Matrix a) {
    for (double& v : a.data()) {
        v = std::max(v, 0.0);
    }
    return a;
}

inline Matrix softmax_rows(const Matrix& a) {
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double mx = a(i, 0);
        for (std::size_t j = 1; j < a.cols(); ++j) {
            mx = std::max(mx, a(i, j));
        }
        double z = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            z += std::exp(a(i, j) - mx);
        }
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(i, j) = std::exp(a(i, j) - mx) / z;
        }
    }
    return out;
}

/// A_bar(i, j) = exp(s_ij) / sum_k exp(s_ik), s_ij = max(0, sum_l wc_l |(x_i wp)_l - (x_j wp)_l|).
inline Matrix content_network(const Matrix& x, const Matrix& wp, const Matrix& wc) {
    const std::size_t n = x.rows();
    const std::size_t m = x.cols();
    const std::size_t d = wp.cols();
    auto projected = [&](std::size_t node, std::size_t l) {
        double acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            acc += x(node, k) * wp(k, l);
        }
        return acc;
    };
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t l = 0; l < d; ++l) {
                acc += wc(l, 0) * std::abs(projected(i, l) - projected(j, l));
            }
            s(i, j) = std::max(acc, 0.0);
        }
    }
    return softmax_rows(s);
}

/// D^{-1/2} (I + A) D^{-1/2} with D = diag(rowsum(I + A)), assembled entry by entry.
inline Matrix normalized_adjacency(const Matrix& a) {
    const std::size_t n = a.rows();
    std::vector<double> deg(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        deg[i] = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            deg[i] += a(i, j);
        }
    }
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double self = i == j ? 1.0 : 0.0;
            out(i, j) = (self + a(i, j)) / std::sqrt(deg[i] * deg[j]);
        }
    }
    return out;
}

/// sum_ij (g_ij - r_ij)^2 with g = softmax(X) softmax(X)^T, r likewise for X_bar2.
inline double reconstruction_loss(const Matrix& x, const Matrix& x_bar2) {
    const Matrix sx = softmax_rows(x);
    const Matrix sr = softmax_rows(x_bar2);
    const std::size_t n = x.rows();
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double g = 0.0;
            for (std::size_t k = 0; k < sx.cols(); ++k) {
                g += sx(i, k) * sx(j, k);
            }
            double r = 0.0;
            for (std::size_t k = 0; k < sr.cols(); ++k) {
                r += sr(i, k) * sr(j, k);
            }
            loss += (g - r) * (g - r);
        }
    }
    return loss;
}

/// -sum over labeled i, classes j of Y_ij ln softmax(O)_ij.
inline double cross_entropy(const Matrix& o, const Matrix& y, const cogl::Mask& labeled) {
    double loss = 0.0;
    for (std::size_t i = 0; i < o.rows(); ++i) {
        if (!labeled[i]) {
            continue;
        }
        double z = 0.0;
        for (std::size_t j = 0; j < o.cols(); ++j) {
            z += std::exp(o(i, j));
        }
        for (std::size_t j = 0; j < o.cols(); ++j) {
            loss -= y(i, j) * std::log(std::exp(o(i, j)) / z);
        }
    }
    return loss;
}

/// A ReLU(A X W1) W2, evaluated as two explicit steps.
inline Matrix two_layer(const Matrix& adj, const Matrix& x, const Matrix& w1, const Matrix& w2) {
    const Matrix hidden = oracle::relu(oracle::matmul(oracle::matmul(adj, x), w1));
    return oracle::matmul(oracle::matmul(adj, hidden), w2);
}

/// sigmoid(relu(row Wd1 + bd1) Wd2 + bd2) for one row.
inline double discriminate_row(const Matrix& rows, std::size_t r, const cogl::DiscriminatorParams& p) {
    double logit = p.bd2(0, 0);
    for (std::size_t h = 0; h < p.wd1.cols(); ++h) {
        double pre = p.bd1(0, h);
        for (std::size_t k = 0; k < rows.cols(); ++k) {
            pre += rows(r, k) * p.wd1(k, h);
        }
        logit += std::max(pre, 0.0) * p.wd2(h, 0);
    }
    return 1.0 / (1.0 + std::exp(-logit));
}

/// One Adam step on a single coordinate.
struct ScalarAdam {
    double m = 0.0;
    double v = 0.0;
    int t = 0;

    double step(double p, double g, double lr, double wd) {
        g += wd * p;
        ++t;
        m = 0.9 * m + 0.1 * g;
        v = 0.999 * v + 0.001 * g * g;
        const double mhat = m / (1.0 - std::pow(0.9, t));
        const double vhat = v / (1.0 - std::pow(0.999, t));
        return p - lr * mhat / (std::sqrt(vhat) + 1e-8);
    }
};

inline Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(r, c);
    for (double& v : m.data()) {
        v = u(rng);
    }
    return m;
}

inline Matrix random_adjacency(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution edge(p);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (edge(rng)) {
                a(i, j) = a(j, i) = 1.0;
            }
        }
    }
    return a;
}

} // namespace oracle
