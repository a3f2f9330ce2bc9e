#include "cogl/ops.hpp"

#include "cogl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cogl::ad {

namespace {

Tape& tape_of(Var a) {
    if (!a.valid()) {
        throw std::logic_error("op on an unbound Var");
    }
    return *a.tape();
}

Tape& tape_of(Var a, Var b) {
    if (a.tape() != b.tape()) {
        throw std::logic_error("op mixes variables from different tapes");
    }
    return tape_of(a);
}

void require_same_shape(const char* op, const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) {
        throw dimension_error(std::string(op) + ": incompatible shapes " + a.shape_str() + " and " +
                              b.shape_str());
    }
}

/// Element-wise op whose derivative depends only on the input value.
template <class F, class DF>
Var unary(Var a, F f, DF df) {
    Tape& t = tape_of(a);
    const Matrix& x = a.value();
    Matrix y(x.rows(), x.cols());
    for (std::size_t k = 0; k < x.size(); ++k) {
        y.data()[k] = f(x.data()[k]);
    }
    return t.record(std::move(y), {a.id()}, [a, df](const Matrix& g, GradSink& s) {
        if (!s.wants(0)) {
            return;
        }
        const Matrix& x = a.value();
        Matrix& ga = s.slot(0);
        for (std::size_t k = 0; k < x.size(); ++k) {
            ga.data()[k] += g.data()[k] * df(x.data()[k]);
        }
    });
}

double stable_log_sigmoid(double x) {
    // ln(1 / (1 + e^-x)) = -softplus(-x)
    return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double stable_sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

} // namespace

Var matmul(Var a, Var b) {
    Tape& t = tape_of(a, b);
    return t.record(cogl::matmul(a.value(), b.value()), {a.id(), b.id()}, [a, b](const Matrix& g, GradSink& s) {
        if (s.wants(0)) {
            axpy(1.0, matmul_nt(g, b.value()), s.slot(0));
        }
        if (s.wants(1)) {
            axpy(1.0, matmul_tn(a.value(), g), s.slot(1));
        }
    });
}

Var add(Var a, Var b) {
    Tape& t = tape_of(a, b);
    require_same_shape("add", a.value(), b.value());
    Matrix y = a.value();
    axpy(1.0, b.value(), y);
    return t.record(std::move(y), {a.id(), b.id()}, [](const Matrix& g, GradSink& s) {
        if (s.wants(0)) {
            axpy(1.0, g, s.slot(0));
        }
        if (s.wants(1)) {
            axpy(1.0, g, s.slot(1));
        }
    });
}

Var sub(Var a, Var b) {
    Tape& t = tape_of(a, b);
    require_same_shape("sub", a.value(), b.value());
    Matrix y = a.value();
    axpy(-1.0, b.value(), y);
    return t.record(std::move(y), {a.id(), b.id()}, [](const Matrix& g, GradSink& s) {
        if (s.wants(0)) {
            axpy(1.0, g, s.slot(0));
        }
        if (s.wants(1)) {
            axpy(-1.0, g, s.slot(1));
        }
    });
}

Var hadamard(Var a, Var b) {
    Tape& t = tape_of(a, b);
    require_same_shape("hadamard", a.value(), b.value());
    Matrix y = a.value();
    for (std::size_t k = 0; k < y.size(); ++k) {
        y.data()[k] *= b.value().data()[k];
    }
    return t.record(std::move(y), {a.id(), b.id()}, [a, b](const Matrix& g, GradSink& s) {
        const auto n = g.size();
        if (s.wants(0)) {
            auto& ga = s.slot(0).data();
            const auto& bv = b.value().data();
            for (std::size_t k = 0; k < n; ++k) {
                ga[k] += g.data()[k] * bv[k];
            }
        }
        if (s.wants(1)) {
            auto& gb = s.slot(1).data();
            const auto& av = a.value().data();
            for (std::size_t k = 0; k < n; ++k) {
                gb[k] += g.data()[k] * av[k];
            }
        }
    });
}

Var scale(Var a, double factor) { return affine(a, factor, 0.0); }

Var affine(Var a, double factor, double shift) {
    return unary(a, [factor, shift](double x) { return factor * x + shift; }, [factor](double) { return factor; });
}

Var transpose(Var a) {
    Tape& t = tape_of(a);
    return t.record(cogl::transpose(a.value()), {a.id()}, [](const Matrix& g, GradSink& s) {
        if (s.wants(0)) {
            axpy(1.0, cogl::transpose(g), s.slot(0));
        }
    });
}

Var relu(Var a) {
    Tape& t = tape_of(a);
    const Matrix& x = a.value();
    Matrix y(x.rows(), x.cols());
    for (std::size_t k = 0; k < x.size(); ++k) {
        y.data()[k] = std::max(0.0, x.data()[k]);
    }
    const bool corrupt = t.fault() == Fault::relu_backward;
    return t.record(std::move(y), {a.id()}, [a, corrupt](const Matrix& g, GradSink& s) {
        if (!s.wants(0)) {
            return;
        }
        const auto& xv = a.value().data();
        auto& ga = s.slot(0).data();
        for (std::size_t k = 0; k < xv.size(); ++k) {
            if (corrupt || xv[k] > 0.0) {
                ga[k] += g.data()[k];
            }
        }
    });
}

Var abs_diff(Var a, Var b) {
    Tape& t = tape_of(a, b);
    require_same_shape("abs_diff", a.value(), b.value());
    const auto& av = a.value().data();
    const auto& bv = b.value().data();
    Matrix y(a.rows(), a.cols());
    for (std::size_t k = 0; k < av.size(); ++k) {
        y.data()[k] = std::abs(av[k] - bv[k]);
    }
    return t.record(std::move(y), {a.id(), b.id()}, [a, b](const Matrix& g, GradSink& s) {
        const auto& av = a.value().data();
        const auto& bv = b.value().data();
        auto sign = [&](std::size_t k) {
            const double d = av[k] - bv[k];
            return d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
        };
        if (s.wants(0)) {
            auto& ga = s.slot(0).data();
            for (std::size_t k = 0; k < av.size(); ++k) {
                ga[k] += g.data()[k] * sign(k);
            }
        }
        if (s.wants(1)) {
            auto& gb = s.slot(1).data();
            for (std::size_t k = 0; k < av.size(); ++k) {
                gb[k] -= g.data()[k] * sign(k);
            }
        }
    });
}

Var log(Var a) {
    return unary(
        a, [](double x) { return std::log(std::max(x, kLogFloor)); },
        [](double x) { return x > kLogFloor ? 1.0 / x : 0.0; });
}

Var sigmoid(Var a) {
    return unary(a, stable_sigmoid, [](double x) {
        const double p = stable_sigmoid(x);
        return p * (1.0 - p);
    });
}

Var log_sigmoid(Var a) {
    // d/dx ln sigmoid(x) = 1 - sigmoid(x) = sigmoid(-x)
    return unary(a, stable_log_sigmoid, [](double x) { return stable_sigmoid(-x); });
}

Var row_softmax(Var a) {
    Tape& t = tape_of(a);
    Matrix y = cogl::row_softmax(a.value());
    const std::size_t out_id = t.size();
    return t.record(std::move(y), {a.id()}, [&t, out_id](const Matrix& g, GradSink& s) {
        if (!s.wants(0)) {
            return;
        }
        const Matrix& y = t.value(out_id);
        Matrix& ga = s.slot(0);
        for (std::size_t i = 0; i < y.rows(); ++i) {
            auto yr = y.row(i);
            auto gr = g.row(i);
            double dot = 0.0;
            for (std::size_t j = 0; j < yr.size(); ++j) {
                dot += gr[j] * yr[j];
            }
            auto gar = ga.row(i);
            for (std::size_t j = 0; j < yr.size(); ++j) {
                gar[j] += yr[j] * (gr[j] - dot);
            }
        }
    });
}

Var row_log_softmax(Var a) {
    Tape& t = tape_of(a);
    const Matrix& x = a.value();
    Matrix y(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        auto xr = x.row(i);
        if (xr.empty()) {
            continue;
        }
        const double mx = *std::max_element(xr.begin(), xr.end());
        double sum = 0.0;
        for (double v : xr) {
            sum += std::exp(v - mx);
        }
        const double lse = mx + std::log(sum);
        auto yr = y.row(i);
        for (std::size_t j = 0; j < xr.size(); ++j) {
            yr[j] = xr[j] - lse;
        }
    }
    const std::size_t out_id = t.size();
    return t.record(std::move(y), {a.id()}, [&t, out_id](const Matrix& g, GradSink& s) {
        if (!s.wants(0)) {
            return;
        }
        const Matrix& y = t.value(out_id);
        Matrix& ga = s.slot(0);
        for (std::size_t i = 0; i < y.rows(); ++i) {
            auto gr = g.row(i);
            double gsum = 0.0;
            for (double v : gr) {
                gsum += v;
            }
            auto yr = y.row(i);
            auto gar = ga.row(i);
            for (std::size_t j = 0; j < yr.size(); ++j) {
                gar[j] += gr[j] - std::exp(yr[j]) * gsum;
            }
        }
    });
}

Var dropout(Var a, double rate, std::mt19937_64& rng, bool training) {
    if (!(rate >= 0.0 && rate < 1.0)) {
        throw config_error("dropout: rate must be in [0, 1), got " + std::to_string(rate));
    }
    Tape& t = tape_of(a);
    if (!training || rate == 0.0) {
        return a;
    }
    const double keep_scale = 1.0 / (1.0 - rate);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix mask(a.rows(), a.cols());
    for (double& m : mask.data()) {
        m = unif(rng) >= rate ? keep_scale : 0.0;
    }
    Matrix y = a.value();
    for (std::size_t k = 0; k < y.size(); ++k) {
        y.data()[k] *= mask.data()[k];
    }
    return t.record(std::move(y), {a.id()}, [mask = std::move(mask)](const Matrix& g, GradSink& s) {
        if (!s.wants(0)) {
            return;
        }
        auto& ga = s.slot(0).data();
        for (std::size_t k = 0; k < ga.size(); ++k) {
            ga[k] += g.data()[k] * mask.data()[k];
        }
    });
}

Var frobenius_sq(Var a) {
    Tape& t = tape_of(a);
    return t.record(Matrix::scalar(cogl::frobenius_sq(a.value())), {a.id()}, [a](const Matrix& g, GradSink& s) {
        if (s.wants(0)) {
            axpy(2.0 * g.item(), a.value(), s.slot(0));
        }
    });
}

Var sum(Var a) {
    Tape& t = tape_of(a);
    double total = 0.0;
    for (double v : a.value().data()) {
        total += v;
    }
    return t.record(Matrix::scalar(total), {a.id()}, [](const Matrix& g, GradSink& s) {
        if (!s.wants(0)) {
            return;
        }
        for (double& v : s.slot(0).data()) {
            v += g.item();
        }
    });
}

Var mean(Var a) {
    const std::size_t n = a.value().size();
    if (n == 0) {
        throw dimension_error("mean: empty matrix");
    }
    return scale(sum(a), 1.0 / static_cast<double>(n));
}

Var gather_rows(Var a, std::vector<std::size_t> indices) {
    Tape& t = tape_of(a);
    const Matrix& x = a.value();
    Matrix y(indices.size(), x.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        if (indices[r] >= x.rows()) {
            throw dimension_error("gather_rows: index " + std::to_string(indices[r]) + " out of range for " +
                                  x.shape_str());
        }
        std::copy_n(x.row(indices[r]).begin(), x.cols(), y.row(r).begin());
    }
    return t.record(std::move(y), {a.id()}, [idx = std::move(indices)](const Matrix& g, GradSink& s) {
        if (!s.wants(0)) {
            return;
        }
        Matrix& ga = s.slot(0);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            auto src = g.row(r);
            auto dst = ga.row(idx[r]);
            for (std::size_t c = 0; c < src.size(); ++c) {
                dst[c] += src[c];
            }
        }
    });
}

Var add_row_broadcast(Var a, Var bias) {
    Tape& t = tape_of(a, bias);
    const Matrix& x = a.value();
    const Matrix& b = bias.value();
    if (b.rows() != 1 || b.cols() != x.cols()) {
        throw dimension_error("add_row_broadcast: bias " + b.shape_str() + " does not match " + x.shape_str());
    }
    Matrix y = x;
    for (std::size_t i = 0; i < y.rows(); ++i) {
        auto r = y.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            r[j] += b.data()[j];
        }
    }
    return t.record(std::move(y), {a.id(), bias.id()}, [](const Matrix& g, GradSink& s) {
        if (s.wants(0)) {
            axpy(1.0, g, s.slot(0));
        }
        if (s.wants(1)) {
            Matrix& gb = s.slot(1);
            for (std::size_t i = 0; i < g.rows(); ++i) {
                auto r = g.row(i);
                for (std::size_t j = 0; j < r.size(); ++j) {
                    gb.data()[j] += r[j];
                }
            }
        }
    });
}

Var detach(Var a) { return tape_of(a).constant(a.value()); }

Var pairwise_abs_scores(Var projected, Var weights) {
    Tape& t = tape_of(projected, weights);
    const Matrix& p = projected.value();
    const Matrix& w = weights.value();
    if (w.cols() != 1 || w.rows() != p.cols()) {
        throw dimension_error("pairwise_abs_scores: weights " + w.shape_str() + " incompatible with projection " +
                              p.shape_str());
    }
    const std::size_t n = p.rows();
    const std::size_t d = p.cols();
    const double* wv = w.data().data();

    // The pre-activation is symmetric in (i, j), so only the upper triangle is evaluated.
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* pi = p.row(i).data();
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* pj = p.row(j).data();
            double acc = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                acc += wv[k] * std::abs(pi[k] - pj[k]);
            }
            const double v = acc > 0.0 ? acc : 0.0;
            s(i, j) = v;
            s(j, i) = v;
        }
    }

    const std::size_t out_id = t.size();
    return t.record(
        std::move(s), {projected.id(), weights.id()}, [projected, weights, &t, out_id](const Matrix& g, GradSink& sink) {
            const bool want_p = sink.wants(0);
            const bool want_w = sink.wants(1);
            if (!want_p && !want_w) {
                return;
            }
            const Matrix& p = projected.value();
            const Matrix& w = weights.value();
            const Matrix& s = t.value(out_id);
            const std::size_t n = p.rows();
            const std::size_t d = p.cols();
            const double* wv = w.data().data();

            std::vector<double> gw(d, 0.0);
            Matrix gp(n, want_p ? d : 0);
            for (std::size_t i = 0; i < n; ++i) {
                const double* pi = p.row(i).data();
                for (std::size_t j = i + 1; j < n; ++j) {
                    // relu'(0) = 0, matching the forward's strict inequality
                    if (!(s(i, j) > 0.0)) {
                        continue;
                    }
                    const double gij = g(i, j) + g(j, i);
                    if (gij == 0.0) {
                        continue;
                    }
                    const double* pj = p.row(j).data();
                    if (want_w) {
                        for (std::size_t k = 0; k < d; ++k) {
                            gw[k] += gij * std::abs(pi[k] - pj[k]);
                        }
                    }
                    if (want_p) {
                        double* gpi = gp.row(i).data();
                        double* gpj = gp.row(j).data();
                        for (std::size_t k = 0; k < d; ++k) {
                            const double diff = pi[k] - pj[k];
                            const double sg = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
                            const double v = gij * wv[k] * sg;
                            gpi[k] += v;
                            gpj[k] -= v;
                        }
                    }
                }
            }
            if (want_p) {
                axpy(1.0, gp, sink.slot(0));
            }
            if (want_w) {
                Matrix& gwm = sink.slot(1);
                for (std::size_t k = 0; k < d; ++k) {
                    gwm.data()[k] += gw[k];
                }
            }
        });
}

} // namespace cogl::ad
