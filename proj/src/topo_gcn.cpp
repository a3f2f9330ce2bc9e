#include "cogl/topo_gcn.hpp"

#include "cogl/errors.hpp"
#include "cogl/ops.hpp"

#include <algorithm>

namespace cogl::topo {

ad::Var topology_forward(ad::Var a_tilde, ad::Var x, ad::Var w1, ad::Var w2, const DropoutConfig& dropout,
                         std::mt19937_64& rng, Mode mode) {
    return two_layer_conv(a_tilde, x, w1, w2, dropout, rng, mode);
}

Matrix topology_forward(const NormalizedAdjacency& a_tilde, const Matrix& x, const SharedConvParams& p) {
    ad::Tape t;
    std::mt19937_64 unused(0);
    return topology_forward(t.constant(a_tilde.a_tilde), t.constant(x), t.constant(p.w1), t.constant(p.w2), {},
                            unused, Mode::eval)
        .value();
}

ad::Var classification_loss(ad::Var o, const Matrix& y, const Mask& labeled) {
    const Matrix& ov = o.value();
    if (!ov.same_shape(y)) {
        throw dimension_error("classification_loss: logits " + ov.shape_str() + " vs labels " + y.shape_str());
    }
    if (labeled.size() != y.rows()) {
        throw dimension_error("classification_loss: mask length " + std::to_string(labeled.size()) + " vs " +
                              std::to_string(y.rows()) + " nodes");
    }
    if (count(labeled) == 0) {
        throw config_error("classification_loss: labeled mask is empty");
    }
    Matrix target(y.rows(), y.cols());
    for (std::size_t i = 0; i < y.rows(); ++i) {
        if (labeled[i]) {
            std::copy_n(y.row(i).begin(), y.cols(), target.row(i).begin());
        }
    }
    ad::Tape& t = *o.tape();
    const ad::Var logp = ad::row_log_softmax(o);
    return ad::scale(ad::sum(ad::hadamard(t.constant(std::move(target)), logp)), -1.0);
}

double classification_loss(const Matrix& o, const Matrix& y, const Mask& labeled) {
    ad::Tape t;
    return classification_loss(t.constant(o), y, labeled).value().item();
}

std::vector<std::size_t> predict(const Matrix& o) {
    std::vector<std::size_t> pred(o.rows(), 0);
    for (std::size_t i = 0; i < o.rows(); ++i) {
        auto r = o.row(i);
        // max_element returns the first maximum
        pred[i] = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
    }
    return pred;
}

double accuracy(const std::vector<std::size_t>& pred, const Matrix& y, const Mask& mask) {
    if (pred.size() != y.rows() || mask.size() != y.rows()) {
        throw dimension_error("accuracy: prediction/label/mask lengths disagree");
    }
    std::size_t total = 0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < y.rows(); ++i) {
        if (!mask[i]) {
            continue;
        }
        ++total;
        if (pred[i] < y.cols() && y(i, pred[i]) == 1.0) {
            ++correct;
        }
    }
    if (total == 0) {
        throw config_error("accuracy: mask is empty");
    }
    return static_cast<double>(correct) / static_cast<double>(total);
}

} // namespace cogl::topo
