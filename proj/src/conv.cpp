#include "cogl/conv.hpp"

#include "cogl/errors.hpp"
#include "cogl/ops.hpp"

namespace cogl {

ad::Var two_layer_conv(ad::Var adj, ad::Var x, ad::Var w1, ad::Var w2, const DropoutConfig& dropout,
                       std::mt19937_64& rng, Mode mode) {
    const std::size_t n = x.rows();
    if (adj.rows() != n || adj.cols() != n) {
        throw dimension_error("convolution: operator " + adj.value().shape_str() + " does not match " +
                              std::to_string(n) + " nodes");
    }
    const bool training = mode == Mode::train;
    const ad::Var xd = ad::dropout(x, dropout.input, rng, training);
    const ad::Var hidden = ad::relu(ad::matmul(adj, ad::matmul(xd, w1)));
    const ad::Var hd = ad::dropout(hidden, dropout.hidden, rng, training);
    return ad::matmul(adj, ad::matmul(hd, w2));
}

} // namespace cogl
