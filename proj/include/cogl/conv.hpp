#pragma once

#include "cogl/tape.hpp"

#include <random>

namespace cogl {

enum class Mode { train, eval };

/// Dropout rates of the two-layer convolution. Only active in Mode::train.
struct DropoutConfig {
    double input = 0.5;  ///< on the feature matrix before the first layer
    double hidden = 0.5; ///< on the ReLU activation between layers

    friend bool operator==(const DropoutConfig&, const DropoutConfig&) = default;
};

/// adj * dropout(ReLU(adj * dropout(x) * w1)) * w2.
///
/// The products are associated right-to-left so the n x n operator always
/// multiplies a thin matrix. Shape errors surface as dimension_error.
ad::Var two_layer_conv(ad::Var adj, ad::Var x, ad::Var w1, ad::Var w2, const DropoutConfig& dropout,
                       std::mt19937_64& rng, Mode mode);

} // namespace cogl
