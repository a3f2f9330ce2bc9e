#pragma once

#include "cogl/conv.hpp"
#include "cogl/matrix.hpp"
#include "cogl/params.hpp"
#include "cogl/tape.hpp"

#include <random>

/// Learned content network: a row-stochastic affinity matrix built from node
/// features, a two-layer convolution over it, and the Gram-matrix
/// reconstruction loss that ties the resulting embeddings back to the features.
namespace cogl::content {

/// Row-stochastic |V| x |V| affinity. Generally asymmetric.
struct ContentNetwork {
    Matrix a_bar;
};

/// A(i,j) = softmax_j(ReLU(wc^T |x_i wp - x_j wp|)), self-pairs included.
///
/// Throws config_error unless wp is m x d with d < m and wc is d x 1, and
/// numerical_error if the projection x * wp is not finite.
ad::Var build_content_network(ad::Var x, ad::Var wp, ad::Var wc);
ContentNetwork build_content_network(const Matrix& x, const ContentParams& p);

/// Content-side embedding a_bar * ReLU(a_bar * x * w1) * w2 (|V| x c).
ad::Var content_forward(ad::Var a_bar, ad::Var x, ad::Var w1, ad::Var w2, const DropoutConfig& dropout,
                        std::mt19937_64& rng, Mode mode);
Matrix content_forward(const ContentNetwork& net, const Matrix& x, const SharedConvParams& p);

/// softmax(x) * softmax(x)^T with row-wise softmax. Constant during training.
Matrix feature_gram(const Matrix& x);

/// ||G - softmax(xb) softmax(xb)^T||_F^2 where G is feature_gram(x).
ad::Var reconstruction_loss(ad::Var gram, ad::Var x_bar2);
double reconstruction_loss(const Matrix& x, const Matrix& x_bar2);

} // namespace cogl::content
