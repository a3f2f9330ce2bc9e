#pragma once

#include "cogl/conv.hpp"
#include "cogl/graph.hpp"
#include "cogl/params.hpp"
#include "cogl/tape.hpp"

#include <cstddef>
#include <random>
#include <vector>

namespace cogl::topo {

/// Topology-side embedding O = a_tilde * ReLU(a_tilde * x * w1) * w2 (|V| x c).
ad::Var topology_forward(ad::Var a_tilde, ad::Var x, ad::Var w1, ad::Var w2, const DropoutConfig& dropout,
                         std::mt19937_64& rng, Mode mode);
Matrix topology_forward(const NormalizedAdjacency& a_tilde, const Matrix& x, const SharedConvParams& p);

/// -sum over labeled i, classes j of Y(i,j) ln softmax(O)(i,j). Summed, not averaged.
/// Unlabeled rows contribute neither value nor gradient.
/// Throws config_error for an empty mask.
ad::Var classification_loss(ad::Var o, const Matrix& y, const Mask& labeled);
double classification_loss(const Matrix& o, const Matrix& y, const Mask& labeled);

/// Row-wise argmax; ties go to the lowest index.
std::vector<std::size_t> predict(const Matrix& o);

/// Fraction of masked nodes whose prediction matches the one-hot label.
/// Throws config_error for an empty mask.
double accuracy(const std::vector<std::size_t>& pred, const Matrix& y, const Mask& mask);

} // namespace cogl::topo
