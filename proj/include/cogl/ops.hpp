#pragma once

#include "cogl/matrix.hpp"
#include "cogl/tape.hpp"

#include <cstddef>
#include <random>
#include <vector>

/// Differentiable operations over ad::Var. Each op evaluates eagerly and
/// records its backward rule on the tape that owns its first argument.
namespace cogl::ad {

/// Floor applied to the argument of log().
inline constexpr double kLogFloor = 1e-12;

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var hadamard(Var a, Var b);
Var scale(Var a, double s);
/// s * a + shift, element-wise.
Var affine(Var a, double s, double shift);
Var transpose(Var a);

Var relu(Var a);
/// |a - b| element-wise.
Var abs_diff(Var a, Var b);
/// ln(max(a, kLogFloor)) element-wise; zero gradient where the floor is active.
Var log(Var a);
Var sigmoid(Var a);
/// ln(sigmoid(a)) evaluated without overflow.
Var log_sigmoid(Var a);

Var row_softmax(Var a);
Var row_log_softmax(Var a);

/// Inverted dropout: kept entries are divided by (1 - rate). Identity when
/// `training` is false or rate is 0. rate must be in [0, 1).
Var dropout(Var a, double rate, std::mt19937_64& rng, bool training);

/// 1x1 results.
Var frobenius_sq(Var a);
Var sum(Var a);
Var mean(Var a);

/// Rows of `a` at `indices`, in order.
Var gather_rows(Var a, std::vector<std::size_t> indices);
/// a + 1 * bias for a 1xk row vector `bias`.
Var add_row_broadcast(Var a, Var bias);
/// Copy of `a` with no gradient path back to it.
Var detach(Var a);

/// S(i,j) = ReLU(sum_k w(k) * |P(i,k) - P(j,k)|) for P (n x d) and w (d x 1).
///
/// Fused so the n x n x d difference tensor is never materialized.
/// O(n^2 d) time, O(n^2) memory.
Var pairwise_abs_scores(Var projected, Var weights);

} // namespace cogl::ad
