#pragma once

#include "cogl/matrix.hpp"

#include <cstddef>

namespace cogl {

struct AdamState {
    Matrix m;
    Matrix v;
    std::size_t step = 0;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

/// One bias-corrected Adam update. The L2 term weight_decay * param is added
/// to the gradient before the moment updates. Empty state is zero-initialized.
void adam_step(Matrix& param, const Matrix& grad, AdamState& state, double lr, double weight_decay);

} // namespace cogl
