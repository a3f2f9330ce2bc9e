#include "cogl/adam.hpp"

#include "cogl/errors.hpp"

#include <cmath>

namespace cogl {

void adam_step(Matrix& param, const Matrix& grad, AdamState& state, double lr, double weight_decay) {
    if (!param.same_shape(grad)) {
        throw dimension_error("adam_step: parameter " + param.shape_str() + " vs gradient " + grad.shape_str());
    }
    if (state.m.empty() && !param.empty()) {
        state.m = Matrix(param.rows(), param.cols());
        state.v = Matrix(param.rows(), param.cols());
    }
    if (!state.m.same_shape(param) || !state.v.same_shape(param)) {
        throw dimension_error("adam_step: state shape does not match parameter " + param.shape_str());
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));
    auto& p = param.data();
    auto& m = state.m.data();
    auto& v = state.v.data();
    const auto& g = grad.data();
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double gk = g[k] + weight_decay * p[k];
        m[k] = kAdamBeta1 * m[k] + (1.0 - kAdamBeta1) * gk;
        v[k] = kAdamBeta2 * v[k] + (1.0 - kAdamBeta2) * gk * gk;
        const double mhat = m[k] / bc1;
        const double vhat = v[k] / bc2;
        p[k] -= lr * mhat / (std::sqrt(vhat) + kAdamEps);
    }
}

} // namespace cogl
