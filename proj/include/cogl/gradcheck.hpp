#pragma once

#include "cogl/matrix.hpp"
#include "cogl/tape.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace cogl::ad {

/// Builds a scalar loss on `tape` from parameter leaves (one per input matrix, same order).
using LossBuilder = std::function<Var(Tape& tape, std::span<const Var> params)>;

struct GradcheckOptions {
    double step = 1e-5;
    /// Denominator floor of the relative error.
    double floor = 1e-8;
    /// Fault injected into the analytic pass only.
    Fault fault = Fault::none;
};

struct GradcheckResult {
    double max_rel_error = 0.0;
    std::size_t entries = 0;
};

/// Compares reverse-mode gradients with central differences
/// (f(p + h) - f(p - h)) / 2h, entry by entry. Relative error is
/// |analytic - numeric| / max(|analytic|, |numeric|, floor).
GradcheckResult gradcheck(const LossBuilder& build, std::span<const Matrix> params, const GradcheckOptions& opts = {});

struct LossCheck {
    std::string name;
    double max_rel_error = 0.0;
    std::size_t entries = 0;
};

/// Finite-difference checks of every loss term of the model on a random
/// instance with |V| = 8, m = 5, d = 3, h = 4, c = 3. Returns one entry each
/// for L_cont, L_gcn, d_loss and g_loss, in that order.
std::vector<LossCheck> model_gradient_suite(std::uint64_t seed, const GradcheckOptions& opts = {});

} // namespace cogl::ad
