#pragma once

#include "cogl/params.hpp"
#include "cogl/tape.hpp"

#include <cstddef>
#include <random>
#include <vector>

/// Discriminator over embedding rows and the minimax objective that pushes
/// topology-side embeddings (generated, label 0) toward content-side
/// embeddings (real, label 1).
namespace cogl::adv {

/// Generator objective. non_saturating minimizes -log D(fake); saturating
/// minimizes log(1 - D(fake)) exactly as in the original minimax game.
enum class GeneratorLoss { non_saturating, saturating };

/// Probabilities are kept inside [kProbFloor, 1 - kProbFloor].
inline constexpr double kProbFloor = 1e-12;

struct DiscriminatorVars {
    ad::Var wd1;
    ad::Var bd1;
    ad::Var wd2;
    ad::Var bd2;
};

/// Put the discriminator on `tape`, as parameters if `trainable`, else as constants.
DiscriminatorVars bind(ad::Tape& tape, const DiscriminatorParams& p, bool trainable);

/// ReLU(rows * wd1 + bd1) * wd2 + bd2, one logit per row.
ad::Var discriminator_logits(ad::Var rows, const DiscriminatorVars& d);

/// sigmoid of the logits, clamped to [kProbFloor, 1 - kProbFloor]; n x 1.
Matrix discriminate(const Matrix& rows, const DiscriminatorParams& p);

/// n distinct indices from [0, population), deterministic for a given rng state.
/// Throws config_error if n == 0 or n > population.
std::vector<std::size_t> sample_rows(std::size_t population, std::size_t n, std::mt19937_64& rng);

/// -mean log D(real) - mean log(1 - D(fake)).
ad::Var discriminator_loss(ad::Var real_rows, ad::Var fake_rows, const DiscriminatorVars& d);

ad::Var generator_loss(ad::Var fake_rows, const DiscriminatorVars& d, GeneratorLoss form);

struct GanLosses {
    double d_loss = 0.0;
    double g_loss = 0.0;
};

/// Samples n rows (without replacement) from `real` and then from `fake` and
/// evaluates both losses.
GanLosses gan_losses(const Matrix& real, const Matrix& fake, const DiscriminatorParams& p, std::size_t n,
                     std::mt19937_64& rng, GeneratorLoss form = GeneratorLoss::non_saturating);

} // namespace cogl::adv
