#pragma once

#include "cogl/adversarial.hpp"
#include "cogl/conv.hpp"
#include "cogl/graph.hpp"
#include "cogl/params.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace cogl {

/// Which tensors receive the L2 term in Adam.
enum class DecayScope {
    all_weights, ///< every weight matrix; biases excluded
    conv_only,   ///< shared convolution weights w1, w2 only
};

/// How the reconstruction loss enters the objective.
enum class ContentLossScale {
    sum,  ///< squared Frobenius norm over all |V|^2 Gram entries
    mean, ///< the same divided by |V|^2
};

struct TrainConfig {
    double alpha = 0.4; ///< weight of the reconstruction loss
    double beta = 0.8;  ///< weight of the adversarial loss
    double lr = 0.002;
    DropoutConfig dropout{};
    double weight_decay = 5e-4;
    DecayScope decay_scope = DecayScope::all_weights;
    std::size_t outer_epochs = 1000; ///< M
    std::size_t inner_steps = 1;     ///< N
    std::size_t sample_n = 64;       ///< rows drawn from each branch per adversarial step
    std::size_t d_dim = 70;          ///< projection width of the content network
    std::size_t h_dim = 30;          ///< hidden width of the shared convolution
    std::size_t disc_hidden = 16;
    std::size_t patience = 200;
    std::uint64_t seed = 0;
    adv::GeneratorLoss generator_loss = adv::GeneratorLoss::non_saturating;
    ContentLossScale content_loss_scale = ContentLossScale::sum;

    /// Throws config_error on out-of-range settings.
    void validate() const;

    /// alpha == beta == 0: the content branch and the discriminator are never evaluated.
    bool content_active() const noexcept { return alpha != 0.0 || beta != 0.0; }

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Per-epoch metrics. Loss terms are means over the epoch's inner steps.
/// d_loss is measured before the discriminator update, g_loss after it.
struct EpochRecord {
    std::size_t epoch = 0; ///< 1-based
    double l_gcn = 0.0;
    double l_cont = 0.0; ///< as it enters the objective (after content_loss_scale)
    double d_loss = 0.0;
    double g_loss = 0.0;
    double loss_d_step = 0.0; ///< l_gcn + alpha l_cont + beta d_loss
    double loss_g_step = 0.0; ///< l_gcn + alpha l_cont + beta g_loss (the combined objective)
    double train_acc = 0.0;
    double val_loss = 0.0;
    double val_acc = 0.0;

    friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainReport {
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0;
    double best_val_acc = 0.0;
    double best_val_loss = 0.0;
    double test_accuracy = 0.0; ///< evaluated once, with the best-validation parameters
    bool early_stopped = false;

    friend bool operator==(const TrainReport&, const TrainReport&) = default;
};

struct TrainResult {
    ModelParams params;
    TrainReport report;
};

struct TrainHooks {
    /// Called after every epoch.
    std::function<void(const EpochRecord&)> on_epoch;
};

/// Runs the alternating discriminator / generator optimization with early
/// stopping on validation accuracy. Throws numerical_error (with epoch and
/// step) when a loss becomes non-finite.
TrainResult train(const Graph& g, const TrainConfig& cfg, const TrainHooks& hooks = {});

/// Parameter initialization used by train(). Each tensor draws from its own
/// stream derived from (seed, tensor index), so shapes of one tensor never
/// shift the values of another.
ModelParams initial_params(const ModelDims& dims, std::uint64_t seed);

/// Seeded stream for a named purpose; used to keep dropout, sampling and
/// initialization independent.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t purpose);

enum StreamPurpose : std::uint64_t {
    kStreamInit = 0,
    kStreamTopologyDropout = 100,
    kStreamContentDropout = 101,
    kStreamSampling = 102,
};

ModelDims dims_for(const Graph& g, const TrainConfig& cfg);

/// Accuracy on `mask` with dropout disabled. Throws config_error for an empty mask.
double evaluate(const Graph& g, const ModelParams& params, const Mask& mask);

/// Topology-branch embeddings O in evaluation mode.
Matrix embed(const Graph& g, const ModelParams& params);

} // namespace cogl
