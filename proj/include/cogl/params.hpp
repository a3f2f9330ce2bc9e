#pragma once

#include "cogl/matrix.hpp"

#include <array>
#include <cstddef>
#include <random>
#include <string_view>

namespace cogl {

/// Projection (m x d) and scoring vector (d x 1) of the learned content network.
struct ContentParams {
    Matrix wp;
    Matrix wc;

    friend bool operator==(const ContentParams&, const ContentParams&) = default;
};

/// Convolution weights shared by the content and topology branches.
struct SharedConvParams {
    Matrix w1; ///< m x h
    Matrix w2; ///< h x c

    friend bool operator==(const SharedConvParams&, const SharedConvParams&) = default;
};

/// One-hidden-layer perceptron over c-dimensional embedding rows; single logit head.
struct DiscriminatorParams {
    Matrix wd1; ///< c x h_d
    Matrix bd1; ///< 1 x h_d
    Matrix wd2; ///< h_d x 1
    Matrix bd2; ///< 1 x 1

    friend bool operator==(const DiscriminatorParams&, const DiscriminatorParams&) = default;
};

struct ModelDims {
    std::size_t features = 0; ///< m
    std::size_t projection = 70; ///< d
    std::size_t hidden = 30; ///< h
    std::size_t classes = 0; ///< c
    std::size_t disc_hidden = 16; ///< h_d
};

/// Every trainable tensor of the model.
struct ModelParams {
    ContentParams content;
    SharedConvParams conv;
    DiscriminatorParams disc;

    static constexpr std::size_t kCount = 8;
    static constexpr std::array<std::string_view, kCount> kNames = {"wp", "wc", "w1", "w2", "wd1", "bd1", "wd2", "bd2"};

    /// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)); zero biases.
    static ModelParams glorot(const ModelDims& dims, std::mt19937_64& rng);
    /// All-zero parameters of the given shapes.
    static ModelParams zeros(const ModelDims& dims);

    /// Tensors in kNames order.
    std::array<Matrix*, kCount> tensors();
    std::array<const Matrix*, kCount> tensors() const;

    static bool is_bias(std::size_t index) { return index == 5 || index == 7; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Uniform(-r, r) matrix with r = sqrt(6 / (rows + cols)).
Matrix glorot_uniform(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

} // namespace cogl
