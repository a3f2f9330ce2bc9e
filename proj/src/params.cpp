#include "cogl/params.hpp"

#include "cogl/errors.hpp"

#include <cmath>

namespace cogl {

Matrix glorot_uniform(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    const double r = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> unif(-r, r);
    Matrix m(rows, cols);
    for (double& v : m.data()) {
        v = unif(rng);
    }
    return m;
}

ModelParams ModelParams::glorot(const ModelDims& dims, std::mt19937_64& rng) {
    if (dims.features == 0 || dims.classes == 0 || dims.projection == 0 || dims.hidden == 0 || dims.disc_hidden == 0) {
        throw config_error("model dimensions must all be positive");
    }
    ModelParams p;
    p.content.wp = glorot_uniform(dims.features, dims.projection, rng);
    p.content.wc = glorot_uniform(dims.projection, 1, rng);
    p.conv.w1 = glorot_uniform(dims.features, dims.hidden, rng);
    p.conv.w2 = glorot_uniform(dims.hidden, dims.classes, rng);
    p.disc.wd1 = glorot_uniform(dims.classes, dims.disc_hidden, rng);
    p.disc.bd1 = Matrix(1, dims.disc_hidden);
    p.disc.wd2 = glorot_uniform(dims.disc_hidden, 1, rng);
    p.disc.bd2 = Matrix(1, 1);
    return p;
}

ModelParams ModelParams::zeros(const ModelDims& dims) {
    ModelParams p;
    p.content.wp = Matrix(dims.features, dims.projection);
    p.content.wc = Matrix(dims.projection, 1);
    p.conv.w1 = Matrix(dims.features, dims.hidden);
    p.conv.w2 = Matrix(dims.hidden, dims.classes);
    p.disc.wd1 = Matrix(dims.classes, dims.disc_hidden);
    p.disc.bd1 = Matrix(1, dims.disc_hidden);
    p.disc.wd2 = Matrix(dims.disc_hidden, 1);
    p.disc.bd2 = Matrix(1, 1);
    return p;
}

std::array<Matrix*, ModelParams::kCount> ModelParams::tensors() {
    return {&content.wp, &content.wc, &conv.w1, &conv.w2, &disc.wd1, &disc.bd1, &disc.wd2, &disc.bd2};
}

std::array<const Matrix*, ModelParams::kCount> ModelParams::tensors() const {
    return {&content.wp, &content.wc, &conv.w1, &conv.w2, &disc.wd1, &disc.bd1, &disc.wd2, &disc.bd2};
}

} // namespace cogl
