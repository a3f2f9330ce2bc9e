#include "cogl/adversarial.hpp"

#include "cogl/errors.hpp"
#include "cogl/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cogl::adv {

DiscriminatorVars bind(ad::Tape& tape, const DiscriminatorParams& p, bool trainable) {
    auto put = [&](const Matrix& m) { return trainable ? tape.parameter(m) : tape.constant(m); };
    return {put(p.wd1), put(p.bd1), put(p.wd2), put(p.bd2)};
}

ad::Var discriminator_logits(ad::Var rows, const DiscriminatorVars& d) {
    if (rows.cols() != d.wd1.rows()) {
        throw dimension_error("discriminator: rows " + rows.value().shape_str() + " incompatible with input layer " +
                              d.wd1.value().shape_str());
    }
    const ad::Var hidden = ad::relu(ad::add_row_broadcast(ad::matmul(rows, d.wd1), d.bd1));
    return ad::add_row_broadcast(ad::matmul(hidden, d.wd2), d.bd2);
}

Matrix discriminate(const Matrix& rows, const DiscriminatorParams& p) {
    ad::Tape t;
    Matrix prob = ad::sigmoid(discriminator_logits(t.constant(rows), bind(t, p, false))).value();
    for (double& v : prob.data()) {
        v = std::clamp(v, kProbFloor, 1.0 - kProbFloor);
    }
    return prob;
}

std::vector<std::size_t> sample_rows(std::size_t population, std::size_t n, std::mt19937_64& rng) {
    if (n == 0 || n > population) {
        throw config_error("sample_rows: cannot draw " + std::to_string(n) + " distinct rows from " +
                           std::to_string(population));
    }
    // Partial Fisher-Yates: the first n slots end up as a uniform sample.
    std::vector<std::size_t> idx(population);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, population - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(n);
    return idx;
}

ad::Var discriminator_loss(ad::Var real_rows, ad::Var fake_rows, const DiscriminatorVars& d) {
    // log(1 - sigmoid(z)) = log sigmoid(-z)
    const ad::Var real_term = ad::mean(ad::log_sigmoid(discriminator_logits(real_rows, d)));
    const ad::Var fake_term = ad::mean(ad::log_sigmoid(ad::scale(discriminator_logits(fake_rows, d), -1.0)));
    return ad::scale(ad::add(real_term, fake_term), -1.0);
}

ad::Var generator_loss(ad::Var fake_rows, const DiscriminatorVars& d, GeneratorLoss form) {
    const ad::Var logits = discriminator_logits(fake_rows, d);
    if (form == GeneratorLoss::saturating) {
        return ad::mean(ad::log_sigmoid(ad::scale(logits, -1.0)));
    }
    return ad::scale(ad::mean(ad::log_sigmoid(logits)), -1.0);
}

GanLosses gan_losses(const Matrix& real, const Matrix& fake, const DiscriminatorParams& p, std::size_t n,
                     std::mt19937_64& rng, GeneratorLoss form) {
    const auto real_idx = sample_rows(real.rows(), n, rng);
    const auto fake_idx = sample_rows(fake.rows(), n, rng);
    ad::Tape t;
    const DiscriminatorVars d = bind(t, p, false);
    const ad::Var r = ad::gather_rows(t.constant(real), real_idx);
    const ad::Var f = ad::gather_rows(t.constant(fake), fake_idx);
    return {discriminator_loss(r, f, d).value().item(), generator_loss(f, d, form).value().item()};
}

} // namespace cogl::adv
