#include "cogl/content_net.hpp"

#include "cogl/errors.hpp"
#include "cogl/ops.hpp"

namespace cogl::content {

ad::Var build_content_network(ad::Var x, ad::Var wp, ad::Var wc) {
    const Matrix& p = wp.value();
    if (p.rows() != x.cols()) {
        throw dimension_error("build_content_network: projection " + p.shape_str() + " does not match features " +
                              x.value().shape_str());
    }
    if (p.cols() >= p.rows()) {
        throw config_error("build_content_network: projection width d = " + std::to_string(p.cols()) +
                           " must be smaller than the feature count m = " + std::to_string(p.rows()));
    }
    if (wc.cols() != 1 || wc.rows() != p.cols()) {
        throw config_error("build_content_network: scoring vector must be " + shape_str(p.cols(), 1) + ", got " +
                           wc.value().shape_str());
    }
    const ad::Var projected = ad::matmul(x, wp);
    if (!projected.value().all_finite()) {
        throw numerical_error("build_content_network: non-finite projected features");
    }
    return ad::row_softmax(ad::pairwise_abs_scores(projected, wc));
}

ContentNetwork build_content_network(const Matrix& x, const ContentParams& p) {
    ad::Tape t;
    const ad::Var a = build_content_network(t.constant(x), t.constant(p.wp), t.constant(p.wc));
    return {a.value()};
}

ad::Var content_forward(ad::Var a_bar, ad::Var x, ad::Var w1, ad::Var w2, const DropoutConfig& dropout,
                        std::mt19937_64& rng, Mode mode) {
    return two_layer_conv(a_bar, x, w1, w2, dropout, rng, mode);
}

Matrix content_forward(const ContentNetwork& net, const Matrix& x, const SharedConvParams& p) {
    ad::Tape t;
    std::mt19937_64 unused(0);
    return content_forward(t.constant(net.a_bar), t.constant(x), t.constant(p.w1), t.constant(p.w2), {}, unused,
                           Mode::eval)
        .value();
}

Matrix feature_gram(const Matrix& x) {
    const Matrix s = row_softmax(x);
    return matmul_nt(s, s);
}

ad::Var reconstruction_loss(ad::Var gram, ad::Var x_bar2) {
    if (gram.rows() != x_bar2.rows() || gram.cols() != x_bar2.rows()) {
        throw dimension_error("reconstruction_loss: Gram " + gram.value().shape_str() + " does not match embedding " +
                              x_bar2.value().shape_str());
    }
    const ad::Var s = ad::row_softmax(x_bar2);
    const ad::Var recon = ad::matmul(s, ad::transpose(s));
    return ad::frobenius_sq(ad::sub(gram, recon));
}

double reconstruction_loss(const Matrix& x, const Matrix& x_bar2) {
    if (x.rows() != x_bar2.rows()) {
        throw dimension_error("reconstruction_loss: " + x.shape_str() + " and " + x_bar2.shape_str() +
                              " differ in node count");
    }
    ad::Tape t;
    return reconstruction_loss(t.constant(feature_gram(x)), t.constant(x_bar2)).value().item();
}

} // namespace cogl::content
