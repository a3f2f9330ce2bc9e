#include "cogl/errors.hpp"
#include "cogl/gradcheck.hpp"
#include "cogl/matrix.hpp"
#include "cogl/ops.hpp"
#include "cogl/tape.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

using namespace cogl;
using ad::Tape;
using ad::Var;

TEST_SUITE("numerics") {

TEST_CASE("matmul: identity and hand-checked products") {
    CHECK(matmul(Matrix{{1, 0}, {0, 1}}, Matrix{{2, 3}, {4, 5}}) == Matrix{{2, 3}, {4, 5}});
    CHECK(matmul(Matrix{{1, 2}}, Matrix{{3}, {4}}) == Matrix{{11}});
}

TEST_CASE("matmul: matches triple-loop oracle, including transposed variants") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = oracle::random_matrix(5, 4, rng);
        const Matrix b = oracle::random_matrix(4, 3, rng);
        CHECK(max_abs_diff(matmul(a, b), oracle::matmul(a, b)) < 1e-12);
        CHECK(max_abs_diff(matmul_tn(transpose(a), b), oracle::matmul(a, b)) < 1e-12);
        CHECK(max_abs_diff(matmul_nt(a, transpose(b)), oracle::matmul(a, b)) < 1e-12);
    }
}

TEST_CASE("matmul: shape mismatch names both shapes") {
    Tape t;
    try {
        ad::matmul(t.constant(Matrix(2, 3)), t.constant(Matrix(2, 3)));
        FAIL("expected dimension_error");
    } catch (const dimension_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("2x3") != std::string::npos);
    }
    CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), dimension_error);
}

TEST_CASE("row_softmax: hand values and normalization") {
    CHECK(max_abs_diff(row_softmax(Matrix{{0, 0}}), Matrix{{0.5, 0.5}}) < 1e-15);
    CHECK(max_abs_diff(row_softmax(Matrix{{std::log(1.0), std::log(3.0)}}), Matrix{{0.25, 0.75}}) < 1e-15);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix s = row_softmax(oracle::random_matrix(6, 5, rng, -800.0, 800.0));
        REQUIRE(s.all_finite());
        for (std::size_t i = 0; i < s.rows(); ++i) {
            double total = 0.0;
            for (double v : s.row(i)) total += v;
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("elementwise ops: definitions") {
    Tape t;
    CHECK(ad::relu(t.constant(Matrix{{-1, 2}})).value() == Matrix{{0, 2}});
    CHECK(ad::frobenius_sq(t.constant(Matrix{{1, 2}, {2, 0}})).value().item() == 9.0);
    CHECK(frobenius_sq(Matrix{{1, 2}, {2, 0}}) == 9.0);
    CHECK(ad::abs_diff(t.constant(Matrix{{1, -2}}), t.constant(Matrix{{3, 1}})).value() == Matrix{{2, 3}});
    CHECK(ad::add(t.constant(Matrix{{1, 2}}), t.constant(Matrix{{3, 4}})).value() == Matrix{{4, 6}});
    CHECK(ad::scale(t.constant(Matrix{{1, -2}}), 3.0).value() == Matrix{{3, -6}});
    CHECK(ad::transpose(t.constant(Matrix{{1, 2, 3}})).value() == Matrix{{1}, {2}, {3}});
    CHECK(ad::sigmoid(t.constant(Matrix{{0}})).value().item() == 0.5);
    // log floors its input at 1e-12
    CHECK(ad::log(t.constant(Matrix{{0.0}})).value().item() == doctest::Approx(std::log(1e-12)));
    CHECK(std::isfinite(ad::log_sigmoid(t.constant(Matrix{{-1000.0}})).value().item()));
}

TEST_CASE("dropout: identity at rate 0 and in evaluation mode, inverted scaling otherwise") {
    Tape t;
    std::mt19937_64 rng(1);
    const Matrix x = oracle::random_matrix(20, 30, rng);
    const Var xv = t.constant(x);
    CHECK(ad::dropout(xv, 0.0, rng, true).value() == x);
    CHECK(ad::dropout(xv, 0.7, rng, false).value() == x);

    const Matrix y = ad::dropout(t.constant(Matrix(200, 200, 1.0)), 0.25, rng, true).value();
    std::size_t kept = 0;
    for (double v : y.data()) {
        CHECK((v == 0.0 || v == doctest::Approx(1.0 / 0.75)));
        kept += v != 0.0;
    }
    CHECK(static_cast<double>(kept) / y.size() == doctest::Approx(0.75).epsilon(0.02));

    CHECK_THROWS_AS(ad::dropout(xv, 1.0, rng, true), config_error);
    CHECK_THROWS_AS(ad::dropout(xv, -0.1, rng, true), config_error);
}

TEST_CASE("backward: linear and quadratic losses") {
    Tape t;
    const Matrix w0{{1, -2}, {3, 0.5}};
    const Var w = t.parameter(w0);
    const Matrix g_sum = t.backward(ad::sum(w), {w})[w];
    CHECK(g_sum == Matrix(2, 2, 1.0));

    const Var f = ad::frobenius_sq(w);
    Matrix twice = w0;
    for (double& v : twice.data()) v *= 2.0;
    CHECK(max_abs_diff(t.backward(f, {w})[w], twice) < 1e-15);
}

TEST_CASE("backward: non-scalar loss and non-parameter targets are contract violations") {
    Tape t;
    const Var w = t.parameter(Matrix(2, 2, 1.0));
    const Var c = t.constant(Matrix(1, 1, 1.0));
    CHECK_THROWS_AS(t.backward(w, {w}), std::logic_error);
    CHECK_THROWS_AS(t.backward(ad::sum(w), {c}), std::logic_error);
}

TEST_CASE("backward: gradients accumulate over multiple consumers") {
    Tape t;
    const Var w = t.parameter(Matrix{{2.0}});
    // loss = w*w + 3w  -> d/dw = 2w + 3
    const Var loss = ad::add(ad::hadamard(w, w), ad::scale(w, 3.0));
    CHECK(t.backward(loss, {w})[w].item() == 7.0);
}

TEST_CASE("backward: unreachable parameters get zero gradients") {
    Tape t;
    const Var a = t.parameter(Matrix(2, 3, 1.0));
    const Var b = t.parameter(Matrix(1, 4, 1.0));
    const auto g = t.backward(ad::sum(a), {a, b});
    CHECK(g[b] == Matrix(1, 4, 0.0));
}

TEST_CASE("backward: deterministic on the same tape") {
    std::mt19937_64 rng(11);
    Tape t;
    const Var x = t.constant(oracle::random_matrix(6, 5, rng));
    const Var w1 = t.parameter(oracle::random_matrix(5, 4, rng));
    const Var w2 = t.parameter(oracle::random_matrix(4, 3, rng));
    const Var loss = ad::sum(ad::log(ad::row_softmax(ad::matmul(ad::relu(ad::matmul(x, w1)), w2))));
    const auto g1 = t.backward(loss, {w1, w2});
    const auto g2 = t.backward(loss, {w1, w2});
    CHECK(g1[w1] == g2[w1]);
    CHECK(g1[w2] == g2[w2]);
}

TEST_CASE("gradcheck: composite matmul-relu-softmax-log graph") {
    std::mt19937_64 rng(5);
    const Matrix x = oracle::random_matrix(6, 5, rng);
    const std::vector<Matrix> params = {oracle::random_matrix(5, 4, rng), oracle::random_matrix(4, 3, rng)};
    const auto r = ad::gradcheck(
        [&](Tape& t, std::span<const Var> p) {
            return ad::sum(ad::log(ad::row_softmax(ad::matmul(ad::relu(ad::matmul(t.constant(x), p[0])), p[1]))));
        },
        params);
    CHECK(r.entries == 32);
    CHECK(r.max_rel_error < 1e-4);
}

TEST_CASE("gradcheck: every op's backward rule") {
    std::mt19937_64 rng(9);
    const Matrix a = oracle::random_matrix(4, 3, rng);
    const Matrix b = oracle::random_matrix(4, 3, rng, 0.2, 1.5);
    const Matrix bias = oracle::random_matrix(1, 3, rng);
    using Build = std::function<Var(Tape&, Var, Var, Var)>;
    const std::vector<std::pair<const char*, Build>> cases = {
        {"sub/hadamard", [](Tape&, Var x, Var y, Var) { return ad::sum(ad::hadamard(ad::sub(x, y), x)); }},
        {"affine", [](Tape&, Var x, Var, Var) { return ad::frobenius_sq(ad::affine(x, -1.5, 0.3)); }},
        {"transpose", [](Tape&, Var x, Var y, Var) { return ad::sum(ad::matmul(ad::transpose(x), y)); }},
        {"abs_diff", [](Tape&, Var x, Var y, Var) { return ad::frobenius_sq(ad::abs_diff(x, ad::scale(y, 3.0))); }},
        {"log", [](Tape&, Var, Var y, Var) { return ad::sum(ad::log(y)); }},
        {"sigmoid", [](Tape&, Var x, Var, Var) { return ad::frobenius_sq(ad::sigmoid(x)); }},
        {"log_sigmoid", [](Tape&, Var x, Var, Var) { return ad::mean(ad::log_sigmoid(ad::scale(x, 4.0))); }},
        {"row_log_softmax", [](Tape&, Var x, Var y, Var) { return ad::sum(ad::hadamard(y, ad::row_log_softmax(x))); }},
        {"gather_rows", [](Tape&, Var x, Var, Var) { return ad::frobenius_sq(ad::gather_rows(x, {3, 0, 2})); }},
        {"add_row_broadcast", [](Tape&, Var x, Var, Var c) { return ad::frobenius_sq(ad::add_row_broadcast(x, c)); }},
        {"pairwise_abs_scores",
         [](Tape&, Var x, Var, Var c) {
             return ad::frobenius_sq(ad::pairwise_abs_scores(x, ad::transpose(c)));
         }},
    };
    for (const auto& [name, build] : cases) {
        CAPTURE(name);
        const auto r = ad::gradcheck(
            [&](Tape& t, std::span<const Var> p) { return build(t, p[0], p[1], p[2]); }, std::vector{a, b, bias});
        CHECK(r.max_rel_error < 1e-4);
    }
}

TEST_CASE("detach blocks gradient flow") {
    Tape t;
    const Var w = t.parameter(Matrix{{3.0}});
    const Var loss = ad::add(ad::hadamard(w, ad::detach(w)), w);
    // d/dw [w * const(w) + w] = 3 + 1
    CHECK(t.backward(loss, {w})[w].item() == 4.0);
}

TEST_CASE("model gradient suite: every loss within 1e-4, quickly") {
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto checks = ad::model_gradient_suite(seed);
        REQUIRE(checks.size() == 4);
        CHECK(checks[0].name == "L_cont");
        CHECK(checks[1].name == "L_gcn");
        CHECK(checks[2].name == "d_loss");
        CHECK(checks[3].name == "g_loss");
        for (const auto& c : checks) {
            CAPTURE(c.name);
            CHECK(c.entries > 0);
            CHECK(c.max_rel_error < 1e-4);
        }
    }
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(10));
}

TEST_CASE("model gradient suite: a corrupted backward rule is detected") {
    ad::GradcheckOptions opts;
    opts.fault = ad::Fault::relu_backward;
    const auto checks = ad::model_gradient_suite(0, opts);
    bool any_fail = false;
    for (const auto& c : checks) {
        any_fail = any_fail || !(c.max_rel_error < 1e-4);
    }
    CHECK(any_fail);
}

} // TEST_SUITE
