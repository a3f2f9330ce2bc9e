#include "cogl/adam.hpp"
#include "cogl/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cogl;

TEST_SUITE("adam") {

TEST_CASE("zero gradient and zero decay leave parameters unchanged") {
    Matrix p{{1.5, -2.0}};
    const Matrix before = p;
    AdamState s;
    for (int i = 0; i < 5; ++i) {
        adam_step(p, Matrix(1, 2), s, 0.1, 0.0);
    }
    CHECK(p == before);
}

TEST_CASE("first step moves each coordinate by about lr * sign(g)") {
    Matrix p{{0.0, 0.0, 0.0}};
    AdamState s;
    adam_step(p, Matrix{{3.0, -0.001, 250.0}}, s, 0.01, 0.0);
    CHECK(p(0, 0) == doctest::Approx(-0.01).epsilon(1e-6));
    CHECK(p(0, 1) == doctest::Approx(0.01).epsilon(1e-4));
    CHECK(p(0, 2) == doctest::Approx(-0.01).epsilon(1e-6));
}

TEST_CASE("matches a scalar reference over 10 steps, with weight decay") {
    std::mt19937_64 rng(1);
    Matrix p = oracle::random_matrix(3, 4, rng);
    std::vector<double> ref(p.data());
    std::vector<oracle::ScalarAdam> ref_state(p.size());
    AdamState s;
    for (int step = 0; step < 10; ++step) {
        const Matrix g = oracle::random_matrix(3, 4, rng);
        adam_step(p, g, s, 0.002, 5e-4);
        for (std::size_t k = 0; k < ref.size(); ++k) {
            ref[k] = ref_state[k].step(ref[k], g.data()[k], 0.002, 5e-4);
        }
    }
    CHECK(s.step == 10);
    for (std::size_t k = 0; k < ref.size(); ++k) {
        CHECK(std::abs(p.data()[k] - ref[k]) < 1e-10);
    }
}

TEST_CASE("shape mismatch is a dimension error") {
    Matrix p(2, 2);
    AdamState s;
    CHECK_THROWS_AS(adam_step(p, Matrix(2, 3), s, 0.1, 0.0), dimension_error);
}

} // TEST_SUITE
