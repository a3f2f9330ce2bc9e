#include "cogl/adam.hpp"
#include "cogl/errors.hpp"
#include "cogl/graph_io.hpp"
#include "cogl/ops.hpp"
#include "cogl/synthetic.hpp"
#include "cogl/topo_gcn.hpp"
#include "cogl/trainer.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace cogl;

namespace {

Graph small_synthetic(std::uint64_t seed = 1) {
    SyntheticSpec spec;
    spec.nodes = 120;
    spec.classes = 3;
    spec.features = 40;
    spec.words_per_node = 6;
    spec.train_per_class = 5;
    spec.val = 30;
    spec.test = 60;
    spec.seed = seed;
    return row_normalize_features(make_synthetic(spec));
}

TrainConfig small_config() {
    TrainConfig c;
    c.d_dim = 8;
    c.h_dim = 8;
    c.disc_hidden = 6;
    c.sample_n = 16;
    c.outer_epochs = 30;
    c.patience = 100;
    c.lr = 0.01;
    return c;
}

bool all_finite(const EpochRecord& r) {
    for (double v : {r.l_gcn, r.l_cont, r.d_loss, r.g_loss, r.loss_d_step, r.loss_g_step, r.train_acc, r.val_loss,
                     r.val_acc}) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

} // namespace

TEST_SUITE("trainer") {

TEST_CASE("config validation") {
    const Graph g = small_synthetic();
    auto expect_config_error = [&](auto mutate) {
        TrainConfig c = small_config();
        mutate(c);
        CHECK_THROWS_AS(train(g, c), config_error);
    };
    expect_config_error([](TrainConfig& c) { c.alpha = -0.1; });
    expect_config_error([](TrainConfig& c) { c.beta = -1.0; });
    expect_config_error([](TrainConfig& c) { c.lr = 0.0; });
    expect_config_error([](TrainConfig& c) { c.dropout.input = 1.0; });
    expect_config_error([](TrainConfig& c) { c.outer_epochs = 0; });
    expect_config_error([](TrainConfig& c) { c.sample_n = 1000; });
    expect_config_error([](TrainConfig& c) { c.d_dim = 40; });

    Graph no_val = g;
    std::fill(no_val.val_mask.begin(), no_val.val_mask.end(), 0);
    CHECK_THROWS_AS(train(no_val, small_config()), config_error);
}

TEST_CASE("fixed seed reproduces the report and parameters exactly") {
    const Graph g = small_synthetic();
    const TrainConfig c = small_config();
    const TrainResult a = train(g, c);
    const TrainResult b = train(g, c);
    CHECK(a.report == b.report);
    CHECK(a.params == b.params);

    TrainConfig other = c;
    other.seed = 1;
    CHECK_FALSE(train(g, other).report == a.report);
}

TEST_CASE("all recorded values are finite; the content branch is live") {
    const Graph g = small_synthetic();
    const TrainResult r = train(g, small_config());
    REQUIRE(r.report.epochs.size() == 30);
    for (const auto& e : r.report.epochs) {
        CHECK(all_finite(e));
        CHECK(e.l_cont > 0.0);
        CHECK(e.d_loss > 0.0);
    }
    CHECK(std::isfinite(r.report.test_accuracy));
}

TEST_CASE("alpha = beta = 0 follows a standalone GCN trajectory bit for bit") {
    const Graph g = small_synthetic(3);
    TrainConfig c = small_config();
    c.alpha = 0.0;
    c.beta = 0.0;
    c.outer_epochs = 25;
    const TrainResult r = train(g, c);

    // Reference: plain two-layer GCN on the topology, Adam on W1 and W2 only.
    ModelParams p = initial_params(dims_for(g, c), c.seed);
    const ModelParams init = p;
    AdamState s1, s2;
    auto rng = make_stream(c.seed, kStreamTopologyDropout);
    const Matrix a = normalize_adjacency(g).a_tilde;
    std::vector<SharedConvParams> snapshots;
    for (std::size_t epoch = 1; epoch <= c.outer_epochs; ++epoch) {
        ad::Tape t;
        const ad::Var w1 = t.parameter(p.conv.w1);
        const ad::Var w2 = t.parameter(p.conv.w2);
        const ad::Var o = topo::topology_forward(t.constant(a), t.constant(g.features), w1, w2, c.dropout, rng,
                                                 Mode::train);
        const ad::Var loss = topo::classification_loss(o, g.labels, g.train_mask);
        CHECK(loss.value().item() == r.report.epochs[epoch - 1].l_gcn);
        const auto grads = t.backward(loss, {w1, w2});
        adam_step(p.conv.w1, grads[w1], s1, c.lr, c.weight_decay);
        adam_step(p.conv.w2, grads[w2], s2, c.lr, c.weight_decay);
        snapshots.push_back(p.conv);
    }
    REQUIRE(r.report.best_epoch >= 1);
    CHECK(r.params.conv.w1 == snapshots[r.report.best_epoch - 1].w1);
    CHECK(r.params.conv.w2 == snapshots[r.report.best_epoch - 1].w2);
    CHECK(r.params.content.wp == init.content.wp);
    CHECK(r.params.disc.wd1 == init.disc.wd1);
    for (const auto& e : r.report.epochs) {
        CHECK(e.l_cont == 0.0);
        CHECK(e.d_loss == 0.0);
        CHECK(e.loss_g_step == e.l_gcn);
    }
}

TEST_CASE("two separable cliques are classified perfectly") {
    const Graph g = fixture::two_cliques(5);
    TrainConfig c;
    c.d_dim = 2;
    c.h_dim = 8;
    c.sample_n = 4;
    c.outer_epochs = 150;
    c.lr = 0.01;
    const TrainResult r = train(g, c);
    CHECK(r.report.test_accuracy == 1.0);
    CHECK(evaluate(g, r.params, g.test_mask) == 1.0);
    Mask everyone(g.n_nodes(), 1);
    CHECK(evaluate(g, r.params, everyone) == 1.0);
}

TEST_CASE("zero parameters predict class 0 everywhere") {
    const Graph g = small_synthetic();
    const ModelParams zero = ModelParams::zeros(dims_for(g, small_config()));
    double class0 = 0.0;
    for (std::size_t i = 0; i < g.n_nodes(); ++i) {
        if (g.test_mask[i]) class0 += g.labels(i, 0);
    }
    CHECK(evaluate(g, zero, g.test_mask) == doctest::Approx(class0 / static_cast<double>(count(g.test_mask))));
    CHECK_THROWS_AS(evaluate(g, zero, Mask(g.n_nodes(), 0)), config_error);
}

TEST_CASE("early stopping keeps the best validation epoch") {
    const Graph g = small_synthetic(5);
    TrainConfig c = small_config();
    c.outer_epochs = 200;
    c.patience = 10;
    const TrainResult r = train(g, c);
    const auto& e = r.report.epochs;
    double best = 0.0;
    for (const auto& rec : e) best = std::max(best, rec.val_acc);
    CHECK(r.report.best_val_acc == best);
    CHECK(e[r.report.best_epoch - 1].val_acc == best);
    if (r.report.early_stopped) {
        CHECK(e.size() < 200);
    }
    // Restored parameters reproduce the best epoch's validation accuracy.
    CHECK(evaluate(g, r.params, g.val_mask) == best);
}

TEST_CASE("smoothed combined loss decreases early in training") {
    const Graph g = small_synthetic(7);
    TrainConfig c = small_config();
    c.outer_epochs = 50;
    c.lr = 0.005;
    const TrainResult r = train(g, c);
    auto window = [&](std::size_t from) {
        double s = 0.0;
        for (std::size_t k = from; k < from + 10; ++k) s += r.report.epochs[k].loss_g_step;
        return s / 10.0;
    };
    CHECK(window(40) < window(0));
}

TEST_CASE("content loss scaling and decay scope are honoured") {
    const Graph g = small_synthetic();
    TrainConfig c = small_config();
    c.outer_epochs = 3;
    const TrainResult summed = train(g, c);
    c.content_loss_scale = ContentLossScale::mean;
    const TrainResult mean = train(g, c);
    const double n2 = static_cast<double>(g.n_nodes() * g.n_nodes());
    CHECK(mean.report.epochs[0].l_cont == doctest::Approx(summed.report.epochs[0].l_cont / n2).epsilon(1e-12));

    c.decay_scope = DecayScope::conv_only;
    CHECK_FALSE(train(g, c).params == mean.params);
}

TEST_CASE("non-finite values abort with a numerical error naming the epoch") {
    Graph g = small_synthetic();
    for (double& v : g.features.data()) v = 1e308;
    try {
        train(g, small_config());
        FAIL("expected numerical_error");
    } catch (const numerical_error& e) {
        CHECK(std::string(e.what()).find("epoch") != std::string::npos);
    }
}

TEST_CASE("initial parameters: Glorot range, zero biases, per-tensor streams") {
    const ModelDims dims{20, 5, 7, 3, 4};
    const ModelParams p = initial_params(dims, 9);
    const double limit = std::sqrt(6.0 / (20 + 7));
    for (double v : p.conv.w1.data()) CHECK(std::abs(v) <= limit);
    CHECK(p.disc.bd1 == Matrix(1, 4));
    CHECK(p.disc.bd2 == Matrix(1, 1));
    ModelDims wider = dims;
    wider.projection = 6;
    CHECK(initial_params(wider, 9).conv.w1 == p.conv.w1);
    CHECK(initial_params(dims, 9) == p);
}

} // TEST_SUITE
