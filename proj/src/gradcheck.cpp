#include "cogl/gradcheck.hpp"

#include "cogl/adversarial.hpp"
#include "cogl/content_net.hpp"
#include "cogl/graph_io.hpp"
#include "cogl/ops.hpp"
#include "cogl/topo_gcn.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cogl::ad {

namespace {

double evaluate_loss(const LossBuilder& build, std::span<const Matrix> params) {
    Tape t;
    std::vector<Var> vars;
    vars.reserve(params.size());
    for (const Matrix& p : params) {
        vars.push_back(t.parameter(p));
    }
    return build(t, vars).value().item();
}

} // namespace

GradcheckResult gradcheck(const LossBuilder& build, std::span<const Matrix> params, const GradcheckOptions& opts) {
    std::vector<Matrix> analytic;
    {
        Tape t;
        t.inject_fault(opts.fault);
        std::vector<Var> vars;
        for (const Matrix& p : params) {
            vars.push_back(t.parameter(p));
        }
        const Var loss = build(t, vars);
        const Gradients g = t.backward(loss, vars);
        for (Var v : vars) {
            analytic.push_back(g[v]);
        }
    }

    GradcheckResult res;
    std::vector<Matrix> probe(params.begin(), params.end());
    for (std::size_t p = 0; p < probe.size(); ++p) {
        for (std::size_t k = 0; k < probe[p].size(); ++k) {
            const double orig = probe[p].data()[k];
            probe[p].data()[k] = orig + opts.step;
            const double up = evaluate_loss(build, probe);
            probe[p].data()[k] = orig - opts.step;
            const double down = evaluate_loss(build, probe);
            probe[p].data()[k] = orig;

            const double numeric = (up - down) / (2.0 * opts.step);
            const double a = analytic[p].data()[k];
            const double denom = std::max({std::abs(a), std::abs(numeric), opts.floor});
            res.max_rel_error = std::max(res.max_rel_error, std::abs(a - numeric) / denom);
            ++res.entries;
        }
    }
    return res;
}

namespace {

struct Instance {
    Graph graph;
    Matrix a_tilde;
    Matrix gram;
    ContentParams content;
    SharedConvParams conv;
    DiscriminatorParams disc;
    std::vector<std::size_t> real_idx;
    std::vector<std::size_t> fake_idx;
};

Matrix normal_matrix(std::size_t r, std::size_t c, double sd, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, sd);
    Matrix m(r, c);
    for (double& v : m.data()) {
        v = nd(rng);
    }
    return m;
}

Instance random_instance(std::uint64_t seed) {
    constexpr std::size_t n = 8, m = 5, d = 3, h = 4, c = 3, hd = 6;
    std::mt19937_64 rng(seed);
    Instance in;
    Graph& g = in.graph;
    g.adjacency = Matrix(n, n);
    std::bernoulli_distribution edge(0.4);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (edge(rng)) {
                g.adjacency(i, j) = g.adjacency(j, i) = 1.0;
            }
        }
    }
    g.features = normal_matrix(n, m, 1.0, rng);
    g.labels = Matrix(n, c);
    std::uniform_int_distribution<std::size_t> cls(0, c - 1);
    g.train_mask.assign(n, 0);
    g.val_mask.assign(n, 0);
    g.test_mask.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        g.labels(i, cls(rng)) = 1.0;
        (i % 2 == 0 ? g.train_mask : g.test_mask)[i] = 1;
    }
    in.a_tilde = normalize_adjacency(g).a_tilde;
    in.gram = content::feature_gram(g.features);
    in.content = {normal_matrix(m, d, 0.8, rng), normal_matrix(d, 1, 0.8, rng)};
    in.conv = {normal_matrix(m, h, 0.8, rng), normal_matrix(h, c, 0.8, rng)};
    in.disc = {normal_matrix(c, hd, 0.8, rng), normal_matrix(1, hd, 0.3, rng), normal_matrix(hd, 1, 0.8, rng),
               normal_matrix(1, 1, 0.3, rng)};
    in.real_idx = adv::sample_rows(n, 5, rng);
    in.fake_idx = adv::sample_rows(n, 5, rng);
    return in;
}

} // namespace

std::vector<LossCheck> model_gradient_suite(std::uint64_t seed, const GradcheckOptions& opts) {
    const Instance in = random_instance(seed);
    std::mt19937_64 unused(0);
    const DropoutConfig no_dropout{0.0, 0.0};
    std::vector<LossCheck> out;

    auto content_embedding = [&](Tape& t, Var wp, Var wc, Var w1, Var w2) {
        const Var x = t.constant(in.graph.features);
        const Var a_bar = content::build_content_network(x, wp, wc);
        return content::content_forward(a_bar, x, w1, w2, no_dropout, unused, Mode::train);
    };
    auto topology_embedding = [&](Tape& t, Var w1, Var w2) {
        return topo::topology_forward(t.constant(in.a_tilde), t.constant(in.graph.features), w1, w2, no_dropout,
                                      unused, Mode::train);
    };
    auto record = [&](const char* name, const GradcheckResult& r) { out.push_back({name, r.max_rel_error, r.entries}); };

    {
        const std::vector<Matrix> params = {in.content.wp, in.content.wc, in.conv.w1, in.conv.w2};
        record("L_cont", gradcheck(
                             [&](Tape& t, std::span<const Var> p) {
                                 return content::reconstruction_loss(t.constant(in.gram),
                                                                     content_embedding(t, p[0], p[1], p[2], p[3]));
                             },
                             params, opts));
    }
    {
        const std::vector<Matrix> params = {in.conv.w1, in.conv.w2};
        record("L_gcn", gradcheck(
                            [&](Tape& t, std::span<const Var> p) {
                                return topo::classification_loss(topology_embedding(t, p[0], p[1]), in.graph.labels,
                                                                 in.graph.train_mask);
                            },
                            params, opts));
    }
    {
        // Embedding rows are fixed inputs to the discriminator step.
        Tape t;
        const Matrix real = content_embedding(t, t.constant(in.content.wp), t.constant(in.content.wc),
                                              t.constant(in.conv.w1), t.constant(in.conv.w2))
                                .value();
        const Matrix fake = topology_embedding(t, t.constant(in.conv.w1), t.constant(in.conv.w2)).value();
        const std::vector<Matrix> params = {in.disc.wd1, in.disc.bd1, in.disc.wd2, in.disc.bd2};
        record("d_loss", gradcheck(
                             [&](Tape& t, std::span<const Var> p) {
                                 const adv::DiscriminatorVars d{p[0], p[1], p[2], p[3]};
                                 return adv::discriminator_loss(ad::gather_rows(t.constant(real), in.real_idx),
                                                                ad::gather_rows(t.constant(fake), in.fake_idx), d);
                             },
                             params, opts));
    }
    {
        const std::vector<Matrix> params = {in.conv.w1, in.conv.w2};
        record("g_loss", gradcheck(
                             [&](Tape& t, std::span<const Var> p) {
                                 const adv::DiscriminatorVars d = adv::bind(t, in.disc, false);
                                 const Var o = topology_embedding(t, p[0], p[1]);
                                 return adv::generator_loss(ad::gather_rows(o, in.fake_idx), d,
                                                            adv::GeneratorLoss::non_saturating);
                             },
                             params, opts));
    }
    return out;
}

} // namespace cogl::ad
