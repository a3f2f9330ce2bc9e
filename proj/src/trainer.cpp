#include "cogl/trainer.hpp"

#include "cogl/adam.hpp"
#include "cogl/content_net.hpp"
#include "cogl/errors.hpp"
#include "cogl/graph_io.hpp"
#include "cogl/ops.hpp"
#include "cogl/topo_gcn.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace cogl {

void TrainConfig::validate() const {
    auto bad = [](const std::string& what) { throw config_error("train config: " + what); };
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) bad("alpha must be >= 0");
    if (!(beta >= 0.0) || !std::isfinite(beta)) bad("beta must be >= 0");
    if (!(lr > 0.0) || !std::isfinite(lr)) bad("lr must be > 0");
    if (!(dropout.input >= 0.0 && dropout.input < 1.0)) bad("input dropout must be in [0, 1)");
    if (!(dropout.hidden >= 0.0 && dropout.hidden < 1.0)) bad("hidden dropout must be in [0, 1)");
    if (!(weight_decay >= 0.0)) bad("weight_decay must be >= 0");
    if (outer_epochs == 0) bad("outer_epochs must be positive");
    if (inner_steps == 0) bad("inner_steps must be positive");
    if (sample_n == 0) bad("sample_n must be positive");
    if (d_dim == 0 || h_dim == 0 || disc_hidden == 0) bad("layer widths must be positive");
    if (patience == 0) bad("patience must be positive");
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t purpose) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(purpose >> 32)};
    return std::mt19937_64(seq);
}

ModelParams initial_params(const ModelDims& dims, std::uint64_t seed) {
    if (dims.features == 0 || dims.classes == 0 || dims.projection == 0 || dims.hidden == 0 || dims.disc_hidden == 0) {
        throw config_error("model dimensions must all be positive");
    }
    ModelParams p = ModelParams::zeros(dims);
    auto tensors = p.tensors();
    for (std::size_t k = 0; k < tensors.size(); ++k) {
        if (ModelParams::is_bias(k)) {
            continue;
        }
        auto rng = make_stream(seed, kStreamInit + k);
        *tensors[k] = glorot_uniform(tensors[k]->rows(), tensors[k]->cols(), rng);
    }
    return p;
}

ModelDims dims_for(const Graph& g, const TrainConfig& cfg) {
    return {g.n_features(), cfg.d_dim, cfg.h_dim, g.n_classes(), cfg.disc_hidden};
}

Matrix embed(const Graph& g, const ModelParams& params) {
    return topo::topology_forward(normalize_adjacency(g), g.features, params.conv);
}

double evaluate(const Graph& g, const ModelParams& params, const Mask& mask) {
    if (count(mask) == 0) {
        throw config_error("evaluate: mask is empty");
    }
    return topo::accuracy(topo::predict(embed(g, params)), g.labels, mask);
}

namespace {

constexpr std::size_t kWp = 0, kWc = 1, kW1 = 2, kW2 = 3, kWd1 = 4, kBd1 = 5, kWd2 = 6, kBd2 = 7;

void check_finite(double v, const char* what, std::size_t epoch, std::size_t step) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite " << what << " (" << v << ") at epoch " << epoch << ", inner step " << step;
        throw numerical_error(os.str());
    }
}

class Trainer {
public:
    Trainer(const Graph& g, const TrainConfig& cfg)
        : g_(g),
          cfg_(cfg),
          a_tilde_(normalize_adjacency(g).a_tilde),
          params_(initial_params(dims_for(g, cfg), cfg.seed)),
          topo_rng_(make_stream(cfg.seed, kStreamTopologyDropout)),
          content_rng_(make_stream(cfg.seed, kStreamContentDropout)),
          sample_rng_(make_stream(cfg.seed, kStreamSampling)) {
        if (cfg.content_active()) {
            gram_ = content::feature_gram(g.features);
            if (cfg.sample_n > g.n_nodes()) {
                throw config_error("sample_n = " + std::to_string(cfg.sample_n) + " exceeds |V| = " +
                                   std::to_string(g.n_nodes()));
            }
        }
    }

    TrainResult run(const TrainHooks& hooks) {
        TrainReport report;
        ModelParams best = params_;
        bool have_best = false;
        std::size_t since_improvement = 0;

        for (std::size_t epoch = 1; epoch <= cfg_.outer_epochs; ++epoch) {
            EpochRecord rec;
            rec.epoch = epoch;
            for (std::size_t step = 1; step <= cfg_.inner_steps; ++step) {
                try {
                    inner_step(rec, epoch, step);
                } catch (const numerical_error& e) {
                    // Errors raised inside a module do not know where training was.
                    const std::string msg = e.what();
                    if (msg.find("at epoch") != std::string::npos) {
                        throw;
                    }
                    throw numerical_error(msg + " at epoch " + std::to_string(epoch) + ", inner step " +
                                          std::to_string(step));
                }
            }
            const double inv = 1.0 / static_cast<double>(cfg_.inner_steps);
            for (double* v : {&rec.l_gcn, &rec.l_cont, &rec.d_loss, &rec.g_loss, &rec.loss_d_step, &rec.loss_g_step}) {
                *v *= inv;
            }

            const Matrix o = eval_embeddings();
            const auto pred = topo::predict(o);
            rec.train_acc = topo::accuracy(pred, g_.labels, g_.train_mask);
            rec.val_acc = topo::accuracy(pred, g_.labels, g_.val_mask);
            rec.val_loss = topo::classification_loss(o, g_.labels, g_.val_mask);
            check_finite(rec.val_loss, "validation loss", epoch, 0);
            report.epochs.push_back(rec);
            if (hooks.on_epoch) {
                hooks.on_epoch(rec);
            }

            const bool better_acc = !have_best || rec.val_acc > report.best_val_acc;
            const bool tie_lower_loss = have_best && rec.val_acc == report.best_val_acc && rec.val_loss < report.best_val_loss;
            if (better_acc || tie_lower_loss) {
                have_best = true;
                report.best_epoch = epoch;
                report.best_val_acc = rec.val_acc;
                report.best_val_loss = rec.val_loss;
                best = params_;
            }
            since_improvement = better_acc ? 0 : since_improvement + 1;
            if (since_improvement >= cfg_.patience) {
                report.early_stopped = epoch < cfg_.outer_epochs;
                break;
            }
        }

        params_ = std::move(best);
        report.test_accuracy = topo::accuracy(topo::predict(eval_embeddings()), g_.labels, g_.test_mask);
        return {std::move(params_), std::move(report)};
    }

private:
    Matrix eval_embeddings() {
        ad::Tape t;
        return topo::topology_forward(t.external(a_tilde_), t.external(g_.features), t.external(params_.conv.w1),
                                      t.external(params_.conv.w2), cfg_.dropout, topo_rng_, Mode::eval)
            .value();
    }

    double decay_for(std::size_t k) const {
        if (ModelParams::is_bias(k)) {
            return 0.0;
        }
        if (cfg_.decay_scope == DecayScope::conv_only && k != kW1 && k != kW2) {
            return 0.0;
        }
        return cfg_.weight_decay;
    }

    void update(std::size_t k, const Matrix& grad) {
        if (!grad.all_finite()) {
            // A non-finite gradient would poison the Adam moments for good.
            throw numerical_error("non-finite gradient for parameter tensor " + std::to_string(k));
        }
        adam_step(*params_.tensors()[k], grad, adam_[k], cfg_.lr, decay_for(k));
    }

    void inner_step(EpochRecord& rec, std::size_t epoch, std::size_t step) {
        ad::Tape t;
        const ad::Var x = t.external(g_.features);
        const ad::Var wp = t.parameter(params_.content.wp);
        const ad::Var wc = t.parameter(params_.content.wc);
        const ad::Var w1 = t.parameter(params_.conv.w1);
        const ad::Var w2 = t.parameter(params_.conv.w2);

        const ad::Var o =
            topo::topology_forward(t.external(a_tilde_), x, w1, w2, cfg_.dropout, topo_rng_, Mode::train);
        const ad::Var l_gcn = topo::classification_loss(o, g_.labels, g_.train_mask);
        check_finite(l_gcn.value().item(), "L_gcn", epoch, step);

        const std::array<ad::Var, 4> model_vars = {wp, wc, w1, w2};
        const std::array<std::size_t, 4> model_idx = {kWp, kWc, kW1, kW2};

        if (!cfg_.content_active()) {
            // Plain GCN: the content and discriminator tensors stay at their initial values.
            const auto grads = t.backward(l_gcn, {w1, w2});
            update(kW1, grads[w1]);
            update(kW2, grads[w2]);
            rec.l_gcn += l_gcn.value().item();
            rec.loss_d_step += l_gcn.value().item();
            rec.loss_g_step += l_gcn.value().item();
            return;
        }

        const ad::Var a_bar = content::build_content_network(x, wp, wc);
        const ad::Var x_bar2 = content::content_forward(a_bar, x, w1, w2, cfg_.dropout, content_rng_, Mode::train);
        ad::Var l_cont = content::reconstruction_loss(t.external(gram_), x_bar2);
        if (cfg_.content_loss_scale == ContentLossScale::mean) {
            const double n = static_cast<double>(g_.n_nodes());
            l_cont = ad::scale(l_cont, 1.0 / (n * n));
        }
        check_finite(l_cont.value().item(), "L_cont", epoch, step);
        const ad::Var base = ad::add(l_gcn, ad::scale(l_cont, cfg_.alpha));

        const auto real_idx = adv::sample_rows(g_.n_nodes(), cfg_.sample_n, sample_rng_);
        const auto fake_idx = adv::sample_rows(g_.n_nodes(), cfg_.sample_n, sample_rng_);

        // Discriminator step: generator-side rows are constants here.
        const adv::DiscriminatorVars d = adv::bind(t, params_.disc, true);
        const ad::Var d_loss = adv::discriminator_loss(ad::gather_rows(ad::detach(x_bar2), real_idx),
                                                       ad::gather_rows(ad::detach(o), fake_idx), d);
        check_finite(d_loss.value().item(), "d_loss", epoch, step);
        const ad::Var loss_d = ad::add(base, ad::scale(d_loss, cfg_.beta));
        if (cfg_.beta != 0.0) {
            const std::array<ad::Var, 4> disc_vars = {d.wd1, d.bd1, d.wd2, d.bd2};
            const auto grads = t.backward(loss_d, disc_vars);
            const std::array<std::size_t, 4> disc_idx = {kWd1, kBd1, kWd2, kBd2};
            for (std::size_t k = 0; k < disc_vars.size(); ++k) {
                update(disc_idx[k], grads[disc_vars[k]]);
            }
        }

        // Generator step against the updated discriminator, which is now constant.
        const adv::DiscriminatorVars d_fixed = adv::bind(t, params_.disc, false);
        const ad::Var g_loss = adv::generator_loss(ad::gather_rows(o, fake_idx), d_fixed, cfg_.generator_loss);
        check_finite(g_loss.value().item(), "g_loss", epoch, step);
        const ad::Var loss_g = ad::add(base, ad::scale(g_loss, cfg_.beta));
        const auto grads = t.backward(loss_g, model_vars);
        for (std::size_t k = 0; k < model_vars.size(); ++k) {
            update(model_idx[k], grads[model_vars[k]]);
        }

        rec.l_gcn += l_gcn.value().item();
        rec.l_cont += l_cont.value().item();
        rec.d_loss += d_loss.value().item();
        rec.g_loss += g_loss.value().item();
        rec.loss_d_step += loss_d.value().item();
        rec.loss_g_step += loss_g.value().item();
    }

    const Graph& g_;
    TrainConfig cfg_;
    Matrix a_tilde_;
    Matrix gram_;
    ModelParams params_;
    std::array<AdamState, ModelParams::kCount> adam_{};
    std::mt19937_64 topo_rng_;
    std::mt19937_64 content_rng_;
    std::mt19937_64 sample_rng_;
};

} // namespace

TrainResult train(const Graph& g, const TrainConfig& cfg, const TrainHooks& hooks) {
    cfg.validate();
    validate(g);
    for (const auto* m : {&g.train_mask, &g.val_mask, &g.test_mask}) {
        if (count(*m) == 0) {
            throw config_error("train: train/val/test masks must all be non-empty");
        }
    }
    if (cfg.content_active() && cfg.d_dim >= g.n_features()) {
        throw config_error("train: d_dim = " + std::to_string(cfg.d_dim) + " must be smaller than the feature count " +
                           std::to_string(g.n_features()));
    }
    Trainer trainer(g, cfg);
    return trainer.run(hooks);
}

} // namespace cogl
