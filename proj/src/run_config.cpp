#include "cogl/run_config.hpp"

#include "cogl/errors.hpp"
#include "cogl/graph_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <functional>
#include <map>

namespace cogl {

namespace fs = std::filesystem;

std::string to_string(RunMode m) { return m == RunMode::cogl ? "cogl" : "gcn-baseline"; }

RunMode parse_mode(std::string_view s) {
    if (s == "cogl") {
        return RunMode::cogl;
    }
    if (s == "gcn-baseline" || s == "gcn_baseline") {
        return RunMode::gcn_baseline;
    }
    throw config_error("unknown mode '" + std::string(s) + "' (expected cogl or gcn-baseline)");
}

namespace {

std::string decay_str(DecayScope s) { return s == DecayScope::all_weights ? "all" : "conv"; }
std::string gen_str(adv::GeneratorLoss g) {
    return g == adv::GeneratorLoss::non_saturating ? "non-saturating" : "saturating";
}

double to_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw config_error("config: '" + std::string(key) + "' expects a real number, got '" + std::string(v) + "'");
    }
    return out;
}

std::uint64_t to_count(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw config_error("config: '" + std::string(key) + "' expects a non-negative integer, got '" +
                           std::string(v) + "'");
    }
    return out;
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    throw config_error("config: '" + std::string(key) + "' expects a boolean, got '" + std::string(v) + "'");
}

fs::path resolve(const fs::path& base, std::string_view v) {
    fs::path p{std::string(v)};
    return p.is_relative() && !base.empty() ? base / p : p;
}

} // namespace

void RunConfig::set(std::string_view key, std::string_view raw, const fs::path& base) {
    std::string_view value = raw;
    while (!value.empty() && (value.front() == ' ' || value.front() == '"')) value.remove_prefix(1);
    while (!value.empty() && (value.back() == ' ' || value.back() == '"')) value.remove_suffix(1);
    const std::string k(key);
    auto& t = train;

    using Setter = std::function<void(std::string_view)>;
    const std::map<std::string, Setter, std::less<>> setters = {
        {"data.dir", [&](auto v) { data = DatasetPaths::in_directory(resolve(base, v)); }},
        {"data.edges", [&](auto v) { data.edges = resolve(base, v); }},
        {"data.features", [&](auto v) { data.features = resolve(base, v); }},
        {"data.labels", [&](auto v) { data.labels = resolve(base, v); }},
        {"data.splits", [&](auto v) { data.splits = resolve(base, v); }},
        {"data.subsample", [&](auto v) { subsample = to_count(k, v); }},
        {"data.subsample_seed", [&](auto v) { subsample_seed = to_count(k, v); }},
        {"data.normalize_features", [&](auto v) { normalize_features = to_bool(k, v); }},
        {"model.d_dim", [&](auto v) { t.d_dim = to_count(k, v); }},
        {"model.h_dim", [&](auto v) { t.h_dim = to_count(k, v); }},
        {"model.disc_hidden", [&](auto v) { t.disc_hidden = to_count(k, v); }},
        {"model.dropout", [&](auto v) { t.dropout.input = t.dropout.hidden = to_double(k, v); }},
        {"model.input_dropout", [&](auto v) { t.dropout.input = to_double(k, v); }},
        {"model.hidden_dropout", [&](auto v) { t.dropout.hidden = to_double(k, v); }},
        {"train.mode", [&](auto v) { mode = parse_mode(v); }},
        {"train.alpha", [&](auto v) { t.alpha = to_double(k, v); }},
        {"train.beta", [&](auto v) { t.beta = to_double(k, v); }},
        {"train.lr", [&](auto v) { t.lr = to_double(k, v); }},
        {"train.weight_decay", [&](auto v) { t.weight_decay = to_double(k, v); }},
        {"train.decay_scope",
         [&](auto v) {
             if (v == "all") t.decay_scope = DecayScope::all_weights;
             else if (v == "conv") t.decay_scope = DecayScope::conv_only;
             else throw config_error("config: decay_scope must be 'all' or 'conv'");
         }},
        {"train.epochs", [&](auto v) { t.outer_epochs = to_count(k, v); }},
        {"train.inner_steps", [&](auto v) { t.inner_steps = to_count(k, v); }},
        {"train.sample_n", [&](auto v) { t.sample_n = to_count(k, v); }},
        {"train.patience", [&](auto v) { t.patience = to_count(k, v); }},
        {"train.seed", [&](auto v) { t.seed = to_count(k, v); }},
        {"train.generator_loss",
         [&](auto v) {
             if (v == "non-saturating") t.generator_loss = adv::GeneratorLoss::non_saturating;
             else if (v == "saturating") t.generator_loss = adv::GeneratorLoss::saturating;
             else throw config_error("config: generator_loss must be 'non-saturating' or 'saturating'");
         }},
        {"train.content_loss",
         [&](auto v) {
             if (v == "sum") t.content_loss_scale = ContentLossScale::sum;
             else if (v == "mean") t.content_loss_scale = ContentLossScale::mean;
             else throw config_error("config: content_loss must be 'sum' or 'mean'");
         }},
        {"output.dir", [&](auto v) { output_dir = resolve(base, v); }},
    };
    const auto it = setters.find(k);
    if (it == setters.end()) {
        throw config_error("config: unknown key '" + k + "'");
    }
    it->second(value);
}

TrainConfig RunConfig::effective_train() const {
    TrainConfig t = train;
    if (mode == RunMode::gcn_baseline) {
        t.alpha = 0.0;
        t.beta = 0.0;
    }
    return t;
}

nlohmann::json RunConfig::to_json() const {
    const TrainConfig& t = train;
    return {
        {"data",
         {{"edges", data.edges.string()},
          {"features", data.features.string()},
          {"labels", data.labels.string()},
          {"splits", data.splits.string()},
          {"subsample", subsample},
          {"subsample_seed", subsample_seed},
          {"normalize_features", normalize_features}}},
        {"model",
         {{"d_dim", t.d_dim},
          {"h_dim", t.h_dim},
          {"disc_hidden", t.disc_hidden},
          {"input_dropout", t.dropout.input},
          {"hidden_dropout", t.dropout.hidden}}},
        {"train",
         {{"mode", to_string(mode)},
          {"alpha", t.alpha},
          {"beta", t.beta},
          {"lr", t.lr},
          {"weight_decay", t.weight_decay},
          {"decay_scope", decay_str(t.decay_scope)},
          {"epochs", t.outer_epochs},
          {"inner_steps", t.inner_steps},
          {"sample_n", t.sample_n},
          {"patience", t.patience},
          {"seed", t.seed},
          {"generator_loss", gen_str(t.generator_loss)},
          {"content_loss", t.content_loss_scale == ContentLossScale::sum ? "sum" : "mean"}}},
        {"output", {{"dir", output_dir.string()}}},
    };
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    try {
        for (const auto& [section, body] : j.items()) {
            for (const auto& [key, v] : body.items()) {
                const std::string text = v.is_string() ? v.get<std::string>()
                                         : v.is_boolean() ? (v.get<bool>() ? "true" : "false")
                                                          : v.dump();
                c.set(section + "." + key, text);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config: malformed JSON config: ") + e.what());
    }
    return c;
}

RunConfig load_run_config(const fs::path& path) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw config_error(e.what());
    }
    RunConfig c;
    const fs::path base = path.parent_path();
    try {
        for (const auto& [section, body] : tree) {
            if (body.empty()) {
                throw config_error("config: top-level key '" + section + "' must be inside a [section]");
            }
            for (const auto& [key, leaf] : body) {
                c.set(section + "." + key, leaf.get_value<std::string>(), base);
            }
        }
    } catch (const config_error& e) {
        throw config_error(path.string() + ": " + e.what());
    }
    return c;
}

Graph load_dataset(const RunConfig& cfg) {
    Graph g = load_graph(cfg.data);
    if (cfg.subsample != 0 && cfg.subsample < g.n_nodes()) {
        g = subsample_nodes(g, cfg.subsample, cfg.subsample_seed);
    }
    if (cfg.normalize_features) {
        g = row_normalize_features(std::move(g));
    }
    return g;
}

} // namespace cogl
