#include "cogl/report.hpp"

#include "cogl/errors.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>

namespace cogl {

namespace {

/// Shortest text that parses back to exactly `v`.
std::string exact(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

} // namespace

void write_report_csv(const TrainReport& report, std::ostream& out) {
    out << "epoch,l_gcn,l_cont,d_loss,g_loss,loss_d_step,loss_g_step,train_acc,val_loss,val_acc\n";
    for (const auto& e : report.epochs) {
        out << e.epoch;
        for (double v : {e.l_gcn, e.l_cont, e.d_loss, e.g_loss, e.loss_d_step, e.loss_g_step, e.train_acc, e.val_loss,
                         e.val_acc}) {
            out << ',' << exact(v);
        }
        out << '\n';
    }
}

void write_report_csv(const TrainReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw load_error(path.string() + ": cannot open for writing");
    }
    write_report_csv(report, out);
}

nlohmann::json to_json(const Matrix& m) {
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
    return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                  j.at("data").get<std::vector<double>>());
}

nlohmann::json to_json(const ModelParams& p) {
    nlohmann::json j = nlohmann::json::object();
    const auto t = p.tensors();
    for (std::size_t k = 0; k < ModelParams::kCount; ++k) {
        j[std::string(ModelParams::kNames[k])] = to_json(*t[k]);
    }
    return j;
}

ModelParams params_from_json(const nlohmann::json& j) {
    ModelParams p;
    auto t = p.tensors();
    for (std::size_t k = 0; k < ModelParams::kCount; ++k) {
        *t[k] = matrix_from_json(j.at(std::string(ModelParams::kNames[k])));
    }
    return p;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw load_error(path.string() + ": cannot open for writing");
    }
    out << nlohmann::json{{"format", "cogl-checkpoint-1"}, {"config", ckpt.run_config}, {"params", to_json(ckpt.params)}}
               .dump()
        << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw load_error(path.string() + ": cannot open checkpoint");
    }
    try {
        const auto j = nlohmann::json::parse(in);
        if (j.value("format", "") != "cogl-checkpoint-1") {
            throw load_error(path.string() + ": not a checkpoint file");
        }
        return {params_from_json(j.at("params")), j.at("config")};
    } catch (const nlohmann::json::exception& e) {
        throw load_error(path.string() + ": malformed checkpoint: " + e.what());
    } catch (const dimension_error& e) {
        throw load_error(path.string() + ": malformed checkpoint: " + e.what());
    }
}

} // namespace cogl
