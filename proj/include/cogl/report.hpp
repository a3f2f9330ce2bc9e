#pragma once

#include "cogl/params.hpp"
#include "cogl/trainer.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>

namespace cogl {

/// One header line, then one row per epoch:
/// epoch,l_gcn,l_cont,d_loss,g_loss,loss_d_step,loss_g_step,train_acc,val_loss,val_acc
void write_report_csv(const TrainReport& report, std::ostream& out);
void write_report_csv(const TrainReport& report, const std::filesystem::path& path);

nlohmann::json to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ModelParams& p);
ModelParams params_from_json(const nlohmann::json& j);

/// Trained parameters plus the resolved run configuration that produced them.
struct Checkpoint {
    ModelParams params;
    nlohmann::json run_config;
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
/// Throws load_error if the file is missing or malformed.
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace cogl
