#pragma once

#include <string>

#include "ingrain/config.hpp"
#include "ingrain/data.hpp"

namespace ingrain {

/// Windowed, split, masked dataset ready for training or evaluation.
struct PreparedData {
    std::vector<TrajectoryWindow> train;
    std::vector<TrajectoryWindow> test;
    NormParams norm;
};

/// Loads the CSV, normalizes, windowizes per user, splits, and assigns every
/// window a mask derived from the shared masking seed; identical masks are
/// seen by the model and every baseline.
PreparedData prepare_data(const RunConfig& cfg, const std::string& data_csv);

/// Re-masks a window set at a different missing rate (same per-window seeds).
void remask(std::vector<TrajectoryWindow>& windows, const RunConfig& cfg, double rate);

void run_synth(const RunConfig& cfg, const std::string& out_csv);

/// Trains once per seed; writes model_seed<N>.bin and train_log_seed<N>.csv
/// under out_dir and returns the mean-of-best summary text.
std::string run_train(const RunConfig& cfg, const std::string& data_csv,
                      const std::string& out_dir);

void run_eval(const RunConfig& cfg, const std::string& model_path, const std::string& data_csv,
              const std::string& out_csv);

/// Trains and evaluates per sweep value; writes sweep.csv (axis,value,task,loss).
std::string run_sweep(const RunConfig& cfg, const std::string& data_csv,
                      const std::string& out_dir);

}  // namespace ingrain
