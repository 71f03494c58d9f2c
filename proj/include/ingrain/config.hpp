#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ingrain/data.hpp"
#include "ingrain/train.hpp"

namespace ingrain {

/// Thrown for invalid configuration (unknown key, bad value, failed
/// cross-field validation). Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Flat key = value experiment configuration.
struct RunConfig {
    // data
    int L = 20;
    int stride = 0;  // 0 = use L (non-overlapping)
    double missing_rate = 0.5;
    std::string mask_dist = "uniform";  // uniform | poisson
    double train_fraction = 0.8;
    std::string normalization = "none";  // none | minmax
    uint64_t mask_seed = 1;
    uint64_t split_seed = 1;

    // model
    int embed_dim = 256;
    int heads = 2;
    int layers = 2;
    int hidden_dim = 256;
    int points_per_cycle = 1;
    std::string supplement_mode = "replace";  // replace | add
    bool reencode_per_cycle = true;
    bool no_rnn = false;

    // training
    double lambda_imp = 1.0;
    double lambda_pre = 1.0;
    double lambda_vel = 1.0;
    double lr = 0.001;
    int batch = 70;
    int epochs = 60;
    int eval_every = 5;
    double grad_clip = 5.0;
    bool squared_loss = false;
    bool step_per_window = false;
    bool vel_literal = false;
    std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};

    // synthesis
    int walker_count = 10;
    int points_per_walker = 200;
    std::string motion = "smooth";  // smooth | loop
    double noise_scale = 1.0;

    // evaluation / sweep
    int knn_k = 4;
    bool include_sgru = false;
    std::vector<double> eval_rates;  // empty = just missing_rate
    std::string sweep_axis;          // empty = no sweep
    std::vector<double> sweep_values;

    static RunConfig load(const std::string& path);
    void set(const std::string& key, const std::string& value);
    void validate() const;
    /// Canonical text form (also the model-file config echo).
    std::string serialize() const;

    int effective_stride() const { return stride == 0 ? L : stride; }
    MaskDistribution mask_distribution() const;
    ForwardConfig forward_config() const;
    LossConfig loss_config() const;
    TrainConfig train_config(uint64_t seed) const;
};

}  // namespace ingrain
