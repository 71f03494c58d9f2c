#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ingrain/losses.hpp"
#include "ingrain/model.hpp"
#include "ingrain/params.hpp"

namespace ingrain {

struct TrainConfig {
    ForwardConfig forward;
    LossConfig loss;
    AdamConfig adam;
    int batch_size = 70;
    int epochs = 60;
    bool step_per_window = false;  // one optimizer step per window batch instead of per cycle
    double grad_clip = 5.0;
    int eval_every = 5;
    uint64_t seed = 0;

    void validate() const {
        forward.validate();
        loss.weights.validate();
        if (batch_size < 1) throw ContractError("batch_size must be >= 1");
        if (epochs < 0) throw ContractError("epochs must be >= 0");
        if (eval_every < 1) throw ContractError("eval_every must be >= 1");
    }
};

struct WindowForward {
    Var total;  // mean over cycles of the fused per-cycle objective
    LossReport report;
    int cycles = 0;
    int prediction_calls = 0;
};

/// Training-mode forward for one window on a single tape: every cycle imputes
/// a batch, reconstructs the sequence, predicts, and contributes a fused loss
/// term. Fully observed windows contribute one prediction-only pass.
WindowForward training_forward_window(Tape& tape, const TrajectoryWindow& win,
                                      const Bound& params, const ForwardConfig& fwd,
                                      const LossConfig& loss);

struct EpochLog {
    int epoch = 0;
    LossReport train;
    std::optional<double> test_l_imp;
    std::optional<double> test_l_pre;
};

struct TrainResult {
    ParamStore params;
    std::vector<EpochLog> log;
};

/// Epoch/batch/cycle training loop. By default one Adam step per batch per
/// cycle with gradients averaged over the batch members active in that cycle.
TrainResult train(const std::vector<TrajectoryWindow>& train_set,
                  const std::vector<TrajectoryWindow>& test_set, const TrainConfig& cfg);

struct EvalMetrics {
    double l_imp = 0.0;  // mean over windows that have missing points
    double l_pre = 0.0;  // mean over all windows
    int imp_windows = 0;
    int windows = 0;
};

/// Testing-mode metrics: imputation over all cycles, prediction once after.
EvalMetrics evaluate_dataset(const std::vector<TrajectoryWindow>& set, const ParamStore& params,
                             const ForwardConfig& fwd, bool squared);

/// One training step's averaged gradient for a batch, without applying it.
/// Used by ablation checks; mirrors the default per-cycle step for cycle 0.
GradSet first_cycle_gradient(const std::vector<TrajectoryWindow>& batch,
                             const ParamStore& params, const ForwardConfig& fwd,
                             const LossConfig& loss);

}  // namespace ingrain
