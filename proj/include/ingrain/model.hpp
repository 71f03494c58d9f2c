#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ingrain/data.hpp"
#include "ingrain/encoding.hpp"
#include "ingrain/params.hpp"
#include "ingrain/tape.hpp"

namespace ingrain {

/// Collects attention weight matrices (softmax outputs) when attached.
using AttentionProbe = std::vector<Matrix>;

enum class SupplementMode { Replace, Add };

struct ForwardConfig {
    ModelConfig model;
    int points_per_cycle = 1;
    bool reencode_per_cycle = true;
    SupplementMode supplement = SupplementMode::Replace;
    bool no_rnn = false;
    double layer_norm_eps = 1e-5;

    void validate() const {
        model.validate();
        if (points_per_cycle < 1) throw ContractError("points_per_cycle must be >= 1");
    }
};

/// softmax(Q K^T / sqrt(d_k)) V; no causal masking anywhere.
Var attention(Tape& tape, Var q, Var k, Var v, AttentionProbe* probe = nullptr);

/// Multi-head attention with Q from z_q and K,V from z_kv; parameters are
/// looked up under `prefix` (".h<i>.Wq/Wk/Wv" and ".Wo").
Var multi_head(Tape& tape, Var z_q, Var z_kv, const Bound& params,
               const std::string& prefix, int heads, AttentionProbe* probe = nullptr);

Var encoder_forward(Tape& tape, Var e_obs, const Bound& params, const ForwardConfig& cfg,
                    AttentionProbe* probe = nullptr);

Var decoder_forward(Tape& tape, Var e_mis_batch, Var y_obs, const Bound& params,
                    const ForwardConfig& cfg, AttentionProbe* probe = nullptr);

/// Affine D -> 2 per row.
Var impute_head(Tape& tape, Var y_mis_batch, const Bound& params);

/// Per-position point state inside the imputation loop.
enum class SlotState { Observed, Imputed, Missing };

struct WindowSlots {
    std::vector<SlotState> state;
    std::vector<Var> point_vars;  // 1x2; valid unless state == Missing

    static WindowSlots from_window(Tape& tape, const TrajectoryWindow& win);
};

struct CycleResult {
    std::vector<int> batch;       // missing indices imputed this cycle
    std::vector<Var> new_coords;  // 1x2 per batch element
    std::vector<Var> new_ymis;    // 1xD decoder rows per batch element
    Var y_obs;
};

/// One imputation cycle: embed the current observed queue, encode (or reuse
/// the cached encoding), decode the next n missing points, impute them and
/// write the coordinates back into the slots.
CycleResult forward_cycle(Tape& tape, const TrajectoryWindow& win, const Bound& params,
                          const ForwardConfig& cfg, WindowSlots& slots,
                          std::vector<int>& remaining, std::optional<Var>& yobs_cache,
                          AttentionProbe* probe = nullptr);

/// Reconstructs the full-trajectory embedding per the supplement rule. Rows
/// whose missing index has no decoder embedding yet fall back to the encoder
/// row; with `require_complete` that situation is a contract error.
Var supplement(Tape& tape, Var y_obs, const std::map<int, Var>& ymis_rows,
               const std::vector<bool>& mask, SupplementMode mode,
               bool require_complete = false);

/// h_t = (1 - f_t) o c_t + f_t o h_{t-1}; returns h_1..h_L.
std::vector<Var> gru_forward(Tape& tape, Var y_seq, const Bound& params,
                             const std::string& prefix, int hidden_dim);

Var predict_next(Tape& tape, Var h_last, const Bound& params);

/// Full prediction path: supplement + GRU + affine head (or the mean-pooled
/// affine head when no_rnn is set).
Var prediction_forward(Tape& tape, Var y_obs, const std::map<int, Var>& ymis_rows,
                       const std::vector<bool>& mask, const Bound& params,
                       const ForwardConfig& cfg, bool require_complete);

struct ImputationRun {
    std::map<int, Point> imputed;
    std::map<int, Var> imputed_vars;
    std::map<int, Var> ymis_rows;
    Var y_obs_final;
    int cycles = 0;
};

/// Runs the imputation loop to completion on one tape (no training updates).
ImputationRun run_imputation_cycles(Tape& tape, const TrajectoryWindow& win,
                                    const Bound& params, const ForwardConfig& cfg,
                                    AttentionProbe* probe = nullptr);

struct EvalOutputs {
    std::map<int, Point> imputed;
    Point prediction{0.0, 0.0};
    int cycles = 0;
    int prediction_calls = 0;
};

/// Testing mode: impute every missing point, then predict exactly once.
EvalOutputs evaluate_window(const TrajectoryWindow& win, const ParamStore& store,
                            const ForwardConfig& cfg, AttentionProbe* probe = nullptr);

}  // namespace ingrain
