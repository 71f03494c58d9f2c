#include "ingrain/model.hpp"

#include <cmath>

namespace ingrain {

Var attention(Tape& tape, Var q, Var k, Var v, AttentionProbe* probe) {
    if (q.cols() != k.cols())
        throw DimensionError("attention: Q " + q.value().shape_str() + " vs K " +
                             k.value().shape_str());
    if (k.rows() != v.rows())
        throw DimensionError("attention: K " + k.value().shape_str() + " vs V " +
                             v.value().shape_str());
    const double dk = static_cast<double>(q.cols());
    Var scores = tape.scale(tape.matmul(q, tape.transpose(k)), 1.0 / std::sqrt(dk));
    Var weights = tape.softmax_rows(scores);
    if (probe) probe->push_back(weights.value());
    return tape.matmul(weights, v);
}

Var multi_head(Tape& tape, Var z_q, Var z_kv, const Bound& params,
               const std::string& prefix, int heads, AttentionProbe* probe) {
    std::vector<Var> outs;
    for (int h = 0; h < heads; ++h) {
        const std::string hp = prefix + ".h" + std::to_string(h);
        Var q = tape.matmul(z_q, params[hp + ".Wq"]);
        Var k = tape.matmul(z_kv, params[hp + ".Wk"]);
        Var v = tape.matmul(z_kv, params[hp + ".Wv"]);
        outs.push_back(attention(tape, q, k, v, probe));
    }
    Var cat = heads == 1 ? outs[0] : tape.concat_cols(outs);
    return tape.matmul(cat, params[prefix + ".Wo"]);
}

namespace {

Var feed_forward(Tape& tape, Var x, const Bound& params, const std::string& prefix) {
    Var h = tape.relu(tape.add_rowvec(tape.matmul(x, params[prefix + ".W1"]),
                                      params[prefix + ".b1"]));
    return tape.add_rowvec(tape.matmul(h, params[prefix + ".W2"]), params[prefix + ".b2"]);
}

Var post_norm(Tape& tape, Var residual, Var sublayer, const Bound& params,
              const std::string& norm_prefix, double eps) {
    return tape.layer_norm(tape.add(residual, sublayer), params[norm_prefix + ".gain"],
                           params[norm_prefix + ".bias"], eps);
}

}  // namespace

Var encoder_forward(Tape& tape, Var e_obs, const Bound& params, const ForwardConfig& cfg,
                    AttentionProbe* probe) {
    Var x = e_obs;
    for (int l = 0; l < cfg.model.layers; ++l) {
        const std::string p = "enc" + std::to_string(l);
        x = post_norm(tape, x, multi_head(tape, x, x, params, p + ".self", cfg.model.heads, probe),
                      params, p + ".norm1", cfg.layer_norm_eps);
        x = post_norm(tape, x, feed_forward(tape, x, params, p + ".ff"), params, p + ".norm2",
                      cfg.layer_norm_eps);
    }
    return x;
}

Var decoder_forward(Tape& tape, Var e_mis_batch, Var y_obs, const Bound& params,
                    const ForwardConfig& cfg, AttentionProbe* probe) {
    Var x = e_mis_batch;
    for (int l = 0; l < cfg.model.layers; ++l) {
        const std::string p = "dec" + std::to_string(l);
        x = post_norm(tape, x, multi_head(tape, x, x, params, p + ".self", cfg.model.heads, probe),
                      params, p + ".norm1", cfg.layer_norm_eps);
        x = post_norm(tape, x,
                      multi_head(tape, x, y_obs, params, p + ".cross", cfg.model.heads, probe),
                      params, p + ".norm2", cfg.layer_norm_eps);
        x = post_norm(tape, x, feed_forward(tape, x, params, p + ".ff"), params, p + ".norm3",
                      cfg.layer_norm_eps);
    }
    return x;
}

Var impute_head(Tape& tape, Var y_mis_batch, const Bound& params) {
    return tape.add_rowvec(tape.matmul(y_mis_batch, params["impute.W"]), params["impute.b"]);
}

WindowSlots WindowSlots::from_window(Tape& tape, const TrajectoryWindow& win) {
    WindowSlots s;
    for (int l = 0; l < win.length(); ++l) {
        if (win.mask[l]) {
            Matrix p(1, 2);
            p.v[0] = win.points[l][0];
            p.v[1] = win.points[l][1];
            s.state.push_back(SlotState::Observed);
            s.point_vars.push_back(tape.constant(std::move(p)));
        } else {
            s.state.push_back(SlotState::Missing);
            s.point_vars.push_back(Var{});
        }
    }
    return s;
}

CycleResult forward_cycle(Tape& tape, const TrajectoryWindow& win, const Bound& params,
                          const ForwardConfig& cfg, WindowSlots& slots,
                          std::vector<int>& remaining, std::optional<Var>& yobs_cache,
                          AttentionProbe* probe) {
    if (remaining.empty()) throw ContractError("forward_cycle: nothing left to impute");
    CycleResult res;

    // Observed queue over the current slot contents; missing slots embed a
    // zero point, imputed slots re-enter through W_obs as observed values.
    Var y_obs;
    if (!cfg.reencode_per_cycle && yobs_cache.has_value()) {
        y_obs = *yobs_cache;
    } else {
        std::vector<Var> rows;
        for (int l = 0; l < win.length(); ++l) {
            Var p = slots.state[l] == SlotState::Missing ? tape.constant(Matrix::zeros(1, 2))
                                                         : slots.point_vars[l];
            rows.push_back(embed_observed_row(tape, p, win.frames[l], params));
        }
        y_obs = encoder_forward(tape, tape.concat_rows(rows), params, cfg, probe);
        if (!cfg.reencode_per_cycle) yobs_cache = y_obs;
    }
    res.y_obs = y_obs;

    const int take = std::min<int>(cfg.points_per_cycle, static_cast<int>(remaining.size()));
    res.batch.assign(remaining.begin(), remaining.begin() + take);
    remaining.erase(remaining.begin(), remaining.begin() + take);

    std::vector<Var> mis_rows;
    for (int idx : res.batch) mis_rows.push_back(embed_missing_row(tape, win.frames[idx], params));
    Var y_mis = decoder_forward(tape, tape.concat_rows(mis_rows), y_obs, params, cfg, probe);
    Var coords = impute_head(tape, y_mis, params);

    for (int i = 0; i < take; ++i) {
        const int idx = res.batch[i];
        Var c = tape.slice_rows(coords, i, 1);
        res.new_coords.push_back(c);
        res.new_ymis.push_back(tape.slice_rows(y_mis, i, 1));
        slots.state[idx] = SlotState::Imputed;
        slots.point_vars[idx] = c;
    }
    return res;
}

Var supplement(Tape& tape, Var y_obs, const std::map<int, Var>& ymis_rows,
               const std::vector<bool>& mask, SupplementMode mode, bool require_complete) {
    const int L = static_cast<int>(mask.size());
    if (y_obs.rows() != L)
        throw DimensionError("supplement: Y_obs " + y_obs.value().shape_str() + " vs mask length " +
                             std::to_string(L));
    std::vector<Var> rows;
    for (int l = 0; l < L; ++l) {
        Var obs_row = tape.slice_rows(y_obs, l, 1);
        if (mask[l]) {
            rows.push_back(obs_row);
            continue;
        }
        auto it = ymis_rows.find(l);
        if (it == ymis_rows.end()) {
            if (require_complete)
                throw ContractError("supplement: no missing-queue embedding for index " +
                                    std::to_string(l));
            rows.push_back(obs_row);
        } else if (mode == SupplementMode::Replace) {
            rows.push_back(it->second);
        } else {
            rows.push_back(tape.add(obs_row, it->second));
        }
    }
    return tape.concat_rows(rows);
}

std::vector<Var> gru_forward(Tape& tape, Var y_seq, const Bound& params,
                             const std::string& prefix, int hidden_dim) {
    std::vector<Var> hs;
    Var h = tape.constant(Matrix::zeros(1, hidden_dim));
    for (int t = 0; t < y_seq.rows(); ++t) {
        Var x = tape.slice_rows(y_seq, t, 1);
        Var f = tape.sigmoid(tape.add_rowvec(
            tape.add(tape.matmul(x, params[prefix + ".Wfx"]), tape.matmul(h, params[prefix + ".Wfh"])),
            params[prefix + ".bf"]));
        Var r = tape.sigmoid(tape.add_rowvec(
            tape.add(tape.matmul(x, params[prefix + ".Wrx"]), tape.matmul(h, params[prefix + ".Wrh"])),
            params[prefix + ".br"]));
        Var c = tape.tanh_(tape.add_rowvec(
            tape.add(tape.matmul(x, params[prefix + ".Wcx"]),
                     tape.mul(r, tape.matmul(h, params[prefix + ".Wch"]))),
            params[prefix + ".bc"]));
        Var ones = tape.constant(Matrix::filled(1, hidden_dim, 1.0));
        h = tape.add(tape.mul(tape.sub(ones, f), c), tape.mul(f, h));
        hs.push_back(h);
    }
    return hs;
}

Var predict_next(Tape& tape, Var h_last, const Bound& params) {
    return tape.add_rowvec(tape.matmul(h_last, params["pred.W"]), params["pred.b"]);
}

Var prediction_forward(Tape& tape, Var y_obs, const std::map<int, Var>& ymis_rows,
                       const std::vector<bool>& mask, const Bound& params,
                       const ForwardConfig& cfg, bool require_complete) {
    Var y_seq = supplement(tape, y_obs, ymis_rows, mask, cfg.supplement, require_complete);
    if (cfg.no_rnn) {
        const int L = y_seq.rows();
        Var pool = tape.matmul(tape.constant(Matrix::filled(1, L, 1.0 / L)), y_seq);
        return tape.add_rowvec(tape.matmul(pool, params["nornn.W"]), params["nornn.b"]);
    }
    std::vector<Var> hs = gru_forward(tape, y_seq, params, "gru", cfg.model.hidden_dim);
    return predict_next(tape, hs.back(), params);
}

ImputationRun run_imputation_cycles(Tape& tape, const TrajectoryWindow& win,
                                    const Bound& params, const ForwardConfig& cfg,
                                    AttentionProbe* probe) {
    cfg.validate();
    ImputationRun run;
    WindowSlots slots = WindowSlots::from_window(tape, win);
    std::vector<int> remaining = win.missing_indices();
    std::optional<Var> yobs_cache;
    while (!remaining.empty()) {
        CycleResult cr = forward_cycle(tape, win, params, cfg, slots, remaining, yobs_cache, probe);
        for (size_t i = 0; i < cr.batch.size(); ++i) {
            const int idx = cr.batch[i];
            if (run.imputed.count(idx))
                throw ContractError("imputation cycle imputed index twice: " + std::to_string(idx));
            const Matrix& c = cr.new_coords[i].value();
            run.imputed[idx] = {c.v[0], c.v[1]};
            run.imputed_vars[idx] = cr.new_coords[i];
            run.ymis_rows[idx] = cr.new_ymis[i];
        }
        run.y_obs_final = cr.y_obs;
        run.cycles += 1;
    }
    if (run.cycles == 0) {
        // fully observed window: encode once so prediction has Y_obs
        std::vector<Var> rows;
        for (int l = 0; l < win.length(); ++l)
            rows.push_back(embed_observed_row(tape, slots.point_vars[l], win.frames[l], params));
        run.y_obs_final = encoder_forward(tape, tape.concat_rows(rows), params, cfg, probe);
    }
    return run;
}

EvalOutputs evaluate_window(const TrajectoryWindow& win, const ParamStore& store,
                            const ForwardConfig& cfg, AttentionProbe* probe) {
    Tape tape;
    Bound params(tape, store);
    ImputationRun run = run_imputation_cycles(tape, win, params, cfg, probe);
    EvalOutputs out;
    out.imputed = run.imputed;
    out.cycles = run.cycles;
    Var pred = prediction_forward(tape, run.y_obs_final, run.ymis_rows, win.mask, params, cfg,
                                  /*require_complete=*/true);
    out.prediction_calls = 1;
    out.prediction = {pred.value().v[0], pred.value().v[1]};
    return out;
}

}  // namespace ingrain
