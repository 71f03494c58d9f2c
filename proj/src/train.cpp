#include "ingrain/train.hpp"

#include <algorithm>
#include <cmath>

#include "ingrain/rng.hpp"

namespace ingrain {

namespace {

double scalar(Var v) { return v.value().v[0]; }

Var encode_fully_observed(Tape& tape, const TrajectoryWindow& win, const Bound& params,
                          const ForwardConfig& fwd) {
    std::vector<Var> rows;
    for (int l = 0; l < win.length(); ++l) {
        Matrix p(1, 2);
        p.v[0] = win.points[l][0];
        p.v[1] = win.points[l][1];
        rows.push_back(embed_observed_row(tape, tape.constant(std::move(p)), win.frames[l], params));
    }
    return encoder_forward(tape, tape.concat_rows(rows), params, fwd);
}

}  // namespace

WindowForward training_forward_window(Tape& tape, const TrajectoryWindow& win,
                                      const Bound& params, const ForwardConfig& fwd,
                                      const LossConfig& loss) {
    fwd.validate();
    WindowForward out;
    std::vector<int> remaining = win.missing_indices();

    if (remaining.empty()) {
        Var y_obs = encode_fully_observed(tape, win, params, fwd);
        Var pred = prediction_forward(tape, y_obs, {}, win.mask, params, fwd, true);
        Var lp = loss_pre(tape, pred, win.target, loss.squared_loss);
        out.total = fuse(tape, std::nullopt, lp, std::nullopt, loss.weights);
        out.prediction_calls = 1;
        out.report.l_pre = scalar(lp);
        out.report.l_learn = scalar(out.total);
        return out;
    }

    WindowSlots slots = WindowSlots::from_window(tape, win);
    std::optional<Var> yobs_cache;
    std::map<int, Var> ymis_rows;
    std::optional<Var> total;
    while (!remaining.empty()) {
        CycleResult cr = forward_cycle(tape, win, params, fwd, slots, remaining, yobs_cache);
        Var li = loss_imp(tape, cr.new_coords, cr.batch, win, loss.squared_loss);
        for (size_t i = 0; i < cr.batch.size(); ++i) ymis_rows[cr.batch[i]] = cr.new_ymis[i];
        Var pred = prediction_forward(tape, cr.y_obs, ymis_rows, win.mask, params, fwd, false);
        Var lp = loss_pre(tape, pred, win.target, loss.squared_loss);
        std::optional<Var> lv = loss_vel(tape, win, slots, loss.vel_literal);
        Var fused = fuse(tape, li, lp, lv, loss.weights);
        total = total.has_value() ? tape.add(*total, fused) : fused;
        out.cycles += 1;
        out.prediction_calls += 1;
        out.report.l_imp += scalar(li);
        out.report.l_pre += scalar(lp);
        out.report.l_vel += lv.has_value() ? scalar(*lv) : 0.0;
        out.report.l_learn += scalar(fused);
    }
    out.total = tape.scale(*total, 1.0 / out.cycles);
    out.report.l_imp /= out.cycles;
    out.report.l_pre /= out.cycles;
    out.report.l_vel /= out.cycles;
    out.report.l_learn /= out.cycles;
    return out;
}

namespace {

/// Tape-independent progress of one window through the cycle loop.
struct WindowState {
    const TrajectoryWindow* win = nullptr;
    std::map<int, Point> imputed;
    std::vector<int> remaining;
    std::map<int, Matrix> ymis_values;
    std::optional<Matrix> yobs_value;

    explicit WindowState(const TrajectoryWindow& w) : win(&w), remaining(w.missing_indices()) {}
};

struct CycleStep {
    GradSet grads;
    LossReport report;
};

/// One cycle of one window on a fresh tape; earlier cycles enter as constants.
CycleStep run_cycle_step(WindowState& st, const ParamStore& store, const ForwardConfig& fwd,
                         const LossConfig& loss) {
    Tape tape;
    Bound params(tape, store);
    const TrajectoryWindow& win = *st.win;
    CycleStep out{GradSet(store), {}};

    if (st.remaining.empty()) {
        // fully observed window: prediction-only pass
        Var y_obs = encode_fully_observed(tape, win, params, fwd);
        Var pred = prediction_forward(tape, y_obs, {}, win.mask, params, fwd, true);
        Var lp = loss_pre(tape, pred, win.target, loss.squared_loss);
        Var fused = fuse(tape, std::nullopt, lp, std::nullopt, loss.weights);
        out.report.l_pre = scalar(lp);
        out.report.l_learn = scalar(fused);
        tape.backward(fused);
        out.grads = params.gradients();
        return out;
    }

    WindowSlots slots;
    for (int l = 0; l < win.length(); ++l) {
        Matrix p(1, 2);
        if (win.mask[l]) {
            p.v[0] = win.points[l][0];
            p.v[1] = win.points[l][1];
            slots.state.push_back(SlotState::Observed);
            slots.point_vars.push_back(tape.constant(std::move(p)));
        } else if (auto it = st.imputed.find(l); it != st.imputed.end()) {
            p.v[0] = it->second[0];
            p.v[1] = it->second[1];
            slots.state.push_back(SlotState::Imputed);
            slots.point_vars.push_back(tape.constant(std::move(p)));
        } else {
            slots.state.push_back(SlotState::Missing);
            slots.point_vars.push_back(Var{});
        }
    }
    std::map<int, Var> ymis_rows;
    for (const auto& [idx, m] : st.ymis_values) ymis_rows[idx] = tape.constant(m);
    std::optional<Var> yobs_cache;
    if (!fwd.reencode_per_cycle && st.yobs_value.has_value())
        yobs_cache = tape.constant(*st.yobs_value);

    CycleResult cr = forward_cycle(tape, win, params, fwd, slots, st.remaining, yobs_cache);
    Var li = loss_imp(tape, cr.new_coords, cr.batch, win, loss.squared_loss);
    for (size_t i = 0; i < cr.batch.size(); ++i) ymis_rows[cr.batch[i]] = cr.new_ymis[i];
    Var pred = prediction_forward(tape, cr.y_obs, ymis_rows, win.mask, params, fwd, false);
    Var lp = loss_pre(tape, pred, win.target, loss.squared_loss);
    std::optional<Var> lv = loss_vel(tape, win, slots, loss.vel_literal);
    Var fused = fuse(tape, li, lp, lv, loss.weights);

    out.report.l_imp = scalar(li);
    out.report.l_pre = scalar(lp);
    out.report.l_vel = lv.has_value() ? scalar(*lv) : 0.0;
    out.report.l_learn = scalar(fused);
    tape.backward(fused);
    out.grads = params.gradients();

    for (size_t i = 0; i < cr.batch.size(); ++i) {
        const Matrix& c = cr.new_coords[i].value();
        st.imputed[cr.batch[i]] = {c.v[0], c.v[1]};
        st.ymis_values[cr.batch[i]] = cr.new_ymis[i].value();
    }
    if (!fwd.reencode_per_cycle && !st.yobs_value.has_value()) st.yobs_value = cr.y_obs.value();
    return out;
}

struct ReportAccum {
    LossReport sum;
    int items = 0;

    void add(const LossReport& r) {
        sum.l_imp += r.l_imp;
        sum.l_pre += r.l_pre;
        sum.l_vel += r.l_vel;
        sum.l_learn += r.l_learn;
        items += 1;
    }
    LossReport mean() const {
        LossReport r = sum;
        if (items > 0) {
            r.l_imp /= items;
            r.l_pre /= items;
            r.l_vel /= items;
            r.l_learn /= items;
        }
        return r;
    }
};

}  // namespace

GradSet first_cycle_gradient(const std::vector<TrajectoryWindow>& batch,
                             const ParamStore& params, const ForwardConfig& fwd,
                             const LossConfig& loss) {
    GradSet sum(params);
    for (const TrajectoryWindow& w : batch) {
        WindowState st(w);
        CycleStep step = run_cycle_step(st, params, fwd, loss);
        sum.add_scaled(step.grads, 1.0);
    }
    if (!batch.empty()) sum.scale(1.0 / static_cast<double>(batch.size()));
    return sum;
}

TrainResult train(const std::vector<TrajectoryWindow>& train_set,
                  const std::vector<TrajectoryWindow>& test_set, const TrainConfig& cfg) {
    cfg.validate();
    if (train_set.empty()) throw ContractError("train: empty train set");

    TrainResult result{make_model_params(cfg.forward.model, cfg.seed), {}};
    AdamState astate;

    std::vector<int> order(train_set.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        Rng shuffle_rng(mix_seed(cfg.seed, 0x5eed0000ULL + epoch));
        std::shuffle(order.begin(), order.end(), shuffle_rng.engine());
        ReportAccum acc;

        for (size_t b0 = 0; b0 < order.size(); b0 += cfg.batch_size) {
            const size_t b1 = std::min(order.size(), b0 + cfg.batch_size);

            if (cfg.step_per_window) {
                GradSet sum(result.params);
                int n = 0;
                for (size_t i = b0; i < b1; ++i) {
                    Tape tape;
                    Bound bound(tape, result.params);
                    WindowForward wf = training_forward_window(tape, train_set[order[i]], bound,
                                                               cfg.forward, cfg.loss);
                    tape.backward(wf.total);
                    sum.add_scaled(bound.gradients(), 1.0);
                    acc.add(wf.report);
                    ++n;
                }
                sum.scale(1.0 / n);
                sum.clip_global_norm(cfg.grad_clip);
                adam_step(result.params, sum, astate, cfg.adam);
                continue;
            }

            std::vector<WindowState> states;
            int max_cycles = 1;
            for (size_t i = b0; i < b1; ++i) {
                states.emplace_back(train_set[order[i]]);
                const int I = static_cast<int>(states.back().remaining.size());
                const int c = (I + cfg.forward.points_per_cycle - 1) / cfg.forward.points_per_cycle;
                max_cycles = std::max(max_cycles, c);
            }
            for (int c = 0; c < max_cycles; ++c) {
                GradSet sum(result.params);
                int n = 0;
                for (WindowState& st : states) {
                    const bool active =
                        !st.remaining.empty() || (c == 0 && st.win->missing_indices().empty());
                    if (!active) continue;
                    CycleStep step = run_cycle_step(st, result.params, cfg.forward, cfg.loss);
                    sum.add_scaled(step.grads, 1.0);
                    acc.add(step.report);
                    ++n;
                }
                if (n == 0) continue;
                sum.scale(1.0 / n);
                sum.clip_global_norm(cfg.grad_clip);
                adam_step(result.params, sum, astate, cfg.adam);
            }
        }

        EpochLog log;
        log.epoch = epoch;
        log.train = acc.mean();
        if (epoch % cfg.eval_every == 0 || epoch == cfg.epochs) {
            if (!test_set.empty()) {
                EvalMetrics m =
                    evaluate_dataset(test_set, result.params, cfg.forward, cfg.loss.squared_loss);
                log.test_l_imp = m.l_imp;
                log.test_l_pre = m.l_pre;
            }
        }
        result.log.push_back(log);
    }
    return result;
}

EvalMetrics evaluate_dataset(const std::vector<TrajectoryWindow>& set, const ParamStore& params,
                             const ForwardConfig& fwd, bool squared) {
    EvalMetrics m;
    for (const TrajectoryWindow& w : set) {
        EvalOutputs out = evaluate_window(w, params, fwd);
        const double dx = out.prediction[0] - w.target[0];
        const double dy = out.prediction[1] - w.target[1];
        double dp = std::sqrt(dx * dx + dy * dy);
        if (squared) dp *= dp;
        m.l_pre += dp;
        m.windows += 1;
        if (!out.imputed.empty()) {
            double s = 0.0;
            for (const auto& [idx, p] : out.imputed) {
                const double ix = p[0] - w.points[idx][0];
                const double iy = p[1] - w.points[idx][1];
                double d = std::sqrt(ix * ix + iy * iy);
                if (squared) d *= d;
                s += d;
            }
            m.l_imp += s / static_cast<double>(out.imputed.size());
            m.imp_windows += 1;
        }
    }
    if (m.windows > 0) m.l_pre /= m.windows;
    if (m.imp_windows > 0) m.l_imp /= m.imp_windows;
    return m;
}

}  // namespace ingrain
