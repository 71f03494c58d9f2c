#include "ingrain/losses.hpp"

#include <cmath>

namespace ingrain {

Var loss_imp(Tape& tape, const std::vector<Var>& imputed, const std::vector<int>& indices,
             const TrajectoryWindow& win, bool squared) {
    if (imputed.empty() || imputed.size() != indices.size())
        throw ContractError("loss_imp: index set empty or mismatched");
    std::vector<Var> diffs;
    for (size_t i = 0; i < imputed.size(); ++i) {
        Matrix t(1, 2);
        t.v[0] = win.points[indices[i]][0];
        t.v[1] = win.points[indices[i]][1];
        diffs.push_back(tape.sub(imputed[i], tape.constant(std::move(t))));
    }
    Var norms = tape.row_norms(tape.concat_rows(diffs));
    if (squared) norms = tape.mul(norms, norms);
    return tape.mean_all(norms);
}

Var loss_pre(Tape& tape, Var predicted, Point target, bool squared) {
    Matrix t(1, 2);
    t.v[0] = target[0];
    t.v[1] = target[1];
    Var n = tape.row_norms(tape.sub(predicted, tape.constant(std::move(t))));
    if (squared) n = tape.mul(n, n);
    return tape.mean_all(n);
}

namespace {

/// Piecewise-linear interpolation of (x_i, y_i) samples at x, constant beyond
/// the ends. Samples must be sorted by x.
double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    for (size_t i = 1; i < xs.size(); ++i)
        if (x <= xs[i]) {
            const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            return ys[i - 1] + w * (ys[i] - ys[i - 1]);
        }
    return ys.back();
}

Var segment_speed(Tape& tape, Var a, Var b, double dt) {
    return tape.scale(tape.row_norms(tape.sub(b, a)), 1.0 / dt);
}

}  // namespace

std::optional<Var> loss_vel(Tape& tape, const TrajectoryWindow& win, const WindowSlots& slots,
                            bool literal) {
    const int L = win.length();
    if (L < 2) return std::nullopt;

    if (literal) {
        // Speeds of the difference sequence (observed-or-zero minus imputed
        // fill) against speeds of the filled sequence, over known segments.
        std::vector<Var> terms;
        for (int l = 0; l + 1 < L; ++l) {
            if (slots.state[l] == SlotState::Missing || slots.state[l + 1] == SlotState::Missing)
                continue;
            const double dt = win.frames[l + 1] - win.frames[l];
            auto diff_point = [&](int i) {
                Matrix obs(1, 2);
                if (win.mask[i]) {
                    obs.v[0] = win.points[i][0];
                    obs.v[1] = win.points[i][1];
                }
                return tape.sub(tape.constant(std::move(obs)), slots.point_vars[i]);
            };
            Var v = segment_speed(tape, diff_point(l), diff_point(l + 1), dt);
            Var vhat = segment_speed(tape, slots.point_vars[l], slots.point_vars[l + 1], dt);
            terms.push_back(tape.abs_(tape.sub(vhat, v)));
        }
        if (terms.empty()) return std::nullopt;
        return tape.mean_all(tape.concat_rows(terms));
    }

    // Observed reference speeds between consecutive observed points, indexed
    // by midpoint frame.
    std::vector<double> mid_frames, speeds;
    int prev = -1;
    for (int l = 0; l < L; ++l) {
        if (!win.mask[l]) continue;
        if (prev >= 0) {
            const double dt = win.frames[l] - win.frames[prev];
            const double dx = win.points[l][0] - win.points[prev][0];
            const double dy = win.points[l][1] - win.points[prev][1];
            mid_frames.push_back(0.5 * (win.frames[prev] + win.frames[l]));
            speeds.push_back(std::sqrt(dx * dx + dy * dy) / dt);
        }
        prev = l;
    }
    if (mid_frames.empty()) return std::nullopt;

    std::vector<Var> terms;
    for (int l = 0; l + 1 < L; ++l) {
        if (slots.state[l] == SlotState::Missing || slots.state[l + 1] == SlotState::Missing)
            continue;
        if (slots.state[l] != SlotState::Imputed && slots.state[l + 1] != SlotState::Imputed)
            continue;
        const double dt = win.frames[l + 1] - win.frames[l];
        const double mid = 0.5 * (win.frames[l] + win.frames[l + 1]);
        const double v_ref = interp(mid_frames, speeds, mid);
        Var vhat = segment_speed(tape, slots.point_vars[l], slots.point_vars[l + 1], dt);
        Matrix ref(1, 1);
        ref.v[0] = v_ref;
        terms.push_back(tape.abs_(tape.sub(vhat, tape.constant(std::move(ref)))));
    }
    if (terms.empty()) return std::nullopt;
    return tape.mean_all(tape.concat_rows(terms));
}

Var fuse(Tape& tape, std::optional<Var> l_imp, std::optional<Var> l_pre,
         std::optional<Var> l_vel, const LossWeights& w) {
    w.validate();
    std::optional<Var> total;
    auto accumulate = [&](const std::optional<Var>& term, double lambda) {
        if (!term.has_value() || lambda == 0.0) return;
        Var scaled = tape.scale(*term, lambda);
        total = total.has_value() ? tape.add(*total, scaled) : scaled;
    };
    accumulate(l_imp, w.lambda_imp);
    accumulate(l_pre, w.lambda_pre);
    accumulate(l_vel, w.lambda_vel);
    if (!total.has_value()) total = tape.constant(Matrix::zeros(1, 1));
    return *total;
}

}  // namespace ingrain
