#include "ingrain/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "ingrain/losses.hpp"
#include "ingrain/model.hpp"
#include "ingrain/rng.hpp"

namespace ingrain {

std::map<int, Point> knn_linear_impute(const TrajectoryWindow& window, int k) {
    if (k < 1) throw ContractError("knn_linear_impute: k must be >= 1");
    std::vector<int> observed;
    for (int i = 0; i < window.length(); ++i)
        if (window.mask[i]) observed.push_back(i);
    if (static_cast<int>(observed.size()) < 2)
        throw ContractError("knn_linear_impute: need >= 2 observed points");
    if (k > static_cast<int>(observed.size()))
        throw ContractError("knn_linear_impute: k exceeds observed count");

    std::map<int, Point> out;
    for (int idx = 0; idx < window.length(); ++idx) {
        if (window.mask[idx]) continue;
        const int t = window.frames[idx];
        std::vector<int> nbrs = observed;
        std::stable_sort(nbrs.begin(), nbrs.end(), [&](int a, int b) {
            const int da = std::abs(window.frames[a] - t);
            const int db = std::abs(window.frames[b] - t);
            if (da != db) return da < db;
            return window.frames[a] < window.frames[b];  // ties toward smaller frame
        });
        nbrs.resize(k);

        bool degenerate = true;
        for (int n : nbrs)
            if (window.frames[n] != window.frames[nbrs[0]]) degenerate = false;
        Point p{0.0, 0.0};
        if (degenerate) {
            for (int n : nbrs) {
                p[0] += window.points[n][0];
                p[1] += window.points[n][1];
            }
            p[0] /= k;
            p[1] /= k;
        } else {
            // least squares coordinate = a + b * frame, per axis
            double sx = 0, sxx = 0;
            for (int n : nbrs) {
                sx += window.frames[n];
                sxx += static_cast<double>(window.frames[n]) * window.frames[n];
            }
            const double det = k * sxx - sx * sx;
            for (int axis = 0; axis < 2; ++axis) {
                double sy = 0, sxy = 0;
                for (int n : nbrs) {
                    sy += window.points[n][axis];
                    sxy += window.frames[n] * window.points[n][axis];
                }
                const double a = (sxx * sy - sx * sxy) / det;
                const double b = (k * sxy - sx * sy) / det;
                p[axis] = a + b * t;
            }
        }
        out[idx] = p;
    }
    return out;
}

std::map<int, Point> linear_interp_impute(const TrajectoryWindow& window) {
    std::vector<int> observed;
    for (int i = 0; i < window.length(); ++i)
        if (window.mask[i]) observed.push_back(i);
    if (observed.empty()) throw ContractError("linear_interp_impute: no observed points");

    std::map<int, Point> out;
    for (int idx = 0; idx < window.length(); ++idx) {
        if (window.mask[idx]) continue;
        const int t = window.frames[idx];
        // nearest observed frames below and above
        int lo = -1, hi = -1;
        for (int o : observed) {
            if (window.frames[o] <= t) lo = o;
            if (window.frames[o] >= t && hi < 0) hi = o;
        }
        Point p{0.0, 0.0};
        if (lo < 0) {
            p = window.points[hi];
        } else if (hi < 0) {
            p = window.points[lo];
        } else if (lo == hi) {
            p = window.points[lo];
        } else {
            const double w = static_cast<double>(t - window.frames[lo]) /
                             (window.frames[hi] - window.frames[lo]);
            for (int axis = 0; axis < 2; ++axis)
                p[axis] = window.points[lo][axis] +
                          w * (window.points[hi][axis] - window.points[lo][axis]);
        }
        out[idx] = p;
    }
    return out;
}

Point persistence_predict(const TrajectoryWindow& window) {
    for (int i = window.length() - 1; i >= 0; --i)
        if (window.mask[i]) return window.points[i];
    throw ContractError("persistence_predict: no observed points");
}

namespace {

ParamStore make_sgru_params(int hidden_dim, uint64_t seed) {
    ParamStore s;
    int c = 0;
    auto lin = [&](const std::string& name, int r, int cols) {
        s.add(name, init_linear(r, cols, mix_seed(seed, 0xba5e0000ULL + c++)));
    };
    auto zero = [&](const std::string& name, int r, int cols) {
        s.add(name, Matrix::zeros(r, cols));
        ++c;
    };
    for (int layer = 0; layer < 2; ++layer) {
        const std::string p = "sgru" + std::to_string(layer);
        const int in = layer == 0 ? 3 : hidden_dim;
        lin(p + ".Wfx", in, hidden_dim);
        lin(p + ".Wfh", hidden_dim, hidden_dim);
        zero(p + ".bf", 1, hidden_dim);
        lin(p + ".Wrx", in, hidden_dim);
        lin(p + ".Wrh", hidden_dim, hidden_dim);
        zero(p + ".br", 1, hidden_dim);
        lin(p + ".Wcx", in, hidden_dim);
        lin(p + ".Wch", hidden_dim, hidden_dim);
        zero(p + ".bc", 1, hidden_dim);
    }
    lin("head.W", hidden_dim, 2);
    zero("head.b", 1, 2);
    return s;
}

Matrix window_input(const TrajectoryWindow& w) {
    Matrix x(w.length(), 3);
    for (int l = 0; l < w.length(); ++l) {
        if (w.mask[l]) {
            x.at(l, 0) = w.points[l][0];
            x.at(l, 1) = w.points[l][1];
            x.at(l, 2) = 1.0;
        }
    }
    return x;
}

Var sgru_forward(Tape& tape, const TrajectoryWindow& w, const Bound& params, int hidden_dim) {
    Var x = tape.constant(window_input(w));
    std::vector<Var> h1 = gru_forward(tape, x, params, "sgru0", hidden_dim);
    Var stacked = tape.concat_rows(h1);
    std::vector<Var> h2 = gru_forward(tape, stacked, params, "sgru1", hidden_dim);
    return tape.add_rowvec(tape.matmul(h2.back(), params["head.W"]), params["head.b"]);
}

}  // namespace

Point sgru_predict(const TrajectoryWindow& window, const ParamStore& params, int hidden_dim) {
    Tape tape;
    Bound bound(tape, params);
    Var pred = sgru_forward(tape, window, bound, hidden_dim);
    return {pred.value().v[0], pred.value().v[1]};
}

SgruResult sgru_predict_baseline(const std::vector<TrajectoryWindow>& train_set,
                                 const std::vector<TrajectoryWindow>& test_set,
                                 const SgruConfig& cfg) {
    if (train_set.empty()) throw ContractError("sgru_predict_baseline: empty train set");
    SgruResult res{make_sgru_params(cfg.hidden_dim, cfg.seed), 0.0, {}};
    AdamState astate;
    AdamConfig adam;
    adam.lr = cfg.lr;

    std::vector<int> order(train_set.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        Rng rng(mix_seed(cfg.seed, 0x59e40000ULL + epoch));
        std::shuffle(order.begin(), order.end(), rng.engine());
        double epoch_loss = 0.0;
        int items = 0;
        for (size_t b0 = 0; b0 < order.size(); b0 += cfg.batch_size) {
            const size_t b1 = std::min(order.size(), b0 + cfg.batch_size);
            GradSet sum(res.params);
            int n = 0;
            for (size_t i = b0; i < b1; ++i) {
                Tape tape;
                Bound bound(tape, res.params);
                const TrajectoryWindow& w = train_set[order[i]];
                Var pred = sgru_forward(tape, w, bound, cfg.hidden_dim);
                Var lp = loss_pre(tape, pred, w.target, false);
                epoch_loss += lp.value().v[0];
                ++items;
                tape.backward(lp);
                sum.add_scaled(bound.gradients(), 1.0);
                ++n;
            }
            sum.scale(1.0 / n);
            sum.clip_global_norm(cfg.grad_clip);
            adam_step(res.params, sum, astate, adam);
        }
        res.train_loss_per_epoch.push_back(items ? epoch_loss / items : 0.0);
    }

    double s = 0.0;
    for (const TrajectoryWindow& w : test_set) {
        const Point p = sgru_predict(w, res.params, cfg.hidden_dim);
        const double dx = p[0] - w.target[0];
        const double dy = p[1] - w.target[1];
        s += std::sqrt(dx * dx + dy * dy);
    }
    res.test_l_pre = test_set.empty() ? 0.0 : s / static_cast<double>(test_set.size());
    return res;
}

}  // namespace ingrain
