// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run via ctest or directly; prints timing per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ingrain.h"
#include "ingrain/baselines.hpp"
#include "ingrain/config.hpp"
#include "ingrain/model_io.hpp"
#include "ingrain/rng.hpp"
#include "ingrain/runner.hpp"
#include "ingrain/train.hpp"

using namespace ingrain;

namespace {

int g_failures = 0;

void report(int id, const char* what, bool ok, const std::string& detail = "") {
    std::printf("[%s] %2d %s%s%s\n", ok ? "PASS" : "FAIL", id, what,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

Matrix rand_matrix(int rows, int cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Matrix m(rows, cols);
    for (double& e : m.v) e = rng.uniform(lo, hi);
    return m;
}

TrajectoryWindow random_window(Rng& rng, int L, int missing) {
    TrajectoryWindow w;
    w.user_id = "acc";
    for (int i = 0; i < L; ++i) {
        w.points.push_back({rng.uniform(), rng.uniform()});
        w.frames.push_back(i);
    }
    w.target = {rng.uniform(), rng.uniform()};
    w.mask.assign(L, true);
    std::vector<int> idx(L);
    for (int i = 0; i < L; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng.engine());
    for (int i = 0; i < missing; ++i) w.mask[idx[i]] = false;
    return w;
}

double matrix_rel_err(const Matrix& a, const Matrix& b) {
    double d = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double x = a.v[i] - b.v[i];
        d += x * x;
        na += a.v[i] * a.v[i];
        nb += b.v[i] * b.v[i];
    }
    return std::sqrt(d) / (std::sqrt(na) + std::sqrt(nb) + 1e-12);
}

ForwardConfig desk_forward(int D, int heads, int layers, int hidden, int n) {
    ForwardConfig f;
    f.model.embed_dim = D;
    f.model.heads = heads;
    f.model.layers = layers;
    f.model.hidden_dim = hidden;
    f.points_per_cycle = n;
    return f;
}

// 1. Analytic gradients of the full training objective (imputation cycles,
//    supplement, GRU prediction, velocity term) match central differences.
void criterion_1() {
    Timer timer;
    ForwardConfig fwd = desk_forward(8, 2, 1, 8, 2);
    ParamStore store = make_model_params(fwd.model, 41);
    LossConfig loss;  // all three lambdas at 1
    Rng rng(41);
    TrajectoryWindow w = random_window(rng, 6, 3);

    auto objective = [&](const ParamStore& s) {
        Tape tape;
        Bound params(tape, s);
        return tape.value(training_forward_window(tape, w, params, fwd, loss).total).v[0];
    };

    Tape tape;
    Bound params(tape, store);
    WindowForward out = training_forward_window(tape, w, params, fwd, loss);
    tape.backward(out.total);
    GradSet analytic = params.gradients();

    const double step = 1e-5;
    double worst = 0.0;
    std::string worst_name;
    for (int p = 0; p < store.count(); ++p) {
        Matrix& value = store.entry(p).value;
        Matrix fd(value.rows, value.cols);
        for (size_t i = 0; i < value.size(); ++i) {
            const double orig = value.v[i];
            value.v[i] = orig + step;
            const double hi = objective(store);
            value.v[i] = orig - step;
            const double lo = objective(store);
            value.v[i] = orig;
            fd.v[i] = (hi - lo) / (2.0 * step);
        }
        const double err = matrix_rel_err(analytic.grads[p], fd);
        if (err > worst) {
            worst = err;
            worst_name = store.entry(p).name;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "max rel err %.2e (%s), %.1fs", worst, worst_name.c_str(),
                  timer.seconds());
    report(1, "full-model gradient check vs central differences < 1e-3", worst < 1e-3, buf);
}

// 2. Every attention weight row sums to 1 across 100 random model forwards.
void criterion_2() {
    ForwardConfig fwd = desk_forward(8, 2, 2, 8, 2);
    ParamStore store = make_model_params(fwd.model, 42);
    Rng rng(42);
    double worst = 0.0;
    long rows = 0;
    for (int rep = 0; rep < 100; ++rep) {
        TrajectoryWindow w = random_window(rng, 4 + rng.index(5), 1 + rng.index(3));
        AttentionProbe probe;
        Tape tape;
        Bound params(tape, store);
        run_imputation_cycles(tape, w, params, fwd, &probe);
        for (const Matrix& m : probe)
            for (int i = 0; i < m.rows; ++i) {
                double sum = 0.0;
                for (int j = 0; j < m.cols; ++j) sum += m.at(i, j);
                worst = std::max(worst, std::abs(sum - 1.0));
                ++rows;
            }
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "%ld rows, worst |sum-1| = %.2e", rows, worst);
    report(2, "attention rows sum to 1 within 1e-6 over 100 forwards", worst < 1e-6 && rows > 0,
           buf);
}

// 3. The imputation loop always takes exactly ceil(I/n) cycles and imputes
//    every missing index exactly once (10,000 random cases).
void criterion_3() {
    ForwardConfig fwd = desk_forward(4, 2, 1, 4, 1);
    ParamStore store = make_model_params(fwd.model, 43);
    Rng rng(43);
    int bad = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        const int L = 2 + rng.index(6);
        const int I = rng.index(L);  // keep at least one observed point
        const int n = 1 + rng.index(5);
        fwd.points_per_cycle = n;
        TrajectoryWindow w = random_window(rng, L, I);
        Tape tape;
        Bound params(tape, store);
        ImputationRun run = run_imputation_cycles(tape, w, params, fwd);
        const int expect = (I + n - 1) / n;
        bool ok = run.cycles == expect && static_cast<int>(run.imputed.size()) == I;
        for (int idx : w.missing_indices())
            if (!run.imputed.count(idx)) ok = false;
        if (!ok) ++bad;
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%d/10000 violations", bad);
    report(3, "cycle count equals ceil(missing/points_per_cycle)", bad == 0, buf);
}

// 4. Supplement: replace keeps observed rows bit-identical; add with all-zero
//    decoder rows reproduces Y_obs bit-identically.
void criterion_4() {
    Rng rng(44);
    bool ok = true;
    for (int rep = 0; rep < 200; ++rep) {
        const int L = 3 + rng.index(6), D = 4 + rng.index(5);
        Matrix yobs = rand_matrix(L, D, rng);
        std::vector<bool> mask;
        for (int l = 0; l < L; ++l) mask.push_back(rng.uniform() < 0.6);

        Tape tape;
        std::map<int, Var> filled, zeros;
        for (int l = 0; l < L; ++l)
            if (!mask[l]) {
                filled[l] = tape.constant(rand_matrix(1, D, rng));
                zeros[l] = tape.constant(Matrix::zeros(1, D));
            }
        Var rep_out = supplement(tape, tape.constant(yobs), filled, mask,
                                 SupplementMode::Replace, true);
        Var add_out = supplement(tape, tape.constant(yobs), zeros, mask,
                                 SupplementMode::Add, true);
        for (int l = 0; l < L; ++l)
            for (int j = 0; j < D; ++j) {
                if (mask[l] && rep_out.value().at(l, j) != yobs.at(l, j)) ok = false;
                if (add_out.value().at(l, j) != yobs.at(l, j)) ok = false;
            }
    }
    report(4, "supplement replace/add identities hold bit-exactly", ok);
}

// 5. GRU recurrence: a saturated forget gate freezes h at h_0 exactly, and a
//    50-step scalar GRU matches an independent recurrence to 1e-12.
void criterion_5() {
    ParamStore frozen;
    frozen.add("gru.Wfx", Matrix::zeros(2, 1));
    frozen.add("gru.Wfh", Matrix::zeros(1, 1));
    frozen.add("gru.bf", Matrix(1, 1, {1000.0}));
    frozen.add("gru.Wrx", Matrix(2, 1, {0.5, -0.5}));
    frozen.add("gru.Wrh", Matrix(1, 1, {0.2}));
    frozen.add("gru.br", Matrix::zeros(1, 1));
    frozen.add("gru.Wcx", Matrix(2, 1, {1.0, 1.0}));
    frozen.add("gru.Wch", Matrix(1, 1, {0.3}));
    frozen.add("gru.bc", Matrix::zeros(1, 1));

    Rng rng(45);
    bool frozen_ok = true;
    {
        Tape tape;
        Bound params(tape, frozen);
        Var seq = tape.constant(rand_matrix(20, 2, rng));
        for (Var h : gru_forward(tape, seq, params, "gru", 1))
            if (h.value().v[0] != 0.0) frozen_ok = false;
    }

    ParamStore scal;
    scal.add("gru.Wfx", Matrix(2, 1, {0.7, -0.3}));
    scal.add("gru.Wfh", Matrix(1, 1, {0.2}));
    scal.add("gru.bf", Matrix(1, 1, {0.1}));
    scal.add("gru.Wrx", Matrix(2, 1, {-0.4, 0.6}));
    scal.add("gru.Wrh", Matrix(1, 1, {-0.1}));
    scal.add("gru.br", Matrix(1, 1, {0.05}));
    scal.add("gru.Wcx", Matrix(2, 1, {0.9, -0.8}));
    scal.add("gru.Wch", Matrix(1, 1, {0.3}));
    scal.add("gru.bc", Matrix(1, 1, {-0.2}));
    Matrix seq = rand_matrix(50, 2, rng);

    double worst = 0.0;
    {
        Tape tape;
        Bound params(tape, scal);
        std::vector<Var> hs = gru_forward(tape, tape.constant(seq), params, "gru", 1);
        auto sigm = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
        double h = 0.0;
        for (int t = 0; t < 50; ++t) {
            const double x0 = seq.at(t, 0), x1 = seq.at(t, 1);
            const double f = sigm(0.7 * x0 - 0.3 * x1 + 0.2 * h + 0.1);
            const double r = sigm(-0.4 * x0 + 0.6 * x1 - 0.1 * h + 0.05);
            const double c = std::tanh(0.9 * x0 - 0.8 * x1 + r * (0.3 * h) - 0.2);
            h = (1.0 - f) * c + f * h;
            worst = std::max(worst, std::abs(hs[t].value().v[0] - h));
        }
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), "50-step max deviation %.2e", worst);
    report(5, "GRU gate identity and 50-step scalar oracle", frozen_ok && worst < 1e-12, buf);
}

std::vector<TrajectoryWindow> smooth_windows(int count, int L, double missing_rate,
                                             uint64_t seed) {
    std::vector<TrajectoryWindow> out;
    std::vector<Point> walk = smooth_walk_positions(count * (L + 1) + 1, 0.05, seed);
    // scale into the unit box so coordinates match the parameter init scale
    double xmin = walk[0][0], xmax = walk[0][0], ymin = walk[0][1], ymax = walk[0][1];
    for (const Point& p : walk) {
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    for (Point& p : walk) p = {(p[0] - xmin) / span, (p[1] - ymin) / span};
    for (int s = 0; s < count; ++s) {
        TrajectoryWindow w;
        w.user_id = "walk";
        w.window_index = s;
        for (int i = 0; i < L; ++i) {
            w.points.push_back(walk[s * (L + 1) + i]);
            w.frames.push_back(i);
        }
        w.target = walk[s * (L + 1) + L];
        MaskSpec spec{missing_rate, MaskDistribution::Uniform, mix_seed(seed, s)};
        w.mask = generate_mask(L, spec);
        out.push_back(std::move(w));
    }
    return out;
}

// 6. The model can overfit 10 windows: losses collapse relative to epoch 1.
void criterion_6() {
    Timer timer;
    TrainConfig cfg;
    cfg.forward = desk_forward(32, 2, 1, 32, 8);
    cfg.loss.weights = LossWeights{1.0, 1.0, 0.0};
    cfg.adam.lr = 0.003;
    cfg.epochs = 300;
    cfg.eval_every = 300;
    cfg.batch_size = 10;
    cfg.seed = 46;

    std::vector<TrajectoryWindow> data = smooth_windows(10, 10, 0.5, 46);
    TrainResult res = train(data, {}, cfg);
    const LossReport first = res.log.front().train;
    const LossReport last = res.log.back().train;
    const bool ok = last.l_imp <= 0.05 * first.l_imp && last.l_pre <= 0.10 * first.l_pre;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "l_imp %.4g -> %.4g, l_pre %.4g -> %.4g, %.1fs",
                  first.l_imp, last.l_imp, first.l_pre, last.l_pre, timer.seconds());
    report(6, "overfits 10 windows (l_imp to 5%, l_pre to 10% of epoch 1)", ok, buf);
}

/// Circular motion with per-window random phase and small positional noise:
/// a learnable global pattern whose curvature defeats straight-line fills.
std::vector<TrajectoryWindow> loop_windows(int count, int L, double missing_rate,
                                           uint64_t seed) {
    std::vector<TrajectoryWindow> out;
    Rng rng(seed);
    const double period = 10.0, radius = 0.3, noise = 0.01;
    for (int s = 0; s < count; ++s) {
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        TrajectoryWindow w;
        w.user_id = "loop";
        w.window_index = s;
        auto at = [&](int t) {
            const double a = phase + 2.0 * std::numbers::pi * t / period;
            return Point{0.5 + radius * std::cos(a) + noise * rng.gaussian(),
                         0.5 + radius * std::sin(a) + noise * rng.gaussian()};
        };
        for (int i = 0; i < L; ++i) {
            w.points.push_back(at(i));
            w.frames.push_back(i);
        }
        w.target = at(L);
        MaskSpec spec{missing_rate, MaskDistribution::Uniform, mix_seed(seed, 7000 + s)};
        w.mask = generate_mask(L, spec);
        out.push_back(std::move(w));
    }
    return out;
}

// 7. Trained models beat linear interpolation on imputation and persistence
//    on prediction, per seed, on held-out windows.
void criterion_7() {
    Timer timer;
    std::vector<TrajectoryWindow> all = loop_windows(500, 20, 0.5, 47);
    auto [train_set, test_set] = split(all, 0.8, 47);

    double la_imp = 0.0, la_pre = 0.0;
    int imp_windows = 0;
    for (const TrajectoryWindow& w : test_set) {
        std::map<int, Point> li = linear_interp_impute(w);
        if (!li.empty()) {
            double s = 0.0;
            for (const auto& [idx, p] : li) {
                const double dx = p[0] - w.points[idx][0], dy = p[1] - w.points[idx][1];
                s += std::sqrt(dx * dx + dy * dy);
            }
            la_imp += s / static_cast<double>(li.size());
            ++imp_windows;
        }
        const Point pp = persistence_predict(w);
        const double dx = pp[0] - w.target[0], dy = pp[1] - w.target[1];
        la_pre += std::sqrt(dx * dx + dy * dy);
    }
    la_imp /= imp_windows;
    la_pre /= static_cast<double>(test_set.size());

    TrainConfig cfg;
    cfg.forward = desk_forward(32, 2, 1, 32, 4);
    cfg.loss.weights = LossWeights{1.0, 1.0, 0.1};
    cfg.adam.lr = 0.002;
    cfg.epochs = 60;
    cfg.eval_every = 60;
    cfg.batch_size = 70;

    int wins = 0;
    std::string detail;
    for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        cfg.seed = seed;
        TrainResult res = train(train_set, {}, cfg);
        EvalMetrics m = evaluate_dataset(test_set, res.params, cfg.forward, false);
        const bool win = m.l_imp < la_imp && m.l_pre < la_pre;
        wins += win ? 1 : 0;
        char buf[120];
        std::snprintf(buf, sizeof(buf), "seed %llu: imp %.4g%s%.4g pre %.4g%s%.4g; ",
                      static_cast<unsigned long long>(seed), m.l_imp, m.l_imp < la_imp ? "<" : ">=",
                      la_imp, m.l_pre, m.l_pre < la_pre ? "<" : ">=", la_pre);
        detail += buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.0fs", timer.seconds());
    report(7, "beats linear-interp (imputation) and persistence (prediction) on 3/3 seeds",
           wins == 3, detail + buf);
}

// 8. Loss-weight ablations leave exclusive parameters with exactly zero grad.
void criterion_8() {
    ForwardConfig fwd = desk_forward(8, 2, 1, 8, 2);
    ParamStore store = make_model_params(fwd.model, 48);
    Rng rng(48);
    std::vector<TrajectoryWindow> batch;
    for (int i = 0; i < 3; ++i) batch.push_back(random_window(rng, 6, 2 + rng.index(3)));

    auto sq = [](const Matrix& m) {
        double s = 0.0;
        for (double e : m.v) s += e * e;
        return s;
    };

    bool ok = true;
    {
        LossConfig loss;
        loss.weights = LossWeights{0.0, 1.0, 0.0};
        GradSet g = first_cycle_gradient(batch, store, fwd, loss);
        double rest = 0.0;
        for (int p = 0; p < store.count(); ++p) {
            const std::string& name = store.entry(p).name;
            if (name.rfind("impute.", 0) == 0 || name == "embed.W_mis") {
                if (sq(g.grads[p]) != 0.0) ok = false;
            } else {
                rest += sq(g.grads[p]);
            }
        }
        if (rest == 0.0) ok = false;
    }
    {
        LossConfig loss;
        loss.weights = LossWeights{1.0, 0.0, 1.0};
        GradSet g = first_cycle_gradient(batch, store, fwd, loss);
        double rest = 0.0;
        for (int p = 0; p < store.count(); ++p) {
            const std::string& name = store.entry(p).name;
            if (name.rfind("gru.", 0) == 0 || name.rfind("pred.", 0) == 0 ||
                name.rfind("nornn.", 0) == 0) {
                if (sq(g.grads[p]) != 0.0) ok = false;
            } else {
                rest += sq(g.grads[p]);
            }
        }
        if (rest == 0.0) ok = false;
    }
    report(8, "lambda ablations zero out exclusive parameter gradients exactly", ok);
}

// 9. KNN+linear imputation agrees with an independently coded normal-equation
//    solution on 1,000 random windows.
void criterion_9() {
    Rng rng(49);
    double worst = 0.0;
    int checked = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const int L = 6 + rng.index(10);
        TrajectoryWindow w = random_window(rng, L, 1 + rng.index(L / 2));
        const int k = std::min(4, w.observed_count());
        if (w.observed_count() < 2) continue;
        std::map<int, Point> imp = knn_linear_impute(w, k);
        for (const auto& [idx, p] : imp) {
            // independent oracle: pick neighbours, then solve the 2x2 system
            std::vector<int> obs;
            for (int i = 0; i < L; ++i)
                if (w.mask[i]) obs.push_back(i);
            std::stable_sort(obs.begin(), obs.end(), [&](int a, int b) {
                const int da = std::abs(w.frames[a] - w.frames[idx]);
                const int db = std::abs(w.frames[b] - w.frames[idx]);
                if (da != db) return da < db;
                return w.frames[a] < w.frames[b];
            });
            obs.resize(k);
            const double n = k;
            double sx = 0, sxx = 0;
            for (int i : obs) {
                sx += w.frames[i];
                sxx += static_cast<double>(w.frames[i]) * w.frames[i];
            }
            for (int axis = 0; axis < 2; ++axis) {
                double sy = 0, sxy = 0;
                for (int i : obs) {
                    sy += w.points[i][axis];
                    sxy += w.frames[i] * w.points[i][axis];
                }
                const double det = n * sxx - sx * sx;
                double expect;
                if (std::abs(det) < 1e-12) {
                    expect = sy / n;
                } else {
                    const double b = (n * sxy - sx * sy) / det;
                    const double a = (sy - b * sx) / n;
                    expect = a + b * w.frames[idx];
                }
                worst = std::max(worst, std::abs(p[axis] - expect));
            }
            ++checked;
        }
    }
    char buf[100];
    std::snprintf(buf, sizeof(buf), "%d imputations, worst abs dev %.2e", checked, worst);
    report(9, "knn imputer matches independent normal equations within 1e-9",
           worst < 1e-9 && checked > 500, buf);
}

// 10. Two identical training runs through the C API write byte-identical
//     model and log files.
void criterion_10() {
    Timer timer;
    namespace fs = std::filesystem;
    const std::string work = "/tmp/ingrain_acceptance_c10";
    fs::remove_all(work);
    fs::create_directories(work);

    ingrain_config* cfg = nullptr;
    bool ok = ingrain_config_create(&cfg) == INGRAIN_OK;
    const char* kv[][2] = {
        {"walker_count", "2"}, {"points_per_walker", "40"}, {"L", "6"},
        {"stride", "6"},       {"embed_dim", "8"},          {"heads", "2"},
        {"layers", "1"},       {"hidden_dim", "8"},         {"epochs", "3"},
        {"eval_every", "1"},   {"seeds", "1,2"},            {"batch", "8"},
    };
    for (auto& [k, v] : kv) ok = ok && ingrain_config_set(cfg, k, v) == INGRAIN_OK;

    const std::string data = work + "/data.csv";
    ok = ok && ingrain_synth(cfg, data.c_str()) == INGRAIN_OK;
    ok = ok && ingrain_train(cfg, data.c_str(), (work + "/a").c_str(), nullptr) == INGRAIN_OK;
    ok = ok && ingrain_train(cfg, data.c_str(), (work + "/b").c_str(), nullptr) == INGRAIN_OK;

    auto same = [&](const std::string& rel) {
        std::ifstream fa(work + "/a/" + rel, std::ios::binary);
        std::ifstream fb(work + "/b/" + rel, std::ios::binary);
        if (!fa || !fb) return false;
        std::ostringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        return sa.str() == sb.str() && !sa.str().empty();
    };
    for (const char* rel : {"model_seed1.bin", "model_seed2.bin", "train_log_seed1.csv",
                            "train_log_seed2.csv"})
        ok = ok && same(rel);
    ingrain_config_destroy(cfg);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.1fs", timer.seconds());
    report(10, "repeated training runs are byte-identical", ok, buf);
}

// 11. Uniform masks hit the requested missing fraction within 0.02.
void criterion_11() {
    bool ok = true;
    std::string detail;
    for (double rate : {0.2, 0.5, 0.8}) {
        long missing = 0;
        const int L = 20, trials = 10000;
        for (int t = 0; t < trials; ++t) {
            MaskSpec spec{rate, MaskDistribution::Uniform,
                          mix_seed(51 + static_cast<uint64_t>(rate * 10.0),
                                   static_cast<uint64_t>(t))};
            for (bool m : generate_mask(L, spec))
                if (!m) ++missing;
        }
        const double frac = static_cast<double>(missing) / (static_cast<double>(trials) * L);
        if (std::abs(frac - rate) > 0.02) ok = false;
        char buf[48];
        std::snprintf(buf, sizeof(buf), "rate %.1f -> %.4f; ", rate, frac);
        detail += buf;
    }
    report(11, "uniform mask rates within +/-0.02 empirically", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    const std::function<void()> criteria[] = {
        criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5, criterion_6,
        criterion_7, criterion_8, criterion_9, criterion_10, criterion_11};
    if (argc > 1) {
        // run only the criteria named on the command line
        for (int a = 1; a < argc; ++a) {
            const int id = std::atoi(argv[a]);
            if (id >= 1 && id <= 11) criteria[id - 1]();
        }
    } else {
        for (const auto& c : criteria) c();
    }
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
