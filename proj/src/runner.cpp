#include "ingrain/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ingrain/baselines.hpp"
#include "ingrain/model_io.hpp"
#include "ingrain/rng.hpp"

namespace ingrain {

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t window_mask_seed(const RunConfig& cfg, const TrajectoryWindow& w) {
    return mix_seed(cfg.mask_seed, fnv1a(w.user_id) + 0x9e37ULL * w.window_index);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void mask_windows(std::vector<TrajectoryWindow>& windows, const RunConfig& cfg, double rate) {
    for (TrajectoryWindow& w : windows) {
        MaskSpec spec;
        spec.missing_rate = rate;
        spec.distribution = cfg.mask_distribution();
        spec.seed = window_mask_seed(cfg, w);
        w.mask = generate_mask(w.length(), spec);
    }
}

double point_dist(Point a, Point b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return std::sqrt(dx * dx + dy * dy);
}

struct MethodLosses {
    double ingrain_imp = 0.0, ingrain_pre = 0.0;
    double ingrain_imp_deg = 0.0, ingrain_pre_deg = 0.0;
    double knn_imp = 0.0, interp_imp = 0.0, persist_pre = 0.0;
    int imp_windows = 0, windows = 0;
};

MethodLosses eval_methods(const std::vector<TrajectoryWindow>& test, const ParamStore& params,
                          const RunConfig& cfg, const NormParams& norm) {
    const ForwardConfig fwd = cfg.forward_config();
    MethodLosses m;
    for (const TrajectoryWindow& w : test) {
        EvalOutputs out = evaluate_window(w, params, fwd);
        m.ingrain_pre += point_dist(out.prediction, w.target);
        m.ingrain_pre_deg += point_dist(norm.denormalize(out.prediction), norm.denormalize(w.target));
        m.persist_pre += point_dist(persistence_predict(w), w.target);
        m.windows += 1;
        if (out.imputed.empty()) continue;

        auto mean_imp = [&](const std::map<int, Point>& imputed, bool deg) {
            double s = 0.0;
            for (const auto& [idx, p] : imputed)
                s += deg ? point_dist(norm.denormalize(p), norm.denormalize(w.points[idx]))
                         : point_dist(p, w.points[idx]);
            return s / static_cast<double>(imputed.size());
        };
        m.ingrain_imp += mean_imp(out.imputed, false);
        m.ingrain_imp_deg += mean_imp(out.imputed, true);
        const int k = std::min(cfg.knn_k, w.observed_count());
        if (w.observed_count() >= 2) m.knn_imp += mean_imp(knn_linear_impute(w, k), false);
        m.interp_imp += mean_imp(linear_interp_impute(w), false);
        m.imp_windows += 1;
    }
    if (m.windows > 0) {
        m.ingrain_pre /= m.windows;
        m.ingrain_pre_deg /= m.windows;
        m.persist_pre /= m.windows;
    }
    if (m.imp_windows > 0) {
        m.ingrain_imp /= m.imp_windows;
        m.ingrain_imp_deg /= m.imp_windows;
        m.knn_imp /= m.imp_windows;
        m.interp_imp /= m.imp_windows;
    }
    return m;
}

void write_train_log(const std::string& path, const std::vector<EpochLog>& log) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ContractError("cannot write " + path);
    out << "epoch,l_imp,l_pre,l_vel,l_learn,test_l_imp,test_l_pre\n";
    for (const EpochLog& e : log) {
        out << e.epoch << ',' << fmt(e.train.l_imp) << ',' << fmt(e.train.l_pre) << ','
            << fmt(e.train.l_vel) << ',' << fmt(e.train.l_learn) << ','
            << (e.test_l_imp ? fmt(*e.test_l_imp) : "") << ','
            << (e.test_l_pre ? fmt(*e.test_l_pre) : "") << '\n';
    }
}

struct BestOf {
    double imp = 0.0, pre = 0.0;
    bool any = false;
};

BestOf best_test_losses(const std::vector<EpochLog>& log) {
    BestOf b;
    for (const EpochLog& e : log) {
        if (!e.test_l_imp) continue;
        if (!b.any || *e.test_l_imp < b.imp) b.imp = *e.test_l_imp;
        if (!b.any || *e.test_l_pre < b.pre) b.pre = *e.test_l_pre;
        b.any = true;
    }
    return b;
}

}  // namespace

PreparedData prepare_data(const RunConfig& cfg, const std::string& data_csv) {
    cfg.validate();
    UserSequences users = load_records(data_csv);
    PreparedData out;
    out.norm = fit_normalization(users, cfg.normalization == "minmax"
                                            ? NormalizationMode::MinMaxPerDataset
                                            : NormalizationMode::None);
    apply_normalization(users, out.norm);
    std::vector<TrajectoryWindow> all;
    for (const auto& [user, seq] : users) {
        std::vector<TrajectoryWindow> ws = windowize(user, seq, cfg.L, cfg.effective_stride());
        all.insert(all.end(), ws.begin(), ws.end());
    }
    auto [train, test] = split(std::move(all), cfg.train_fraction, cfg.split_seed);
    out.train = std::move(train);
    out.test = std::move(test);
    mask_windows(out.train, cfg, cfg.missing_rate);
    mask_windows(out.test, cfg, cfg.missing_rate);
    return out;
}

void remask(std::vector<TrajectoryWindow>& windows, const RunConfig& cfg, double rate) {
    mask_windows(windows, cfg, rate);
}

void run_synth(const RunConfig& cfg, const std::string& out_csv) {
    cfg.validate();
    SynthProfile p;
    p.walker_count = cfg.walker_count;
    p.points_per_walker = cfg.points_per_walker;
    p.motion = cfg.motion == "loop" ? SynthProfile::Motion::PeriodicLoop
                                    : SynthProfile::Motion::SmoothRandomWalk;
    p.noise_scale = cfg.noise_scale;
    write_records_csv(out_csv, synthesize(p, cfg.seeds.front()));
}

std::string run_train(const RunConfig& cfg, const std::string& data_csv,
                      const std::string& out_dir) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);
    PreparedData data = prepare_data(cfg, data_csv);
    if (data.train.empty()) throw ContractError("train: empty train set");

    double mean_imp = 0.0, mean_pre = 0.0;
    int counted = 0;
    for (uint64_t seed : cfg.seeds) {
        TrainResult res = train(data.train, data.test, cfg.train_config(seed));
        const std::string tag = "_seed" + std::to_string(seed);
        write_train_log(out_dir + "/train_log" + tag + ".csv", res.log);
        save_model(out_dir + "/model" + tag + ".bin", res.params, cfg.serialize());
        BestOf b = best_test_losses(res.log);
        if (b.any) {
            mean_imp += b.imp;
            mean_pre += b.pre;
            ++counted;
        }
    }
    std::ostringstream s;
    if (counted > 0) {
        s << "mean_best_test_l_imp = " << fmt(mean_imp / counted) << "\n";
        s << "mean_best_test_l_pre = " << fmt(mean_pre / counted) << "\n";
    } else {
        s << "no test evaluations were logged\n";
    }
    return s.str();
}

void run_eval(const RunConfig& cfg, const std::string& model_path, const std::string& data_csv,
              const std::string& out_csv) {
    cfg.validate();
    LoadedModel model = load_model(model_path);
    {
        RunConfig echo;
        std::istringstream in(model.config_echo);
        std::string line;
        while (std::getline(in, line)) {
            const size_t eq = line.find('=');
            if (eq != std::string::npos) {
                const std::string key = line.substr(0, line.find(' '));
                echo.set(key, line.substr(eq + 1));
            }
        }
        if (echo.embed_dim != cfg.embed_dim || echo.heads != cfg.heads ||
            echo.layers != cfg.layers || echo.hidden_dim != cfg.hidden_dim)
            throw FormatError("model file (format v1) was trained with embed_dim=" +
                              std::to_string(echo.embed_dim) + ",heads=" +
                              std::to_string(echo.heads) + ",layers=" +
                              std::to_string(echo.layers) + ",hidden_dim=" +
                              std::to_string(echo.hidden_dim) + " but config requests embed_dim=" +
                              std::to_string(cfg.embed_dim) + ",heads=" + std::to_string(cfg.heads) +
                              ",layers=" + std::to_string(cfg.layers) + ",hidden_dim=" +
                              std::to_string(cfg.hidden_dim));
    }

    PreparedData data = prepare_data(cfg, data_csv);
    std::vector<double> rates = cfg.eval_rates.empty() ? std::vector<double>{cfg.missing_rate}
                                                       : cfg.eval_rates;
    std::ostringstream rows;
    rows << "missing_rate,method,task,loss\n";
    for (double rate : rates) {
        std::vector<TrajectoryWindow> test = data.test;
        remask(test, cfg, rate);
        MethodLosses m = eval_methods(test, model.params, cfg, data.norm);
        rows << fmt(rate) << ",ingrain,imputation," << fmt(m.ingrain_imp) << "\n";
        rows << fmt(rate) << ",ingrain,prediction," << fmt(m.ingrain_pre) << "\n";
        if (data.norm.active) {
            rows << fmt(rate) << ",ingrain,imputation_deg," << fmt(m.ingrain_imp_deg) << "\n";
            rows << fmt(rate) << ",ingrain,prediction_deg," << fmt(m.ingrain_pre_deg) << "\n";
        }
        rows << fmt(rate) << ",knn_linear,imputation," << fmt(m.knn_imp) << "\n";
        rows << fmt(rate) << ",linear_interp,imputation," << fmt(m.interp_imp) << "\n";
        rows << fmt(rate) << ",persistence,prediction," << fmt(m.persist_pre) << "\n";
        if (cfg.include_sgru) {
            std::vector<TrajectoryWindow> tr = data.train;
            remask(tr, cfg, rate);
            SgruConfig sc;
            sc.hidden_dim = cfg.hidden_dim;
            sc.epochs = cfg.epochs;
            sc.batch_size = cfg.batch;
            sc.lr = cfg.lr;
            sc.grad_clip = cfg.grad_clip;
            sc.seed = cfg.seeds.front();
            SgruResult sg = sgru_predict_baseline(tr, test, sc);
            rows << fmt(rate) << ",sgru,prediction," << fmt(sg.test_l_pre) << "\n";
        }
    }
    // atomic overwrite: write a temp file then rename
    const std::string tmp = out_csv + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw ContractError("cannot write " + tmp);
        out << rows.str();
    }
    std::filesystem::rename(tmp, out_csv);
}

std::string run_sweep(const RunConfig& cfg, const std::string& data_csv,
                      const std::string& out_dir) {
    cfg.validate();
    if (cfg.sweep_axis.empty()) throw ConfigError("sweep requires sweep_axis");
    std::filesystem::create_directories(out_dir);

    std::ostringstream rows;
    rows << "axis,value,task,loss\n";
    for (double value : cfg.sweep_values) {
        RunConfig point = cfg;
        point.sweep_axis.clear();
        point.sweep_values.clear();
        char vbuf[40];
        std::snprintf(vbuf, sizeof(vbuf), "%.12g", value);
        point.set(cfg.sweep_axis, vbuf);
        point.validate();

        PreparedData data = prepare_data(point, data_csv);
        double mean_imp = 0.0, mean_pre = 0.0;
        int counted = 0;
        for (uint64_t seed : point.seeds) {
            TrainResult res = train(data.train, data.test, point.train_config(seed));
            BestOf b = best_test_losses(res.log);
            if (b.any) {
                mean_imp += b.imp;
                mean_pre += b.pre;
                ++counted;
            }
        }
        if (counted > 0) {
            rows << cfg.sweep_axis << ',' << vbuf << ",imputation," << fmt(mean_imp / counted)
                 << "\n";
            rows << cfg.sweep_axis << ',' << vbuf << ",prediction," << fmt(mean_pre / counted)
                 << "\n";
        }
    }
    const std::string out_csv = out_dir + "/sweep.csv";
    const std::string tmp = out_csv + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw ContractError("cannot write " + tmp);
        out << rows.str();
    }
    std::filesystem::rename(tmp, out_csv);
    return rows.str();
}

}  // namespace ingrain
