#pragma once

#include <map>

#include "ingrain/data.hpp"
#include "ingrain/params.hpp"

namespace ingrain {

/// KNN + Linear imputer: per missing point, the k observed points nearest in
/// time fit a least-squares line per axis, evaluated at the missing frame.
std::map<int, Point> knn_linear_impute(const TrajectoryWindow& window, int k);

/// Per-axis linear interpolation between nearest observed frames, constant
/// extrapolation beyond the ends.
std::map<int, Point> linear_interp_impute(const TrajectoryWindow& window);

/// Last observed point of the masked window.
Point persistence_predict(const TrajectoryWindow& window);

struct SgruConfig {
    int hidden_dim = 32;
    int epochs = 60;
    int batch_size = 8;
    double lr = 0.001;
    double grad_clip = 5.0;
    uint64_t seed = 0;
};

struct SgruResult {
    ParamStore params;
    double test_l_pre = 0.0;
    std::vector<double> train_loss_per_epoch;
};

/// Stacked 2-layer GRU over raw masked windows (x, y, mask-bit channels),
/// trained with Adam on the prediction loss alone.
SgruResult sgru_predict_baseline(const std::vector<TrajectoryWindow>& train_set,
                                 const std::vector<TrajectoryWindow>& test_set,
                                 const SgruConfig& cfg);

Point sgru_predict(const TrajectoryWindow& window, const ParamStore& params, int hidden_dim);

}  // namespace ingrain
