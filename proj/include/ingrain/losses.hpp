#pragma once

#include <optional>
#include <vector>

#include "ingrain/data.hpp"
#include "ingrain/model.hpp"
#include "ingrain/tape.hpp"

namespace ingrain {

struct LossWeights {
    double lambda_imp = 1.0;
    double lambda_pre = 1.0;
    double lambda_vel = 1.0;

    void validate() const {
        if (lambda_imp < 0 || lambda_pre < 0 || lambda_vel < 0)
            throw ContractError("loss weights must be >= 0");
        if (lambda_imp == 0 && lambda_pre == 0 && lambda_vel == 0)
            throw ContractError("loss weights must not all be zero");
    }
};

struct LossConfig {
    LossWeights weights;
    bool squared_loss = false;  // squared reading of the imputation/prediction objectives
    bool vel_literal = false;   // literal difference-sequence reading of the velocity term
};

struct LossReport {
    double l_imp = 0.0;
    double l_pre = 0.0;
    double l_vel = 0.0;
    double l_learn = 0.0;
};

/// Mean Euclidean distance between imputed and true coordinates.
/// `imputed` are on-tape 1x2 rows aligned with `indices` into the window.
Var loss_imp(Tape& tape, const std::vector<Var>& imputed, const std::vector<int>& indices,
             const TrajectoryWindow& win, bool squared);

Var loss_pre(Tape& tape, Var predicted, Point target, bool squared);

/// Velocity constraint over the current slot contents: speeds of the imputed
/// sequence vs observed speeds interpolated onto segment midpoints, averaged
/// over segments with both endpoints known and at least one imputed. Returns
/// nullopt when no segment qualifies (term contributes zero).
std::optional<Var> loss_vel(Tape& tape, const TrajectoryWindow& win, const WindowSlots& slots,
                            bool literal);

/// lambda-weighted sum; zero-weight and absent terms are skipped so their
/// parameters receive exactly zero gradient.
Var fuse(Tape& tape, std::optional<Var> l_imp, std::optional<Var> l_pre,
         std::optional<Var> l_vel, const LossWeights& w);

}  // namespace ingrain
