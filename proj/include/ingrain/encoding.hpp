#pragma once

#include <vector>

#include "ingrain/data.hpp"
#include "ingrain/params.hpp"
#include "ingrain/tape.hpp"

namespace ingrain {

/// Sinusoidal time-frame encoding: dimension d gets sin(t / 10000^(d/D)) for
/// even d and cos(t / 10000^(d/D)) for odd d.
Matrix frame_encoding(int t, int D);

/// Observed-queue (L x D) and missing-queue (I x D) initial representations.
struct PointQueues {
    Var e_obs;
    Var e_mis;  // invalid when there are no missing points
    std::vector<int> missing_positions;
};

/// Embeds one window: observed rows are p_l W_obs + F(t_l); missing rows in
/// the observed queue embed a zero point; the missing queue uses W_mis on a
/// zero point. Frame encodings are added at every position in both queues.
PointQueues build_queues(Tape& tape, const TrajectoryWindow& window, const Bound& params);

/// Single row of the observed queue from an on-tape 1x2 point.
Var embed_observed_row(Tape& tape, Var point, int frame, const Bound& params);

/// Single row of the missing queue for a given frame.
Var embed_missing_row(Tape& tape, int frame, const Bound& params);

}  // namespace ingrain
