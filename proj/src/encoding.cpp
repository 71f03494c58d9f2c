#include "ingrain/encoding.hpp"

#include <cmath>

namespace ingrain {

Matrix frame_encoding(int t, int D) {
    if (t < 0) throw ContractError("frame_encoding: t must be >= 0");
    if (D < 2) throw ContractError("frame_encoding: D must be >= 2");
    Matrix enc(1, D);
    for (int d = 0; d < D; ++d) {
        const double arg = t / std::pow(10000.0, static_cast<double>(d) / D);
        enc.v[d] = (d % 2 == 0) ? std::sin(arg) : std::cos(arg);
    }
    return enc;
}

Var embed_observed_row(Tape& tape, Var point, int frame, const Bound& params) {
    const int D = params["embed.W_obs"].cols();
    Var z = tape.matmul(point, params["embed.W_obs"]);
    return tape.add(z, tape.constant(frame_encoding(frame, D)));
}

Var embed_missing_row(Tape& tape, int frame, const Bound& params) {
    const int D = params["embed.W_mis"].cols();
    Var zero = tape.constant(Matrix::zeros(1, 2));
    Var z = tape.matmul(zero, params["embed.W_mis"]);
    return tape.add(z, tape.constant(frame_encoding(frame, D)));
}

PointQueues build_queues(Tape& tape, const TrajectoryWindow& window, const Bound& params) {
    PointQueues q;
    std::vector<Var> obs_rows;
    for (int l = 0; l < window.length(); ++l) {
        Matrix p(1, 2);
        if (window.mask[l]) {
            p.v[0] = window.points[l][0];
            p.v[1] = window.points[l][1];
        }
        obs_rows.push_back(embed_observed_row(tape, tape.constant(std::move(p)),
                                              window.frames[l], params));
        if (!window.mask[l]) q.missing_positions.push_back(l);
    }
    q.e_obs = tape.concat_rows(obs_rows);
    if (!q.missing_positions.empty()) {
        std::vector<Var> mis_rows;
        for (int idx : q.missing_positions)
            mis_rows.push_back(embed_missing_row(tape, window.frames[idx], params));
        q.e_mis = tape.concat_rows(mis_rows);
    }
    return q;
}

}  // namespace ingrain
