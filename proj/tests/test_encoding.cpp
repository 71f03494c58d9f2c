#include <cmath>

#include "doctest.h"
#include "ingrain/encoding.hpp"
#include "ingrain/params.hpp"
#include "test_util.hpp"

using namespace ingrain;
using namespace testutil;

namespace {

ParamStore tiny_params(int D = 8, int hidden = 8) {
    ModelConfig cfg;
    cfg.embed_dim = D;
    cfg.heads = 2;
    cfg.layers = 1;
    cfg.hidden_dim = hidden;
    return make_model_params(cfg, 123);
}

}  // namespace

TEST_CASE("frame encoding at t=0 alternates 0 and 1") {
    const Matrix e = frame_encoding(0, 8);
    for (int d = 0; d < 8; ++d) CHECK(e.v[d] == doctest::Approx(d % 2 == 0 ? 0.0 : 1.0));
}

TEST_CASE("frame encoding matches the closed form") {
    const int D = 16;
    const Matrix e = frame_encoding(7, D);
    for (int d = 0; d < D; ++d) {
        const double arg = 7.0 / std::pow(10000.0, static_cast<double>(d) / D);
        const double expect = (d % 2 == 0) ? std::sin(arg) : std::cos(arg);
        CHECK(e.v[d] == doctest::Approx(expect).epsilon(1e-12));
    }
    // dimension 0 is a plain sin(t)
    CHECK(frame_encoding(1, D).v[0] == doctest::Approx(std::sin(1.0)).epsilon(1e-12));
    CHECK(frame_encoding(1, D).v[0] == doctest::Approx(0.841470984807897).epsilon(1e-9));
}

TEST_CASE("frame encodings are pairwise distinct for t < 100") {
    const int D = 16;
    std::vector<Matrix> encs;
    for (int t = 0; t < 100; ++t) encs.push_back(frame_encoding(t, D));
    for (int a = 0; a < 100; ++a)
        for (int b = a + 1; b < 100; ++b) {
            double d = 0.0;
            for (int j = 0; j < D; ++j) d += std::abs(encs[a].v[j] - encs[b].v[j]);
            CHECK(d > 1e-6);
        }
}

TEST_CASE("frame encoding rejects bad arguments") {
    CHECK_THROWS_AS(frame_encoding(-1, 8), ContractError);
    CHECK_THROWS_AS(frame_encoding(0, 1), ContractError);
}

TEST_CASE("build_queues shapes follow the mask") {
    ParamStore store = tiny_params();
    TrajectoryWindow w = make_window({{0.1, 0.2}, {0.3, 0.4}, {0.5, 0.6}, {0.7, 0.8}},
                                     {true, false, true, false}, {0.9, 1.0});
    Tape tape;
    Bound params(tape, store);
    PointQueues q = build_queues(tape, w, params);
    CHECK(q.e_obs.rows() == 4);
    CHECK(q.e_obs.cols() == 8);
    REQUIRE(q.e_mis.valid());
    CHECK(q.e_mis.rows() == 2);
    CHECK(q.e_mis.cols() == 8);
    CHECK(q.missing_positions == std::vector<int>{1, 3});
}

TEST_CASE("fully observed window has no missing queue") {
    ParamStore store = tiny_params();
    TrajectoryWindow w = make_window({{0.1, 0.2}, {0.3, 0.4}}, {true, true}, {0.5, 0.6});
    Tape tape;
    Bound params(tape, store);
    PointQueues q = build_queues(tape, w, params);
    CHECK(q.e_obs.rows() == 2);
    CHECK_FALSE(q.e_mis.valid());
    CHECK(q.missing_positions.empty());
}

TEST_CASE("missing rows of the observed queue carry only the frame encoding") {
    ParamStore store = tiny_params();
    TrajectoryWindow w = make_window({{0.1, 0.2}, {0.3, 0.4}, {0.5, 0.6}},
                                     {true, false, true}, {0.7, 0.8});
    Tape tape;
    Bound params(tape, store);
    PointQueues q = build_queues(tape, w, params);
    // zero point through W_obs leaves just F(t); W_mis on a zero point likewise
    const Matrix f1 = frame_encoding(1, 8);
    for (int j = 0; j < 8; ++j) {
        CHECK(q.e_obs.value().at(1, j) == doctest::Approx(f1.v[j]).epsilon(1e-12));
        CHECK(q.e_mis.value().at(0, j) == doctest::Approx(f1.v[j]).epsilon(1e-12));
    }
}

TEST_CASE("observed rows are point * W_obs + frame encoding") {
    ParamStore store = tiny_params();
    const Matrix& W = store.value("embed.W_obs");
    TrajectoryWindow w = make_window({{0.25, -0.5}}, {true}, {0.0, 0.0});
    Tape tape;
    Bound params(tape, store);
    PointQueues q = build_queues(tape, w, params);
    const Matrix f0 = frame_encoding(0, 8);
    for (int j = 0; j < 8; ++j) {
        const double expect = 0.25 * W.at(0, j) - 0.5 * W.at(1, j) + f0.v[j];
        CHECK(q.e_obs.value().at(0, j) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("embedding gradient flows to W_obs via finite differences") {
    ParamStore store = tiny_params();
    TrajectoryWindow w = make_window({{0.1, 0.2}, {0.3, 0.4}, {0.5, 0.6}},
                                     {true, false, true}, {0.7, 0.8});

    auto objective = [&](const ParamStore& s) {
        Tape tape;
        Bound params(tape, s);
        PointQueues q = build_queues(tape, w, params);
        return tape.value(tape.mean_all(tape.mul(q.e_obs, q.e_obs))).v[0];
    };

    Tape tape;
    Bound params(tape, store);
    PointQueues q = build_queues(tape, w, params);
    tape.backward(tape.mean_all(tape.mul(q.e_obs, q.e_obs)));
    GradSet grads = params.gradients();

    const int iw = store.find("embed.W_obs");
    double gnorm = 0.0;
    for (double g : grads.grads[iw].v) gnorm += g * g;
    CHECK(gnorm > 0.0);
    CHECK(max_param_grad_rel_err(store, grads, objective) < 1e-5);
}

TEST_CASE("W_mis receives exactly zero gradient from a zero input point") {
    ParamStore store = tiny_params();
    TrajectoryWindow w = make_window({{0.1, 0.2}, {0.3, 0.4}}, {false, true}, {0.5, 0.6});
    Tape tape;
    Bound params(tape, store);
    PointQueues q = build_queues(tape, w, params);
    tape.backward(tape.mean_all(tape.mul(q.e_mis, q.e_mis)));
    GradSet grads = params.gradients();
    for (double g : grads.grads[store.find("embed.W_mis")].v) CHECK(g == 0.0);
}
