#include <cstdio>
#include <fstream>
#include <set>

#include "doctest.h"
#include "ingrain/data.hpp"
#include "test_util.hpp"

using namespace ingrain;
using namespace testutil;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/" + name;
    std::ofstream out(path, std::ios::trunc);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("load_records parses, groups, sorts, and dedups") {
    const std::string path = write_temp(
        "ingrain_load.csv",
        "user_id,timestamp,lat,lon\n"
        "u1,30,1.0,2.0\n"
        "u2,10,5.0,6.0\n"
        "u1,10,3.0,4.0\n"
        "u1,10,9.0,9.0\n"  // duplicate timestamp, dropped
        "u1,20,0.5,0.5\n");
    UserSequences data = load_records(path);
    REQUIRE(data.size() == 2);
    REQUIRE(data["u1"].size() == 3);
    CHECK(data["u1"][0].timestamp == 10);
    CHECK(data["u1"][0].lat == 3.0);  // first occurrence kept
    CHECK(data["u1"][1].timestamp == 20);
    CHECK(data["u1"][2].timestamp == 30);
    CHECK(data["u2"].size() == 1);
}

TEST_CASE("load_records rejects out-of-range and malformed rows with line numbers") {
    const std::string bad_lat = write_temp("ingrain_badlat.csv",
                                           "user_id,timestamp,lat,lon\n"
                                           "u1,10,91.0,0.0\n");
    CHECK_THROWS_WITH_AS(load_records(bad_lat),
                         doctest::Contains("line 2"), ContractError);

    const std::string bad_fields = write_temp("ingrain_badfields.csv",
                                              "user_id,timestamp,lat,lon\n"
                                              "u1,10,1.0\n");
    CHECK_THROWS_AS(load_records(bad_fields), ContractError);

    const std::string bad_ts = write_temp("ingrain_badts.csv",
                                          "user_id,timestamp,lat,lon\n"
                                          "u1,notanumber,1.0,1.0\n");
    CHECK_THROWS_AS(load_records(bad_ts), ContractError);

    CHECK_THROWS_AS(load_records("/tmp/ingrain_does_not_exist.csv"), ContractError);
}

TEST_CASE("records csv round-trips through write and load") {
    std::vector<RawRecord> recs;
    for (int i = 0; i < 5; ++i)
        recs.push_back({"w", 100 + 60 * i, 40.0 + 0.001 * i, -74.0 - 0.002 * i});
    const std::string path = "/tmp/ingrain_roundtrip.csv";
    write_records_csv(path, recs);
    UserSequences back = load_records(path);
    REQUIRE(back["w"].size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(back["w"][i].timestamp == recs[i].timestamp);
        CHECK(back["w"][i].lat == doctest::Approx(recs[i].lat).epsilon(1e-10));
        CHECK(back["w"][i].lon == doctest::Approx(recs[i].lon).epsilon(1e-10));
    }
}

TEST_CASE("windowize counts, contents, and stride") {
    std::vector<RawRecord> seq;
    for (int i = 0; i < 25; ++i)
        seq.push_back({"u", 60 * i, 0.001 * i, -0.001 * i});

    auto w20 = windowize("u", seq, 20, 1);
    // starts 0..4 leave room for the length-20 window plus its target
    CHECK(w20.size() == 5);
    for (size_t k = 0; k < w20.size(); ++k) {
        CHECK(w20[k].length() == 20);
        CHECK(w20[k].window_index == static_cast<int>(k));
        CHECK(w20[k].frames.front() == 0);
        CHECK(w20[k].frames.back() == 19);
        CHECK(w20[k].points[0][0] == doctest::Approx(0.001 * k));
        CHECK(w20[k].target[0] == doctest::Approx(0.001 * (k + 20)));
        CHECK(w20[k].observed_count() == 20);
    }

    auto w5s5 = windowize("u", seq, 5, 5);
    CHECK(w5s5.size() == 4);  // starts 0,5,10,15; start 20 lacks a target

    CHECK(windowize("u", std::vector<RawRecord>(seq.begin(), seq.begin() + 5), 5, 1).empty());
    CHECK_THROWS_AS(windowize("u", seq, 1, 1), ContractError);
    CHECK_THROWS_AS(windowize("u", seq, 5, 0), ContractError);
}

TEST_CASE("uniform mask hits the requested rate on average") {
    const int L = 20, trials = 4000;
    double missing = 0.0;
    for (int t = 0; t < trials; ++t) {
        MaskSpec spec{0.8, MaskDistribution::Uniform, static_cast<uint64_t>(t)};
        std::vector<bool> mask = generate_mask(L, spec);
        missing += static_cast<double>(L - std::count(mask.begin(), mask.end(), true));
    }
    const double mean_missing = missing / trials;  // binomial mean 16, sd ~1.79
    CHECK(mean_missing > 15.5);
    CHECK(mean_missing < 16.5);
}

TEST_CASE("poisson mask draws roughly rate*L missing points") {
    const int L = 20, trials = 4000;
    double missing = 0.0;
    for (int t = 0; t < trials; ++t) {
        MaskSpec spec{0.5, MaskDistribution::Poisson, static_cast<uint64_t>(t) + 777};
        std::vector<bool> mask = generate_mask(L, spec);
        missing += static_cast<double>(L - std::count(mask.begin(), mask.end(), true));
    }
    const double mean_missing = missing / trials;
    CHECK(mean_missing > 9.5);
    CHECK(mean_missing < 10.5);
}

TEST_CASE("mask never leaves a window fully missing and is deterministic") {
    for (uint64_t s = 0; s < 200; ++s) {
        MaskSpec spec{0.95, MaskDistribution::Uniform, s};
        std::vector<bool> m1 = generate_mask(10, spec);
        std::vector<bool> m2 = generate_mask(10, spec);
        CHECK(m1 == m2);
        CHECK(std::count(m1.begin(), m1.end(), true) >= 1);
    }
    CHECK_THROWS_AS(generate_mask(10, MaskSpec{1.0, MaskDistribution::Uniform, 0}),
                    ContractError);
}

TEST_CASE("split partitions the dataset at the requested fraction") {
    Rng rng(4);
    std::vector<TrajectoryWindow> data;
    for (int i = 0; i < 10; ++i) {
        TrajectoryWindow w = random_window(rng, 4, 1);
        w.window_index = i;
        data.push_back(w);
    }
    auto [train, test] = split(data, 0.8, 123);
    CHECK(train.size() == 8);
    CHECK(test.size() == 2);
    std::set<int> seen;
    for (const auto& w : train) seen.insert(w.window_index);
    for (const auto& w : test) seen.insert(w.window_index);
    CHECK(seen.size() == 10);

    auto [t2, e2] = split(data, 0.8, 123);
    for (size_t i = 0; i < t2.size(); ++i) CHECK(t2[i].window_index == train[i].window_index);

    CHECK_THROWS_AS(split(data, 0.0, 1), ContractError);
    CHECK_THROWS_AS(split(data, 1.0, 1), ContractError);
}

TEST_CASE("smooth walk displacements stay within the AR(1) envelope") {
    const double sigma = 1.0;
    const std::vector<Point> pos = smooth_walk_positions(5000, sigma, 31);
    double mean_step = 0.0;
    for (size_t i = 1; i < pos.size(); ++i) {
        const double dx = pos[i][0] - pos[i - 1][0];
        const double dy = pos[i][1] - pos[i - 1][1];
        mean_step += std::sqrt(dx * dx + dy * dy);
    }
    mean_step /= static_cast<double>(pos.size() - 1);
    // stationary per-axis speed sd = sigma / sqrt(1 - 0.81) ~ 2.29
    CHECK(mean_step > 0.1);
    CHECK(mean_step < 5.0 * sigma / (1.0 - 0.9));
}

TEST_CASE("synthesize is deterministic and stays inside its coordinate box") {
    SynthProfile prof;
    prof.walker_count = 3;
    prof.points_per_walker = 50;
    const std::vector<RawRecord> a = synthesize(prof, 9);
    const std::vector<RawRecord> b = synthesize(prof, 9);
    REQUIRE(a.size() == 150);
    REQUIRE(b.size() == a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].user_id == b[i].user_id);
        CHECK(a[i].timestamp == b[i].timestamp);
        CHECK(a[i].lat == b[i].lat);
        CHECK(a[i].lon == b[i].lon);
        CHECK(a[i].lat >= 40.0);
        CHECK(a[i].lat <= 40.1 + 1e-9);
        CHECK(a[i].lon >= -74.0);
        CHECK(a[i].lon <= -73.9 + 1e-9);
    }
    const std::vector<RawRecord> c = synthesize(prof, 10);
    CHECK(c[0].lat != a[0].lat);

    prof.motion = SynthProfile::Motion::PeriodicLoop;
    const std::vector<RawRecord> d = synthesize(prof, 9);
    CHECK(d.size() == 150);
}

TEST_CASE("minmax normalization round-trips and maps into the unit square") {
    SynthProfile prof;
    prof.walker_count = 2;
    prof.points_per_walker = 40;
    std::vector<RawRecord> recs = synthesize(prof, 5);
    UserSequences data;
    for (const RawRecord& r : recs) data[r.user_id].push_back(r);

    NormParams norm = fit_normalization(data, NormalizationMode::MinMaxPerDataset);
    CHECK(norm.active);
    UserSequences scaled = data;
    apply_normalization(scaled, norm);
    for (const auto& [user, seq] : scaled)
        for (size_t i = 0; i < seq.size(); ++i) {
            CHECK(seq[i].lat >= 0.0);
            CHECK(seq[i].lat <= 1.0);
            CHECK(seq[i].lon >= 0.0);
            CHECK(seq[i].lon <= 1.0);
            const Point back = norm.denormalize({seq[i].lat, seq[i].lon});
            CHECK(back[0] == doctest::Approx(data[user][i].lat).epsilon(1e-12));
            CHECK(back[1] == doctest::Approx(data[user][i].lon).epsilon(1e-12));
        }

    NormParams off = fit_normalization(data, NormalizationMode::None);
    CHECK_FALSE(off.active);
    const Point p{12.0, 34.0};
    CHECK(off.normalize(p)[0] == 12.0);
    CHECK(off.denormalize(p)[1] == 34.0);

    NormParams degenerate;
    degenerate.active = true;
    degenerate.lat_min = degenerate.lat_max = 3.0;
    degenerate.lon_min = 0.0;
    degenerate.lon_max = 2.0;
    CHECK(degenerate.normalize({3.0, 1.0})[0] == 0.5);
    CHECK(degenerate.normalize({3.0, 1.0})[1] == 0.5);
}

TEST_CASE("window helpers report missing positions in order") {
    TrajectoryWindow w = make_window({{0, 0}, {1, 1}, {2, 2}, {3, 3}},
                                     {true, false, true, false}, {4, 4});
    CHECK(w.missing_indices() == std::vector<int>{1, 3});
    CHECK(w.observed_count() == 2);
}
