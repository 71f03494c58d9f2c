#include "ingrain/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "ingrain/matrix.hpp"
#include "ingrain/rng.hpp"

namespace ingrain {

Point NormParams::normalize(Point p) const {
    if (!active) return p;
    const double dlat = lat_max - lat_min;
    const double dlon = lon_max - lon_min;
    return {dlat == 0.0 ? 0.5 : (p[0] - lat_min) / dlat,
            dlon == 0.0 ? 0.5 : (p[1] - lon_min) / dlon};
}

Point NormParams::denormalize(Point p) const {
    if (!active) return p;
    const double dlat = lat_max - lat_min;
    const double dlon = lon_max - lon_min;
    return {dlat == 0.0 ? lat_min : lat_min + p[0] * dlat,
            dlon == 0.0 ? lon_min : lon_min + p[1] * dlon};
}

namespace {

bool parse_field(const std::string& s, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_field(const std::string& s, int64_t& out) {
    try {
        size_t pos = 0;
        out = std::stoll(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

[[noreturn]] void parse_error(const std::string& path, int line, const std::string& what) {
    throw ContractError("parse error in " + path + " line " + std::to_string(line) + ": " + what);
}

}  // namespace

UserSequences load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open " + path);
    UserSequences out;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "user_id,timestamp,lat,lon")
                parse_error(path, lineno, "expected header user_id,timestamp,lat,lon");
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 4) parse_error(path, lineno, "expected 4 fields");
        RawRecord r;
        r.user_id = fields[0];
        if (r.user_id.empty()) parse_error(path, lineno, "empty user_id");
        if (!parse_field(fields[1], r.timestamp) || r.timestamp < 0)
            parse_error(path, lineno, "bad timestamp '" + fields[1] + "'");
        if (!parse_field(fields[2], r.lat) || r.lat < -90.0 || r.lat > 90.0)
            parse_error(path, lineno, "lat out of range '" + fields[2] + "'");
        if (!parse_field(fields[3], r.lon) || r.lon < -180.0 || r.lon > 180.0)
            parse_error(path, lineno, "lon out of range '" + fields[3] + "'");
        out[r.user_id].push_back(r);
    }
    for (auto& [user, seq] : out) {
        std::stable_sort(seq.begin(), seq.end(),
                         [](const RawRecord& a, const RawRecord& b) {
                             return a.timestamp < b.timestamp;
                         });
        std::vector<RawRecord> dedup;
        for (const RawRecord& r : seq)
            if (dedup.empty() || dedup.back().timestamp != r.timestamp) dedup.push_back(r);
        seq = std::move(dedup);
    }
    return out;
}

void write_records_csv(const std::string& path, const std::vector<RawRecord>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ContractError("cannot write " + path);
    out << "user_id,timestamp,lat,lon\n";
    char buf[128];
    for (const RawRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%lld,%.12f,%.12f",
                      static_cast<long long>(r.timestamp), r.lat, r.lon);
        out << r.user_id << ',' << buf << '\n';
    }
    if (!out) throw ContractError("write failed: " + path);
}

std::vector<TrajectoryWindow> windowize(const std::string& user_id,
                                        const std::vector<RawRecord>& seq, int L,
                                        int stride) {
    if (L < 2) throw ContractError("windowize: L must be >= 2");
    if (stride < 1) throw ContractError("windowize: stride must be >= 1");
    std::vector<TrajectoryWindow> out;
    const int n = static_cast<int>(seq.size());
    int widx = 0;
    for (int start = 0; start + L + 1 <= n; start += stride) {
        TrajectoryWindow w;
        w.user_id = user_id;
        w.window_index = widx++;
        for (int i = 0; i < L; ++i) {
            w.points.push_back({seq[start + i].lat, seq[start + i].lon});
            w.frames.push_back(i);
        }
        w.target = {seq[start + L].lat, seq[start + L].lon};
        w.mask.assign(L, true);
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<bool> generate_mask(int L, const MaskSpec& spec) {
    if (spec.missing_rate >= 1.0)
        throw ContractError("generate_mask: missing_rate must be < 1");
    if (spec.missing_rate < 0.0)
        throw ContractError("generate_mask: missing_rate must be >= 0");
    Rng rng(spec.seed);
    std::vector<bool> mask(L, true);
    if (spec.distribution == MaskDistribution::Uniform) {
        for (int i = 0; i < L; ++i)
            if (rng.uniform() < spec.missing_rate) mask[i] = false;
    } else {
        int count = rng.poisson(spec.missing_rate * L);
        count = std::clamp(count, 0, L - 1);
        std::vector<int> idx(L);
        for (int i = 0; i < L; ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), rng.engine());
        for (int i = 0; i < count; ++i) mask[idx[i]] = false;
    }
    if (std::none_of(mask.begin(), mask.end(), [](bool m) { return m; }))
        mask[rng.index(L)] = true;
    return mask;
}

std::pair<std::vector<TrajectoryWindow>, std::vector<TrajectoryWindow>> split(
    std::vector<TrajectoryWindow> dataset, double train_fraction, uint64_t seed) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw ContractError("split: train_fraction must be in (0,1)");
    Rng rng(seed);
    std::shuffle(dataset.begin(), dataset.end(), rng.engine());
    const auto n_train =
        static_cast<size_t>(std::floor(train_fraction * static_cast<double>(dataset.size())));
    std::vector<TrajectoryWindow> train(dataset.begin(), dataset.begin() + n_train);
    std::vector<TrajectoryWindow> test(dataset.begin() + n_train, dataset.end());
    return {std::move(train), std::move(test)};
}

std::vector<Point> smooth_walk_positions(int count, double noise_scale, uint64_t seed) {
    Rng rng(seed);
    std::vector<Point> pos(count);
    double vx = 0.0, vy = 0.0, x = 0.0, y = 0.0;
    for (int i = 0; i < count; ++i) {
        pos[i] = {x, y};
        vx = 0.9 * vx + rng.gaussian(0.0, noise_scale);
        vy = 0.9 * vy + rng.gaussian(0.0, noise_scale);
        x += vx;
        y += vy;
    }
    return pos;
}

std::vector<RawRecord> synthesize(const SynthProfile& profile, uint64_t seed) {
    std::vector<RawRecord> out;
    const double box = 0.1;        // degrees
    const double base_lat = 40.0;  // arbitrary mid-latitude anchor
    const double base_lon = -74.0;
    for (int w = 0; w < profile.walker_count; ++w) {
        const uint64_t wseed = mix_seed(seed, static_cast<uint64_t>(w));
        char name[32];
        std::snprintf(name, sizeof(name), "walker_%03d", w);
        std::vector<Point> pos;
        if (profile.motion == SynthProfile::Motion::SmoothRandomWalk) {
            pos = smooth_walk_positions(profile.points_per_walker, profile.noise_scale, wseed);
        } else {
            Rng rng(wseed);
            const double period = 40.0;
            const double radius = 1.0;
            const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            for (int i = 0; i < profile.points_per_walker; ++i) {
                const double a = phase + 2.0 * std::numbers::pi * i / period;
                pos.push_back({radius * std::cos(a) + 0.05 * profile.noise_scale * rng.gaussian(),
                               radius * std::sin(a) + 0.05 * profile.noise_scale * rng.gaussian()});
            }
        }
        // scale into a ~0.1-degree box around the anchor
        double xmin = pos[0][0], xmax = pos[0][0], ymin = pos[0][1], ymax = pos[0][1];
        for (const Point& p : pos) {
            xmin = std::min(xmin, p[0]);
            xmax = std::max(xmax, p[0]);
            ymin = std::min(ymin, p[1]);
            ymax = std::max(ymax, p[1]);
        }
        const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
        const double scale = box / span;
        for (int i = 0; i < static_cast<int>(pos.size()); ++i) {
            RawRecord r;
            r.user_id = name;
            r.timestamp = 1000000000LL + 60LL * i;
            r.lat = base_lat + (pos[i][0] - xmin) * scale;
            r.lon = base_lon + (pos[i][1] - ymin) * scale;
            out.push_back(r);
        }
    }
    return out;
}

NormParams fit_normalization(const UserSequences& data, NormalizationMode mode) {
    NormParams p;
    if (mode == NormalizationMode::None) return p;
    bool first = true;
    for (const auto& [user, seq] : data)
        for (const RawRecord& r : seq) {
            if (first) {
                p.lat_min = p.lat_max = r.lat;
                p.lon_min = p.lon_max = r.lon;
                first = false;
            } else {
                p.lat_min = std::min(p.lat_min, r.lat);
                p.lat_max = std::max(p.lat_max, r.lat);
                p.lon_min = std::min(p.lon_min, r.lon);
                p.lon_max = std::max(p.lon_max, r.lon);
            }
        }
    if (first) throw ContractError("fit_normalization: empty dataset");
    p.active = true;
    return p;
}

void apply_normalization(UserSequences& data, const NormParams& params) {
    if (!params.active) return;
    for (auto& [user, seq] : data)
        for (RawRecord& r : seq) {
            const Point q = params.normalize({r.lat, r.lon});
            r.lat = q[0];
            r.lon = q[1];
        }
}

}  // namespace ingrain
