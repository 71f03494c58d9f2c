#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ingrain {

using Point = std::array<double, 2>;  // (lat, lon)

struct RawRecord {
    std::string user_id;
    int64_t timestamp = 0;  // seconds since epoch
    double lat = 0.0;
    double lon = 0.0;
};

/// Fixed-length trajectory segment with a next-point target and a mask
/// marking observed (true) vs missing (false) positions.
struct TrajectoryWindow {
    std::string user_id;
    int window_index = 0;
    std::vector<Point> points;   // length L, ground truth for every position
    std::vector<int> frames;     // ordinal indices 0..L-1, strictly increasing
    Point target{0.0, 0.0};
    std::vector<bool> mask;      // true = observed

    int length() const { return static_cast<int>(points.size()); }
    std::vector<int> missing_indices() const {
        std::vector<int> out;
        for (int i = 0; i < length(); ++i)
            if (!mask[i]) out.push_back(i);
        return out;
    }
    int observed_count() const {
        int c = 0;
        for (bool m : mask) c += m ? 1 : 0;
        return c;
    }
};

enum class MaskDistribution { Uniform, Poisson };

struct MaskSpec {
    double missing_rate = 0.5;  // must be < 1
    MaskDistribution distribution = MaskDistribution::Uniform;
    uint64_t seed = 0;
};

struct SynthProfile {
    int walker_count = 1;
    int points_per_walker = 100;
    enum class Motion { SmoothRandomWalk, PeriodicLoop } motion = Motion::SmoothRandomWalk;
    double noise_scale = 1.0;
};

enum class NormalizationMode { None, MinMaxPerDataset };

/// Scaling learned by minmax normalization, kept so losses can be reported in
/// either normalized or degree space.
struct NormParams {
    bool active = false;
    double lat_min = 0.0, lat_max = 1.0;
    double lon_min = 0.0, lon_max = 1.0;

    Point normalize(Point p) const;
    Point denormalize(Point p) const;
};

using UserSequences = std::map<std::string, std::vector<RawRecord>>;

/// Parses the `user_id,timestamp,lat,lon` CSV; groups by user, sorts by
/// timestamp, drops duplicate (user, timestamp) keeping the first.
UserSequences load_records(const std::string& path);

void write_records_csv(const std::string& path, const std::vector<RawRecord>& records);

std::vector<TrajectoryWindow> windowize(const std::string& user_id,
                                        const std::vector<RawRecord>& seq, int L,
                                        int stride);

std::vector<bool> generate_mask(int L, const MaskSpec& spec);

std::pair<std::vector<TrajectoryWindow>, std::vector<TrajectoryWindow>> split(
    std::vector<TrajectoryWindow> dataset, double train_fraction, uint64_t seed);

std::vector<RawRecord> synthesize(const SynthProfile& profile, uint64_t seed);

/// Raw AR(1)-velocity walk in noise-scale units, exposed for statistical checks.
std::vector<Point> smooth_walk_positions(int count, double noise_scale, uint64_t seed);

NormParams fit_normalization(const UserSequences& data, NormalizationMode mode);
void apply_normalization(UserSequences& data, const NormParams& params);

}  // namespace ingrain
