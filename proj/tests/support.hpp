#pragma once

#include "lcvs/geometry.hpp"
#include "lcvs/lcvs.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace lcvs::test {

inline double rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Random valid FoV with its apex inside [0, box]^2.
inline FoV random_fov(std::mt19937_64& rng, double box, double r_min, double r_max,
                      std::int64_t t = 0) {
    std::uniform_real_distribution<double> pos(0, box);
    std::uniform_real_distribution<double> radius(r_min, r_max);
    std::uniform_real_distribution<double> dir(0, 360);
    std::uniform_real_distribution<double> lens(10, 170);
    return FoV({pos(rng), pos(rng)}, radius(rng), dir(rng), lens(rng), t);
}

inline GeoVideo random_video(std::mt19937_64& rng, const std::string& id, std::size_t frames,
                             double box, double r_min = 5, double r_max = 20) {
    std::vector<FoV> fovs;
    for (std::size_t i = 0; i < frames; ++i) {
        fovs.push_back(random_fov(rng, box, r_min, r_max, static_cast<std::int64_t>(i)));
    }
    return GeoVideo(id, std::move(fovs));
}

/// Video whose frames sit at the given positions, all facing `theta`.
inline GeoVideo video_at(const std::string& id, const std::vector<Point>& pts, double theta = 0,
                         double r = 10, double delta = 60) {
    std::vector<FoV> fovs;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        fovs.emplace_back(pts[i], r, theta, delta, static_cast<std::int64_t>(i));
    }
    return GeoVideo(id, std::move(fovs));
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("lcvs_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace lcvs::test
