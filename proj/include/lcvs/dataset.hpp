#pragma once

#include "lcvs/lcvs.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lcvs {

/// One raw GPS fix.
struct GeoSample {
    double t_epoch = 0;
    double lat = 0;
    double lon = 0;
    /// Compass course in degrees, when the logger recorded one.
    std::optional<double> course;
};

/// Origin of the local equirectangular projection.
struct ProjectionContext {
    double lat0 = 0;
    double lon0 = 0;

    friend bool operator==(const ProjectionContext&, const ProjectionContext&) = default;
};

inline constexpr double kMetersPerDegreeLon = 111320.0; // at the equator
inline constexpr double kMetersPerDegreeLat = 110540.0;

/// Mean latitude / longitude of the samples. Throws EmptyInput.
ProjectionContext centroid(std::span<const GeoSample> samples);

/// x = (lon - lon0) cos(lat0) 111320, y = (lat - lat0) 110540.
Point project(const GeoSample& s, const ProjectionContext& ctx);
std::vector<Point> project(std::span<const GeoSample> samples, const ProjectionContext& ctx);

/// Inverse of project: {lat, lon} in degrees.
std::pair<double, double> unproject(Point p, const ProjectionContext& ctx);

/// Compass bearing from `from` to `to`. Throws DegenerateStep when the points
/// coincide.
double derive_heading(Point from, Point to);

/// Frame directions for a path: the recorded course where present, otherwise
/// the bearing of the step into the frame. The first frame copies the second
/// frame's derived heading; a zero-length step reuses the previous heading;
/// a path with no usable step faces north.
std::vector<double> headings_for(std::span<const Point> path, std::span<const GeoSample> samples);

/// Reads a GPS log with header `t,lat,lon` or `t,lat,lon,course`. Rows must be
/// in non-decreasing time order. Throws ParseError (with line number) or
/// EmptyInput for a file with no data rows; IoError when unreadable.
std::vector<GeoSample> read_gps_csv(const std::filesystem::path& path);

/// Reads the `locations` list of a BDD100K per-video info JSON file.
/// Throws SchemaError naming the missing or malformed field.
std::vector<GeoSample> read_bdd100k_info(const std::filesystem::path& path);

/// Turns samples into a video in the given projection. r and delta are
/// constant for every frame; frame indices are the row positions 0..m-1.
GeoVideo build_video(std::string id, std::span<const GeoSample> samples,
                     const ProjectionContext& ctx, double r, double delta);

struct IngestResult {
    GeoVideo video;
    ProjectionContext projection;
};

/// read_gps_csv + build_video, projected about the file's own centroid and
/// named after the file stem.
IngestResult ingest_csv(const std::filesystem::path& path, double r, double delta);
IngestResult ingest_bdd100k_info(const std::filesystem::path& path, double r, double delta);

/// SplitMix64, the generator behind every synthetic dataset.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : m_state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (m_state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t m_state;
};

enum class DirectionMode { straight, random };

std::string to_string(DirectionMode m);
/// Accepts "straight" or "random"; throws InvalidArgument.
DirectionMode parse_direction_mode(const std::string& s);

struct SynthConfig {
    std::size_t n_videos = 40;
    std::size_t frames_per_video = 25;
    double r = 30.0;
    double delta = 60.0;
    DirectionMode direction_mode = DirectionMode::straight;
    /// Side of the square the walks start in (m).
    double extent = 200.0;
    /// Distance advanced per frame (m).
    double step = 4.0;
    /// Uniform half-width of the per-step heading change (degrees).
    double heading_jitter = 5.0;
    std::uint64_t seed = 42;

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;
};

/// Deterministic random-walk dataset. One generator seeded with cfg.seed is
/// consumed in this order, per video: start x, start y, initial heading; then
/// per frame i >= 1 a heading perturbation (skipped for i = 1) followed, in
/// random mode, by the camera direction of frame i. Frame 0 in random mode
/// draws its direction right after the initial heading. Ids are "v" followed
/// by the zero-padded index.
std::vector<GeoVideo> synthesize(const SynthConfig& cfg);

struct Dataset {
    std::vector<GeoVideo> videos;
    std::optional<ProjectionContext> projection;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Trajectory JSON:
///   {"videos":[{"id":..,"frames":[{"t":..,"x":..,"y":..,"theta":..,"r":..,"delta":..}]}],
///    "projection":{"lat0":..,"lon0":..}}   (projection optional)
std::string dataset_to_json(const Dataset& d);
Dataset dataset_from_json(const std::string& text);

void save_trajectories(const Dataset& d, const std::filesystem::path& path);
Dataset load_trajectories(const std::filesystem::path& path);

/// Whole-file read / write helpers that throw IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

} // namespace lcvs
