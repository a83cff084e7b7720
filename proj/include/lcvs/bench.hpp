#pragma once

#include "lcvs/baselines.hpp"
#include "lcvs/dataset.hpp"
#include "lcvs/lcvs.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lcvs {

/// A trajectory distance together with its parameters.
class MethodSpec {
public:
    enum class Kind { lcvs_mbs, lcvs_mbt, lcvs_mbr, lcvs_oracle, lcss, hausdorff };

    static MethodSpec lcvs(ApproxMethod approx, unsigned sigma = 1);
    static MethodSpec lcss(double epsilon = 10.0, unsigned sigma = 1);
    static MethodSpec hausdorff();

    /// Parses one of lcvs-mbs, lcvs-mbt, lcvs-mbr, lcvs-oracle, lcss, hausdorff.
    /// Parameters that do not apply to the method are ignored. Throws
    /// InvalidArgument for unknown names or out-of-range parameters.
    static MethodSpec parse(const std::string& name, double segment_angle = 5.0,
                            double epsilon = 10.0, unsigned sigma = 1);

    Kind kind() const { return m_kind; }
    const std::string& name() const { return m_name; }
    /// Distances in [0, 1]; false for Hausdorff (meters).
    bool normalized() const { return m_kind != Kind::hausdorff; }
    /// FoV approximation for the lcvs-* methods.
    std::optional<ApproxMethod> approx() const { return m_approx; }
    unsigned sigma() const { return m_sigma; }
    double epsilon() const { return m_epsilon; }

private:
    MethodSpec(Kind k, std::string name) : m_kind(k), m_name(std::move(name)) {}

    Kind m_kind;
    std::string m_name;
    std::optional<ApproxMethod> m_approx;
    unsigned m_sigma = 1;
    double m_epsilon = 10.0;
};

/// Dense symmetric matrix of pairwise distances.
struct DistanceMatrix {
    std::vector<std::string> ids;
    /// Row-major, ids.size() squared.
    std::vector<double> values;
    bool normalized = true;

    std::size_t size() const { return ids.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * ids.size() + j]; }
    /// Throws UnknownId.
    std::size_t index_of(const std::string& id) const;
};

/// Distance of one pair under `spec`.
double pair_distance(const GeoVideo& a, const GeoVideo& b, const MethodSpec& spec);

/// All unordered pairs, mirrored. `threads` workers pull pairs by index and
/// write into per-pair slots, so the result does not depend on the thread
/// count. 0 means one worker per hardware thread. Throws InvalidArgument for
/// fewer than two videos or duplicate ids.
DistanceMatrix distance_matrix(std::span<const GeoVideo> videos, const MethodSpec& spec,
                               unsigned threads = 1);

/// The k nearest videos to `query`, self excluded, ties broken by ascending
/// id. Throws UnknownId, or InvalidArgument unless k < size().
std::vector<std::string> knn(const DistanceMatrix& m, const std::string& query, std::size_t k);

/// Mean precision@k of the method's neighbor lists against the oracle's.
/// Throws IdMismatch when the matrices cover different ids.
double accuracy_eval(const DistanceMatrix& method, const DistanceMatrix& oracle, std::size_t k);

/// First row and column hold the ids; cell (i, j) the distance.
std::string matrix_to_csv(const DistanceMatrix& m);
DistanceMatrix matrix_from_csv(const std::string& text);

/// Shortest decimal that round-trips the double.
std::string format_number(double v);

struct ExperimentRow {
    double sweep_value = 0;
    std::string method;
    DirectionMode mode = DirectionMode::straight;
    double accuracy = 0;
    double wall_time_s = 0;
    std::size_t n_videos = 0;
    std::size_t frames_per_video = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;

    /// Sweep value, then method name, then mode name.
    void sort_rows();

    /// Rows matching all three keys; nullptr when absent.
    const ExperimentRow* find(double sweep_value, const std::string& method, DirectionMode mode) const;

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

struct ExperimentOptions {
    std::vector<MethodSpec> methods;
    std::size_t k = 5;
    /// Sigma of the oracle ranking.
    unsigned sigma = 1;
    std::vector<DirectionMode> modes{DirectionMode::straight, DirectionMode::random};
    /// Workers for the untimed oracle matrix. Timed matrices always use one.
    unsigned threads = 1;
};

/// The four methods compared in the sweeps: lcss, lcvs-mbs, lcvs-mbt, lcvs-mbr.
std::vector<MethodSpec> default_methods(double segment_angle = 5.0, double epsilon = 10.0,
                                        unsigned sigma = 1);

/// Sweeps the total FoV count. Each level L uses L / frames_per_video videos
/// (rounded to nearest) of base.frames_per_video frames; sweep_value is L.
ExperimentReport run_experiment_fov_count(const SynthConfig& base, std::span<const double> levels,
                                          const ExperimentOptions& opts);

/// Sweeps the viewable distance r over `levels` (meters).
ExperimentReport run_experiment_view_distance(const SynthConfig& base, std::span<const double> levels,
                                              const ExperimentOptions& opts);

/// CSV columns: sweep_value,method,mode,accuracy,wall_time_s,n_videos,frames_per_video,seed
std::string report_to_csv(const ExperimentReport& r);
std::string report_to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const std::string& text);

enum class ReportFormat { csv, json };

/// Throws IoError.
void emit_report(const ExperimentReport& r, const std::filesystem::path& path, ReportFormat format);

} // namespace lcvs
