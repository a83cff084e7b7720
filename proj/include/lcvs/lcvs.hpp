#pragma once

#include "lcvs/geometry.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lcvs {

/// An identified, time-ordered sequence of FoVs.
class GeoVideo {
public:
    GeoVideo() = default;

    /// Throws InvalidArgument unless frame indices are strictly increasing.
    GeoVideo(std::string id, std::vector<FoV> fovs);

    const std::string& id() const { return m_id; }
    std::span<const FoV> fovs() const { return m_fovs; }
    std::size_t size() const { return m_fovs.size(); }
    bool empty() const { return m_fovs.empty(); }

    friend bool operator==(const GeoVideo&, const GeoVideo&) = default;

private:
    std::string m_id;
    std::vector<FoV> m_fovs;
};

struct LcvsParams {
    /// Largest index offset |i - j| between the prefix lengths of a matched pair.
    unsigned sigma = 1;
    ApproxMethod method = ApproxMethod::mbs();
};

/// Dense row-major m x n matrix of per-frame weights.
class WeightMatrix {
public:
    WeightMatrix(std::size_t rows, std::size_t cols, double fill = 0)
        : m_rows(rows), m_cols(cols), m_data(rows * cols, fill) {}

    /// Build from nested rows; all rows must have equal length.
    static WeightMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return m_rows; }
    std::size_t cols() const { return m_cols; }
    double operator()(std::size_t i, std::size_t j) const { return m_data[i * m_cols + j]; }
    double& operator()(std::size_t i, std::size_t j) { return m_data[i * m_cols + j]; }

private:
    std::size_t m_rows;
    std::size_t m_cols;
    std::vector<double> m_data;
};

/// Builds the approximated region of every frame.
std::vector<ViewRegion> prepare_regions(const GeoVideo& video, ApproxMethod method);

/// Largest common view subsequence score by dynamic programming over prefix
/// lengths (i, j):
///
///     dp[i][j] = w(i, j) + dp[i-1][j-1]          if w(i, j) > 0 and |i - j| <= sigma
///              = max(dp[i-1][j], dp[i][j-1])     otherwise
///
/// with dp[0][*] = dp[*][0] = 0. Weights are only evaluated inside the sigma
/// band, each at most once. O(m n) time, O(n) memory.
double lcvs_score(const GeoVideo& a, const GeoVideo& b, const LcvsParams& p);
double lcvs_score(std::span<const ViewRegion> a, std::span<const ViewRegion> b, unsigned sigma);
double lcvs_score(const WeightMatrix& w, unsigned sigma);

/// Largest video length accepted by the exhaustive references.
inline constexpr std::size_t kReferenceMaxLength = 12;

/// Unmemoized transcription of the recursion, exponential in the lengths.
/// Test oracle only; throws InputTooLarge when a length exceeds
/// kReferenceMaxLength.
double lcvs_reference(const GeoVideo& a, const GeoVideo& b, const LcvsParams& p);
double lcvs_reference(const WeightMatrix& w, unsigned sigma);

/// score / min(m, n); 0 when either video is empty.
double lcvs_similarity(const GeoVideo& a, const GeoVideo& b, const LcvsParams& p);

/// 1 - similarity. Empty inputs give 1, including distance(∅, ∅).
double lcvs_distance(const GeoVideo& a, const GeoVideo& b, const LcvsParams& p);

/// Converts a raw score into the normalized distance for lengths m and n.
double distance_from_score(double score, std::size_t m, std::size_t n);

struct TriangleViolation {
    std::string a, b, c;
    /// distance(a, b) + distance(b, c)
    double lhs;
    /// distance(a, c)
    double rhs;
};

struct AuditReport {
    std::size_t n_videos = 0;
    std::size_t pairs_checked = 0;
    std::size_t triples_checked = 0;
    std::size_t negative_count = 0;
    std::size_t asymmetric_count = 0;
    /// Nonempty videos whose self-distance is not exactly 0.
    std::size_t nonzero_self_count = 0;
    std::size_t triangle_violation_count = 0;
    std::vector<TriangleViolation> triangle_violations;
};

/// Checks the metric axioms of lcvs_distance empirically. Distances are
/// computed for every ordered pair (both directions separately); symmetry and
/// non-negativity must hold exactly, the triangle inequality with 1e-9 slack
/// over all ordered triples. Violations are reported, not thrown. Throws
/// InvalidArgument for fewer than three videos.
AuditReport metric_audit(std::span<const GeoVideo> videos, const LcvsParams& p);

} // namespace lcvs
