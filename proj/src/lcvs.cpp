#include "lcvs/lcvs.hpp"

#include "lcvs/error.hpp"

#include <algorithm>
#include <utility>

namespace lcvs {

namespace {

std::size_t offset(std::size_t i, std::size_t j) { return i > j ? i - j : j - i; }

// dp over prefix lengths with two rolling rows. `weight(i, j)` takes 0-based
// frame indices and is only called inside the sigma band.
template <class Weight>
double lcvs_dp(std::size_t m, std::size_t n, unsigned sigma, Weight&& weight) {
    if (m == 0 || n == 0) {
        return 0;
    }
    std::vector<double> prev(n + 1, 0.0);
    std::vector<double> cur(n + 1, 0.0);
    for (std::size_t i = 1; i <= m; ++i) {
        cur[0] = 0;
        for (std::size_t j = 1; j <= n; ++j) {
            const double w = offset(i, j) <= sigma ? weight(i - 1, j - 1) : 0.0;
            if (w > 0) {
                cur[j] = w + prev[j - 1];
            } else {
                cur[j] = std::max(prev[j], cur[j - 1]);
            }
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

double reference_rec(const WeightMatrix& w, std::size_t i, std::size_t j, unsigned sigma) {
    if (i == 0 || j == 0) {
        return 0;
    }
    const double last = w(i - 1, j - 1);
    if (last > 0 && offset(i, j) <= sigma) {
        return last + reference_rec(w, i - 1, j - 1, sigma);
    }
    return std::max(reference_rec(w, i - 1, j, sigma), reference_rec(w, i, j - 1, sigma));
}

} // namespace

GeoVideo::GeoVideo(std::string id, std::vector<FoV> fovs) : m_id(std::move(id)), m_fovs(std::move(fovs)) {
    for (std::size_t i = 1; i < m_fovs.size(); ++i) {
        if (m_fovs[i].t() <= m_fovs[i - 1].t()) {
            throw InvalidArgument("video '" + m_id + "': frame indices must be strictly increasing");
        }
    }
}

WeightMatrix WeightMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    WeightMatrix w(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) {
            throw InvalidArgument("weight matrix rows differ in length");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            w(i, j) = rows[i][j];
        }
    }
    return w;
}

std::vector<ViewRegion> prepare_regions(const GeoVideo& video, ApproxMethod method) {
    std::vector<ViewRegion> out;
    out.reserve(video.size());
    for (const FoV& f : video.fovs()) {
        out.push_back(make_view_region(f, method));
    }
    return out;
}

double lcvs_score(std::span<const ViewRegion> a, std::span<const ViewRegion> b, unsigned sigma) {
    return lcvs_dp(a.size(), b.size(), sigma,
                   [&](std::size_t i, std::size_t j) { return cvw(a[i], b[j]); });
}

double lcvs_score(const GeoVideo& a, const GeoVideo& b, const LcvsParams& p) {
    const auto ra = prepare_regions(a, p.method);
    const auto rb = prepare_regions(b, p.method);
    return lcvs_score(ra, rb, p.sigma);
}

double lcvs_score(const WeightMatrix& w, unsigned sigma) {
    return lcvs_dp(w.rows(), w.cols(), sigma, [&](std::size_t i, std::size_t j) { return w(i, j); });
}

double lcvs_reference(const WeightMatrix& w, unsigned sigma) {
    if (w.rows() > kReferenceMaxLength || w.cols() > kReferenceMaxLength) {
        throw InputTooLarge("exhaustive LCVS reference is limited to " +
                            std::to_string(kReferenceMaxLength) + " frames per video");
    }
    return reference_rec(w, w.rows(), w.cols(), sigma);
}

double lcvs_reference(const GeoVideo& a, const GeoVideo& b, const LcvsParams& p) {
    if (a.size() > kReferenceMaxLength || b.size() > kReferenceMaxLength) {
        throw InputTooLarge("exhaustive LCVS reference is limited to " +
                            std::to_string(kReferenceMaxLength) + " frames per video");
    }
    // Full weight table, band or not: the recursion decides what it reads.
    WeightMatrix w(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            w(i, j) = cvw(a.fovs()[i], b.fovs()[j], p.method);
        }
    }
    return reference_rec(w, w.rows(), w.cols(), p.sigma);
}

double distance_from_score(double score, std::size_t m, std::size_t n) {
    const std::size_t shorter = std::min(m, n);
    if (shorter == 0) {
        return 1.0;
    }
    const double similarity = std::clamp(score / static_cast<double>(shorter), 0.0, 1.0);
    return 1.0 - similarity;
}

double lcvs_similarity(const GeoVideo& a, const GeoVideo& b, const LcvsParams& p) {
    const std::size_t shorter = std::min(a.size(), b.size());
    if (shorter == 0) {
        return 0;
    }
    return std::clamp(lcvs_score(a, b, p) / static_cast<double>(shorter), 0.0, 1.0);
}

double lcvs_distance(const GeoVideo& a, const GeoVideo& b, const LcvsParams& p) {
    return 1.0 - lcvs_similarity(a, b, p);
}

AuditReport metric_audit(std::span<const GeoVideo> videos, const LcvsParams& p) {
    const std::size_t n = videos.size();
    if (n < 3) {
        throw InvalidArgument("metric audit needs at least three videos");
    }
    std::vector<std::vector<ViewRegion>> regions;
    regions.reserve(n);
    for (const GeoVideo& v : videos) {
        regions.push_back(prepare_regions(v, p.method));
    }

    // Both directions are computed independently so that symmetry is tested.
    std::vector<double> d(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double score = lcvs_score(regions[i], regions[j], p.sigma);
            d[i * n + j] = distance_from_score(score, videos[i].size(), videos[j].size());
        }
    }

    AuditReport report;
    report.n_videos = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (!videos[i].empty() && d[i * n + i] != 0.0) {
            ++report.nonzero_self_count;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (d[i * n + j] < 0) {
                ++report.negative_count;
            }
            if (j > i) {
                ++report.pairs_checked;
                if (d[i * n + j] != d[j * n + i]) {
                    ++report.asymmetric_count;
                }
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                ++report.triples_checked;
                const double lhs = d[a * n + b] + d[b * n + c];
                const double rhs = d[a * n + c];
                if (lhs < rhs - 1e-9) {
                    ++report.triangle_violation_count;
                    report.triangle_violations.push_back(
                        {videos[a].id(), videos[b].id(), videos[c].id(), lhs, rhs});
                }
            }
        }
    }
    return report;
}

} // namespace lcvs
