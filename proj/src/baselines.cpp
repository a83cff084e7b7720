#include "lcvs/baselines.hpp"

#include "lcvs/error.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace lcvs {

std::size_t lcss_score(const GeoVideo& a, const GeoVideo& b, const LcssParams& p) {
    if (!(p.epsilon > 0)) {
        throw InvalidArgument("LCSS epsilon must be positive");
    }
    const auto fa = a.fovs();
    const auto fb = b.fovs();
    const std::size_t m = fa.size();
    const std::size_t n = fb.size();
    if (m == 0 || n == 0) {
        return 0;
    }
    std::vector<std::size_t> prev(n + 1, 0);
    std::vector<std::size_t> cur(n + 1, 0);
    for (std::size_t i = 1; i <= m; ++i) {
        cur[0] = 0;
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t off = i > j ? i - j : j - i;
            if (off <= p.sigma && distance(fa[i - 1].position(), fb[j - 1].position()) <= p.epsilon) {
                cur[j] = prev[j - 1] + 1;
            } else {
                cur[j] = std::max(prev[j], cur[j - 1]);
            }
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

double lcss_distance(const GeoVideo& a, const GeoVideo& b, const LcssParams& p) {
    return distance_from_score(static_cast<double>(lcss_score(a, b, p)), a.size(), b.size());
}

namespace {

double directed_hausdorff(std::span<const FoV> from, std::span<const FoV> to) {
    double worst = 0;
    for (const FoV& f : from) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const FoV& g : to) {
            nearest = std::min(nearest, distance(f.position(), g.position()));
            if (nearest <= worst) {
                break; // cannot raise the max any more
            }
        }
        worst = std::max(worst, nearest);
    }
    return worst;
}

} // namespace

double hausdorff_distance(const GeoVideo& a, const GeoVideo& b) {
    if (a.empty() || b.empty()) {
        throw EmptyInput("Hausdorff distance needs two nonempty videos");
    }
    return std::max(directed_hausdorff(a.fovs(), b.fovs()), directed_hausdorff(b.fovs(), a.fovs()));
}

} // namespace lcvs
