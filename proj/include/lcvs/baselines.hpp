#pragma once

#include "lcvs/lcvs.hpp"

#include <cstddef>

namespace lcvs {

/// Point-threshold LCSS. Only positions are compared; r, theta and delta are
/// ignored.
struct LcssParams {
    /// Two positions match when their Euclidean distance is at most epsilon (m).
    double epsilon = 10.0;
    unsigned sigma = 1;
};

/// Number of matched pairs. Same recursion as lcvs_score with a match worth 1.
/// Throws InvalidArgument for a non-positive epsilon.
std::size_t lcss_score(const GeoVideo& a, const GeoVideo& b, const LcssParams& p);

/// 1 - score / min(m, n), with the empty-input convention of lcvs_distance.
double lcss_distance(const GeoVideo& a, const GeoVideo& b, const LcssParams& p);

/// Symmetric Hausdorff distance between the two position sets, in meters.
/// Throws EmptyInput when either video has no frames.
double hausdorff_distance(const GeoVideo& a, const GeoVideo& b);

} // namespace lcvs
