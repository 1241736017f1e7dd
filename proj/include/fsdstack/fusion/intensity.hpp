#ifndef FSDSTACK_FUSION_INTENSITY_HPP
#define FSDSTACK_FUSION_INTENSITY_HPP

#include <vector>

#include "fsdstack/types.hpp"

namespace fsd {

/// Default |quadratic coefficient| below which a profile counts as flat.
inline constexpr double kDefaultFlatEpsilon = 0.5;

/// Classifies a cone from per-layer median intensities (bottom-to-top) by the
/// curvature sign of a least-squares quadratic fit: concave (peak in the
/// middle) -> Blue, convex (dip in the middle) -> Yellow, flat -> Unknown.
/// Needs at least 3 layers.
ConeColor classify_intensity(const std::vector<double>& layers,
                             double epsilon_flat = kDefaultFlatEpsilon);

/// Quadratic coefficient of the least-squares fit over (layer index, median).
double intensity_fit_coefficient(const std::vector<double>& layers);

}  // namespace fsd

#endif  // FSDSTACK_FUSION_INTENSITY_HPP
