#pragma once

#include <cstdint>
#include <vector>

#include "invdim/geometry.hpp"

namespace invdim {

/// Strictly decreasing positive scales, usually geometric.
struct ScaleSchedule {
  std::vector<double> deltas;

  static ScaleSchedule geometric(double delta_max, double ratio, int count);
  void validate() const;
};

struct ScalePoint {
  double delta = 0;
  double value = 0;  // box count or neighborhood volume
  bool used = true;  // false when filtered as saturated
};

/// Least-squares fit of log(value) against -log(delta) over the used scales.
/// `dimension` is the reported dimension estimate: the slope itself for box
/// counts, n + slope for the volume route.
struct FitResult {
  double slope = 0;
  double intercept = 0;
  double residual_rms = 0;
  double dimension = 0;
  std::vector<ScalePoint> scales;
  std::vector<double> pair_slopes;  // two-point slopes between adjacent used scales
};

/// Number of occupied axis-aligned grid cells of side delta. On the torus the
/// grid has ceil(1/delta) cells per axis and wraps around. Grid boxes stand in
/// for metric balls: the two covers differ by a dimension-dependent constant
/// factor, which cancels in the log-log slope, so both give the same box
/// dimension.
std::int64_t box_count(const PointCloud& cloud, double delta);

/// Box-dimension estimate. Scales where the count exceeds
/// saturation_fraction * |cloud| are discarded (the finite sample undercounts
/// there); fewer than 3 surviving scales raises InsufficientScales.
FitResult estimate_box_dimension(const PointCloud& cloud, const ScaleSchedule& schedule,
                                 double saturation_fraction = 0.1);

/// Volume of the r-neighborhood of the cloud, estimated on a grid of side r/4:
/// cells whose center lies within distance r of some cloud point, times cell
/// volume. Distances respect the ambient (torus-wrapped).
double neighborhood_volume(const PointCloud& cloud, double r);

/// Alternative dimension estimate via neighborhood volumes:
/// n + slope of log(vol) against -log(r).
FitResult lemma21_estimate(const PointCloud& cloud, const ScaleSchedule& schedule);

}  // namespace invdim
