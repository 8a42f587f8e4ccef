#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "invdim/geometry.hpp"
#include "invdim/matrix.hpp"
#include "invdim/systems.hpp"

namespace invdim {

enum class Direction { Forward, Inverse };

std::string direction_name(Direction dir);

/// Per-m growth statistics of Jacobian products along forward or inverse
/// orbits, extrapolated by running extrema: the determinant sequence is
/// superadditive (limit = sup), the norm sequence subadditive (limit = inf),
/// so b_hat is the running max of c_over_m and s_hat the running min of
/// a_over_m.
struct GrowthRates {
  Direction direction = Direction::Forward;
  std::vector<int> m_values;              // doubling schedule 1, 2, 4, ..., m_max
  std::vector<double> c_over_m;           // (1/m) log min over cloud of |det D f^{±m}|
  std::vector<double> a_over_m;           // (1/m) log max over cloud of |D f^{±m}|
  std::vector<double> norm_product_over_m;  // diagnostic: product-of-step-norms upper bound
  std::vector<std::int64_t> survivors;    // points whose orbit stayed in the domain to each m
  std::int64_t sample_points = 0;
  std::int64_t dropped_points = 0;        // escaped before the final computed m
  double min_step_abs_det = 0;            // min |det| of a single step over the cloud
  double b_hat = 0;
  double s_hat = 0;
};

/// Composes exact Jacobians along each point's orbit (orbit computed once,
/// prefix products reused), taking per-m extrema over the cloud. Points whose
/// orbit leaves the domain are dropped from later m with a count in
/// diagnostics; m values with no survivors are truncated.
GrowthRates growth_rates(const System& sys, const PointCloud& cloud, int m_max, Direction dir);

enum class BoundKind { Thm11, Thm12, Thm25, Rmk24 };

std::string bound_kind_name(BoundKind kind);

/// One theorem bound on the upper box dimension. When applicable, the value
/// is clamped into [0, n] with an explanatory note. Extrema are taken over
/// the sampled cloud, which approximates the invariant set; every result
/// carries that annotation in its inputs digest.
struct BoundResult {
  BoundKind kind = BoundKind::Thm11;
  bool applicable = false;
  std::optional<double> value;
  std::string reason;  // set when inapplicable
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, double>> inputs_digest;
};

/// Single-step bound: with D = max |det D f| and sigma = min S_n(D f) over
/// the cloud, the smallest admissible d solves D * sigma^(d-n) = 1, giving
/// d = n + log D / (-log sigma). Requires 0 < sigma < 1 and D <= 1.
BoundResult thm11_min_d(const System& sys, const PointCloud& cloud);

/// Same computation from precomputed extrema (exposed for direct checks).
BoundResult thm11_from_extrema(double max_abs_det, double min_smallest_singular, int n,
                               std::int64_t sample_points = 0);

/// Degree bound: n - (b - log degree)/s when b > 0; clamped at n (with a
/// note) when 0 < b <= log degree. Requires forward rates and a non-zero
/// Jacobian determinant on the cloud.
BoundResult thm12_bound(const GrowthRates& forward_rates, int degree, int n);

/// Inverse-iterate growth bound: n - b/s when b > 0, from inverse rates.
BoundResult thm25_bound(const GrowthRates& inverse_rates, int n);

/// Forward-iterate growth bound: n - b/s when b > 0, from forward rates.
BoundResult remark24_bound(const GrowthRates& forward_rates, int n);

/// Signed count of preimages of the regular value y, located by grid seeding
/// and Newton refinement (tolerance 1e-10, deduplication radius 1e-6).
/// Requires a flat-torus ambient. A preimage with |det| <= 1e-8 raises
/// NearCriticalValue.
int degree_check(const System& sys, const Point& y, int grid_resolution = 32);

}  // namespace invdim
