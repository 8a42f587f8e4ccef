#include "invdim/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "invdim/errors.hpp"
#include "invdim/parallel.hpp"

namespace invdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rescale the accumulated product when entries grow large; the factored-out
// magnitude lives in log_scale so arbitrarily long products cannot overflow.
void renormalize(Matrix& j, double& log_scale) {
  double amax = 0;
  for (int r = 0; r < j.dim(); ++r)
    for (int c = 0; c < j.dim(); ++c) amax = std::max(amax, std::abs(j(r, c)));
  if (amax > 1e100) {
    for (int r = 0; r < j.dim(); ++r)
      for (int c = 0; c < j.dim(); ++c) j(r, c) /= amax;
    log_scale += std::log(amax);
  }
}

struct OrbitRecord {
  // per schedule entry; valid[k] false once the orbit escaped before m_k steps
  std::vector<double> log_det;
  std::vector<double> log_norm;
  std::vector<double> log_norm_product;
  std::vector<bool> valid;
  double step_abs_det = kInf;  // min |det| of the single-step Jacobians seen
};

std::vector<int> doubling_schedule(int m_max) {
  if (m_max < 1) throw InvalidInput("bounds: m_max must be >= 1");
  std::vector<int> ms;
  for (int m = 1; m <= m_max; m *= 2) ms.push_back(m);
  if (ms.back() != m_max) ms.push_back(m_max);
  return ms;
}

}  // namespace

std::string direction_name(Direction dir) {
  return dir == Direction::Forward ? "forward" : "inverse";
}

std::string bound_kind_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::Thm11: return "thm11";
    case BoundKind::Thm12: return "thm12";
    case BoundKind::Thm25: return "thm25";
    default: return "rmk24";
  }
}

GrowthRates growth_rates(const System& sys, const PointCloud& cloud, int m_max, Direction dir) {
  if (cloud.points.empty()) throw InvalidInput("bounds: growth_rates needs a non-empty cloud");
  if (dir == Direction::Inverse && !sys.info().invertible)
    throw UnsupportedOperation("bounds: inverse growth rates need an invertible system");

  const std::vector<int> ms = doubling_schedule(m_max);
  const int steps = ms.back();
  const auto npts = std::int64_t(cloud.points.size());

  std::vector<OrbitRecord> records(static_cast<size_t>(npts));
  parallel_for(npts, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      OrbitRecord rec;
      rec.log_det.assign(ms.size(), 0);
      rec.log_norm.assign(ms.size(), 0);
      rec.log_norm_product.assign(ms.size(), 0);
      rec.valid.assign(ms.size(), false);

      Point x = cloud.points[size_t(i)];
      Matrix acc = Matrix::identity(sys.info().ambient.dim);
      double log_scale = 0, log_det_sum = 0, log_norm_prod = 0;
      size_t next_record = 0;

      for (int step = 0; step < steps && next_record < ms.size(); ++step) {
        // the step map decides domain membership; its Jacobian is defined
        // exactly where the step map is
        const auto next = dir == Direction::Forward ? sys.evaluate(x) : sys.inverse_evaluate(x);
        if (!next) break;
        const Matrix j = dir == Direction::Forward ? sys.jacobian(x) : sys.inverse_jacobian(x);
        const LogDet ld = log_abs_det(j);
        log_det_sum = ld.sign == 0 ? -kInf : log_det_sum + ld.log_magnitude;
        log_norm_prod += std::log(operator_norm(j));
        rec.step_abs_det = std::min(rec.step_abs_det, ld.sign == 0 ? 0.0 : std::exp(ld.log_magnitude));
        acc = matmul(j, acc);
        renormalize(acc, log_scale);

        if (step + 1 == ms[next_record]) {
          rec.log_det[next_record] = log_det_sum;
          rec.log_norm[next_record] = std::log(operator_norm(acc)) + log_scale;
          rec.log_norm_product[next_record] = log_norm_prod;
          rec.valid[next_record] = true;
          ++next_record;
        }
        x = *next;
      }
      records[size_t(i)] = std::move(rec);
    }
  });

  GrowthRates rates;
  rates.direction = dir;
  rates.sample_points = npts;
  rates.min_step_abs_det = kInf;
  for (const auto& rec : records) rates.min_step_abs_det = std::min(rates.min_step_abs_det, rec.step_abs_det);
  if (!std::isfinite(rates.min_step_abs_det)) rates.min_step_abs_det = 0;

  for (size_t k = 0; k < ms.size(); ++k) {
    double min_det = kInf, max_norm = -kInf, max_norm_prod = -kInf;
    std::int64_t alive = 0;
    for (const auto& rec : records) {
      if (!rec.valid[k]) continue;
      ++alive;
      min_det = std::min(min_det, rec.log_det[k]);
      max_norm = std::max(max_norm, rec.log_norm[k]);
      max_norm_prod = std::max(max_norm_prod, rec.log_norm_product[k]);
    }
    if (alive == 0) break;  // every orbit escaped before this m
    const double m = double(ms[size_t(k)]);
    rates.m_values.push_back(ms[size_t(k)]);
    rates.c_over_m.push_back(min_det / m);
    rates.a_over_m.push_back(max_norm / m);
    rates.norm_product_over_m.push_back(max_norm_prod / m);
    rates.survivors.push_back(alive);
  }
  if (rates.m_values.empty())
    throw SamplerFailure("bounds: every orbit escaped the domain before one " +
                         direction_name(dir) + " step");
  rates.dropped_points = npts - rates.survivors.back();

  rates.b_hat = -kInf;
  rates.s_hat = kInf;
  for (size_t k = 0; k < rates.m_values.size(); ++k) {
    rates.b_hat = std::max(rates.b_hat, rates.c_over_m[k]);
    rates.s_hat = std::min(rates.s_hat, rates.a_over_m[k]);
  }
  return rates;
}

BoundResult thm11_from_extrema(double max_abs_det, double min_smallest_singular, int n,
                               std::int64_t sample_points) {
  BoundResult res;
  res.kind = BoundKind::Thm11;
  res.inputs_digest = {{"max_abs_det", max_abs_det},
                       {"min_smallest_singular_value", min_smallest_singular},
                       {"ambient_dim", double(n)},
                       {"sample_points", double(sample_points)}};
  if (!(min_smallest_singular > 0.0) || !(min_smallest_singular < 1.0)) {
    res.reason = "hypothesis 0 < min S_n < 1 fails";
    return res;
  }
  const double log_d_hat = std::log(max_abs_det);
  if (log_d_hat > 0.0) {
    res.reason = "no d <= n satisfies the inequality (max |det| > 1)";
    return res;
  }
  res.applicable = true;
  // minimal admissible d: the inequality's left side is monotone decreasing in d
  double d_star = log_d_hat == 0.0 ? double(n)
                                   : double(n) + log_d_hat / (-std::log(min_smallest_singular));
  res.notes.push_back("strictness margin at d = n: " + std::to_string(1.0 - max_abs_det));
  if (d_star < 0.0) {
    res.notes.push_back("raw value below 0; clamped");
    d_star = 0.0;
  }
  res.value = d_star;
  return res;
}

BoundResult thm11_min_d(const System& sys, const PointCloud& cloud) {
  if (cloud.points.empty()) throw InvalidInput("bounds: thm11_min_d needs a non-empty cloud");
  const auto npts = std::int64_t(cloud.points.size());
  std::vector<double> log_dets(static_cast<size_t>(npts));
  std::vector<double> smallest(static_cast<size_t>(npts));
  parallel_for(npts, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      const Matrix j = sys.jacobian(cloud.points[size_t(i)]);
      log_dets[size_t(i)] = log_abs_det(j).log_magnitude;
      smallest[size_t(i)] = singular_values(j).smallest();
    }
  });
  double max_log_det = -kInf, min_sigma = kInf;
  for (std::int64_t i = 0; i < npts; ++i) {
    max_log_det = std::max(max_log_det, log_dets[size_t(i)]);
    min_sigma = std::min(min_sigma, smallest[size_t(i)]);
  }
  return thm11_from_extrema(std::exp(max_log_det), min_sigma, sys.info().ambient.dim, npts);
}

namespace {

BoundResult growth_bound(const GrowthRates& rates, int n, BoundKind kind, Direction expected,
                         std::optional<int> degree) {
  BoundResult res;
  res.kind = kind;
  res.inputs_digest = {{"b_hat", rates.b_hat},
                       {"s_hat", rates.s_hat},
                       {"m_max", double(rates.m_values.empty() ? 0 : rates.m_values.back())},
                       {"sample_points", double(rates.sample_points)},
                       {"dropped_points", double(rates.dropped_points)},
                       {"ambient_dim", double(n)}};
  if (degree) res.inputs_digest.push_back({"degree", double(*degree)});
  if (rates.direction != expected)
    throw InvalidInput("bounds: " + bound_kind_name(kind) + " needs " + direction_name(expected) +
                       " growth rates");
  if (!(rates.b_hat > 0.0)) {
    res.reason = "hypothesis b > 0 fails (b_hat = " + std::to_string(rates.b_hat) + ")";
    return res;
  }
  if (!(rates.s_hat > 0.0)) {
    res.reason = "estimated s <= 0 at finite m; growth rates inconsistent";
    return res;
  }
  if (degree && !(rates.min_step_abs_det > 0.0)) {
    res.reason = "Jacobian determinant vanishes on the sampled set";
    return res;
  }

  const double log_deg = degree ? std::log(double(*degree)) : 0.0;
  double value = double(n) - (rates.b_hat - log_deg) / rates.s_hat;
  res.applicable = true;
  if (degree && rates.b_hat <= log_deg)
    res.notes.push_back("b_hat <= log degree: bound is not strictly below n");
  if (value > double(n)) {
    res.notes.push_back("raw value above n; clamped");
    value = double(n);
  }
  if (value < 0.0) {
    res.notes.push_back("raw value below 0; clamped");
    value = 0.0;
  }
  res.value = value;
  return res;
}

}  // namespace

BoundResult thm12_bound(const GrowthRates& forward_rates, int degree, int n) {
  if (degree < 1) throw InvalidInput("bounds: thm12_bound needs degree >= 1");
  return growth_bound(forward_rates, n, BoundKind::Thm12, Direction::Forward, degree);
}

BoundResult thm25_bound(const GrowthRates& inverse_rates, int n) {
  return growth_bound(inverse_rates, n, BoundKind::Thm25, Direction::Inverse, std::nullopt);
}

BoundResult remark24_bound(const GrowthRates& forward_rates, int n) {
  return growth_bound(forward_rates, n, BoundKind::Rmk24, Direction::Forward, std::nullopt);
}

int degree_check(const System& sys, const Point& y, int grid_resolution) {
  const AmbientSpace space = sys.info().ambient;
  if (!space.torus())
    throw InvalidInput("bounds: degree_check needs a flat-torus ambient (closed manifold)");
  if (grid_resolution < 2) throw InvalidInput("bounds: degree_check needs grid_resolution >= 2");
  const int n = space.dim;

  constexpr double kNewtonTol = 1e-10;
  constexpr double kDedupRadius = 1e-6;
  constexpr double kCriticalDet = 1e-8;

  std::vector<Point> roots;
  std::vector<int> signs;

  std::int64_t seeds = 1;
  for (int i = 0; i < n; ++i) seeds *= grid_resolution;

  for (std::int64_t s = 0; s < seeds; ++s) {
    Point x = Vec::zeros(n);
    std::int64_t rem = s;
    for (int i = 0; i < n; ++i) {
      x[i] = (double(rem % grid_resolution) + 0.5) / double(grid_resolution);
      rem /= grid_resolution;
    }

    bool converged = false;
    for (int iter = 0; iter < 50; ++iter) {
      const auto fx = sys.evaluate(x);
      if (!fx) break;
      const Vec residual = displacement(space, y, *fx);  // shortest f(x) - y on the torus
      if (norm(residual) < kNewtonTol) {
        converged = true;
        break;
      }
      Matrix j = sys.jacobian(x);
      Vec step;
      try {
        step = solve(j, residual);
      } catch (const InvalidInput&) {
        break;  // singular Jacobian at the iterate; abandon this seed
      }
      if (norm(step) > 0.5) step = scale(step, 0.5 / norm(step));  // keep iterates on the chart
      x = wrap(space, sub(x, step));
    }
    if (!converged) continue;

    bool duplicate = false;
    for (const auto& r : roots)
      if (distance(space, r, x) < kDedupRadius) {
        duplicate = true;
        break;
      }
    if (duplicate) continue;

    const LogDet det = log_abs_det(sys.jacobian(x));
    if (det.sign == 0 || std::exp(det.log_magnitude) <= kCriticalDet) {
      std::ostringstream os;
      os << "bounds: degree_check found a near-critical preimage (|det| <= " << kCriticalDet
         << "); pick another regular value y";
      throw NearCriticalValue(os.str());
    }
    roots.push_back(x);
    signs.push_back(det.sign);
  }

  int degree = 0;
  for (int s : signs) degree += s;
  return degree;
}

}  // namespace invdim
