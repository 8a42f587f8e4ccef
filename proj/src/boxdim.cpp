#include "invdim/boxdim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "invdim/errors.hpp"

namespace invdim {

namespace {

struct CellKey {
  std::array<std::int64_t, kMaxDim> idx{};
  int n = 0;

  bool operator==(const CellKey& o) const {
    if (n != o.n) return false;
    for (int i = 0; i < n; ++i)
      if (idx[size_t(i)] != o.idx[size_t(i)]) return false;
    return true;
  }
};

struct CellKeyHash {
  size_t operator()(const CellKey& k) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (int i = 0; i < k.n; ++i) {
      h ^= std::uint64_t(k.idx[size_t(i)]);
      h *= 0x100000001b3ull;
      h ^= h >> 29;
    }
    return size_t(h);
  }
};

void check_cloud(const PointCloud& cloud, const char* who) {
  if (cloud.points.empty()) throw InvalidInput(std::string("boxdim: ") + who + ": empty cloud");
  if (cloud.ambient.dim < 1 || cloud.ambient.dim > kMaxDim)
    throw InvalidInput(std::string("boxdim: ") + who + ": bad ambient dimension");
}

FitResult fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t m = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = double(m) * sxx - sx * sx;
  FitResult fit;
  fit.slope = denom != 0.0 ? (double(m) * sxy - sx * sy) / denom : 0.0;
  fit.intercept = (sy - fit.slope * sx) / double(m);
  double ss = 0;
  for (size_t i = 0; i < m; ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / double(m));
  for (size_t i = 0; i + 1 < m; ++i)
    fit.pair_slopes.push_back((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
  return fit;
}

}  // namespace

ScaleSchedule ScaleSchedule::geometric(double delta_max, double ratio, int count) {
  if (!(delta_max > 0) || !std::isfinite(delta_max))
    throw InvalidInput("boxdim: schedule needs delta_max > 0");
  if (!(ratio > 0 && ratio < 1)) throw InvalidInput("boxdim: schedule needs ratio in (0, 1)");
  if (count < 1) throw InvalidInput("boxdim: schedule needs at least one scale");
  ScaleSchedule s;
  double d = delta_max;
  for (int i = 0; i < count; ++i, d *= ratio) s.deltas.push_back(d);
  return s;
}

void ScaleSchedule::validate() const {
  if (deltas.empty()) throw InvalidInput("boxdim: empty scale schedule");
  for (size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0) || !std::isfinite(deltas[i]))
      throw InvalidInput("boxdim: scales must be positive and finite");
    if (i > 0 && deltas[i] >= deltas[i - 1])
      throw InvalidInput("boxdim: scales must be strictly decreasing");
  }
}

std::int64_t box_count(const PointCloud& cloud, double delta) {
  check_cloud(cloud, "box_count");
  if (!(delta > 0) || !std::isfinite(delta)) throw InvalidInput("boxdim: box_count needs delta > 0");

  const int n = cloud.ambient.dim;
  const bool torus = cloud.ambient.torus();
  std::int64_t cells_per_axis = 0;
  if (torus) cells_per_axis = std::max<std::int64_t>(1, std::int64_t(std::ceil(1.0 / delta)));

  std::unordered_set<CellKey, CellKeyHash> occupied;
  occupied.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    CellKey key;
    key.n = n;
    for (int i = 0; i < n; ++i) {
      if (torus) {
        const double x = wrap_unit(p[i]);
        auto idx = std::int64_t(x * double(cells_per_axis));
        key.idx[size_t(i)] = std::min(idx, cells_per_axis - 1);
      } else {
        key.idx[size_t(i)] = std::int64_t(std::floor(p[i] / delta));
      }
    }
    occupied.insert(key);
  }
  return std::int64_t(occupied.size());
}

FitResult estimate_box_dimension(const PointCloud& cloud, const ScaleSchedule& schedule,
                                 double saturation_fraction) {
  check_cloud(cloud, "estimate_box_dimension");
  schedule.validate();

  const double cutoff = saturation_fraction * double(cloud.size());
  FitResult fit;
  std::vector<double> xs, ys;
  for (double delta : schedule.deltas) {
    const auto count = box_count(cloud, delta);
    ScalePoint sp{delta, double(count), double(count) <= cutoff};
    fit.scales.push_back(sp);
    if (sp.used) {
      xs.push_back(-std::log(delta));
      ys.push_back(std::log(double(count)));
    }
  }
  if (xs.size() < 3) {
    std::ostringstream diag;
    diag << "usable scales: " << xs.size() << " of " << schedule.deltas.size()
         << " (saturation cutoff " << cutoff << " boxes, cloud size " << cloud.size() << ")";
    for (const auto& sp : fit.scales)
      diag << "\n  delta " << sp.delta << " -> " << std::int64_t(sp.value)
           << (sp.used ? "" : " [saturated]");
    throw InsufficientScales("boxdim: fewer than 3 usable scales", diag.str());
  }
  const auto scales = fit.scales;
  FitResult out = fit_loglog(xs, ys);
  out.scales = scales;
  out.dimension = out.slope;
  return out;
}

double neighborhood_volume(const PointCloud& cloud, double r) {
  check_cloud(cloud, "neighborhood_volume");
  if (!(r > 0) || !std::isfinite(r)) throw InvalidInput("boxdim: neighborhood_volume needs r > 0");

  const int n = cloud.ambient.dim;
  const bool torus = cloud.ambient.torus();
  const double r2 = r * r;

  // grid geometry: cell side h <= r/4, anchored at `origin`
  double h;
  Vec origin = Vec::zeros(n);
  std::array<std::int64_t, kMaxDim> dims{};
  std::int64_t total = 1;
  if (torus) {
    const auto m = std::max<std::int64_t>(1, std::int64_t(std::ceil(4.0 / r)));
    h = 1.0 / double(m);
    for (int i = 0; i < n; ++i) dims[size_t(i)] = m;
  } else {
    h = r / 4.0;
    Vec lo = cloud.points.front(), hi = cloud.points.front();
    for (const auto& p : cloud.points)
      for (int i = 0; i < n; ++i) {
        lo[i] = std::min(lo[i], p[i]);
        hi[i] = std::max(hi[i], p[i]);
      }
    for (int i = 0; i < n; ++i) {
      origin[i] = lo[i] - r - h;
      dims[size_t(i)] = std::int64_t(std::ceil((hi[i] + r + h - origin[i]) / h)) + 1;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (total > (std::int64_t(1) << 31) / dims[size_t(i)])
      throw InvalidInput("boxdim: neighborhood grid too fine; increase r");
    total *= dims[size_t(i)];
  }

  std::vector<std::uint8_t> covered(size_t(total), 0);
  const auto reach = std::int64_t(std::ceil(r / h)) + 1;

  // stamp all cells whose center lies within r of each point
  std::array<std::int64_t, kMaxDim> base{}, off{};
  for (const auto& p : cloud.points) {
    for (int i = 0; i < n; ++i) {
      const double x = torus ? wrap_unit(p[i]) : p[i];
      base[size_t(i)] = std::int64_t(std::floor((x - origin[i]) / h));
      off[size_t(i)] = -reach;
    }
    while (true) {
      double d2 = 0;
      std::int64_t flat = 0, stride = 1;
      bool inside = true;
      for (int i = 0; i < n && inside; ++i) {
        std::int64_t ci = base[size_t(i)] + off[size_t(i)];
        if (torus) {
          ci %= dims[size_t(i)];
          if (ci < 0) ci += dims[size_t(i)];
        } else if (ci < 0 || ci >= dims[size_t(i)]) {
          inside = false;
          break;
        }
        const double center = origin[i] + (double(ci) + 0.5) * h;
        double diff = (torus ? wrap_unit(p[i]) : p[i]) - center;
        if (torus) {
          diff -= std::round(diff);
        }
        d2 += diff * diff;
        flat += ci * stride;
        stride *= dims[size_t(i)];
      }
      if (inside && d2 < r2) covered[size_t(flat)] = 1;
      // advance the offset counter
      int axis = 0;
      while (axis < n) {
        if (++off[size_t(axis)] <= reach) break;
        off[size_t(axis)] = -reach;
        ++axis;
      }
      if (axis == n) break;
    }
  }

  std::int64_t occupied = 0;
  for (auto b : covered) occupied += b;
  double cell_volume = 1.0;
  for (int i = 0; i < n; ++i) cell_volume *= h;
  return double(occupied) * cell_volume;
}

namespace {

// Largest nearest-neighbor distance over a deterministic subsample: a proxy
// for the cloud's covering resolution. Below it the sampled neighborhood
// undercounts the set's true neighborhood volume.
double cloud_resolution(const PointCloud& cloud) {
  const auto npts = std::int64_t(cloud.points.size());
  if (npts < 2) return 0.0;
  const std::int64_t subsample = std::min<std::int64_t>(npts, 256);
  const std::int64_t stride = std::max<std::int64_t>(1, npts / subsample);
  double worst = 0.0;
  for (std::int64_t s = 0; s < npts; s += stride) {
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < npts; ++i) {
      if (i == s) continue;
      best = std::min(best, distance(cloud.ambient, cloud.points[size_t(s)],
                                     cloud.points[size_t(i)]));
      if (best == 0.0) break;
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

FitResult lemma21_estimate(const PointCloud& cloud, const ScaleSchedule& schedule) {
  check_cloud(cloud, "lemma21_estimate");
  schedule.validate();

  // finite-sample cutoff, mirroring the saturation filter on the count side:
  // scales below the cloud's own resolution are discarded
  const double rho = cloud_resolution(cloud);

  const int n = cloud.ambient.dim;
  FitResult fit;
  std::vector<double> xs, ys;
  for (double r : schedule.deltas) {
    const bool used = r >= rho;
    // volumes below the resolution are not computed: they would only measure
    // the sample, and their grids can be arbitrarily fine
    const double vol = used ? neighborhood_volume(cloud, r)
                            : std::numeric_limits<double>::quiet_NaN();
    fit.scales.push_back({r, vol, used});
    if (used) {
      xs.push_back(-std::log(r));
      ys.push_back(std::log(vol));
    }
  }
  if (xs.size() < 3) {
    std::ostringstream diag;
    diag << "usable scales: " << xs.size() << " of " << schedule.deltas.size()
         << " (cloud resolution " << rho << ")";
    for (const auto& sp : fit.scales)
      diag << "\n  r " << sp.delta << " -> vol " << sp.value
           << (sp.used ? "" : " [below sample resolution]");
    throw InsufficientScales("boxdim: fewer than 3 usable scales for the volume route",
                             diag.str());
  }
  const auto scales = fit.scales;
  FitResult out = fit_loglog(xs, ys);
  out.scales = scales;
  out.dimension = double(n) + out.slope;
  return out;
}

}  // namespace invdim
