#include "invdim/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace invdim {

bool Vec::finite() const {
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(c[size_t(i)])) return false;
  return true;
}

Vec add(const Vec& a, const Vec& b) {
  Vec r = a;
  for (int i = 0; i < a.n; ++i) r[i] += b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec r = a;
  for (int i = 0; i < a.n; ++i) r[i] -= b[i];
  return r;
}

Vec scale(const Vec& a, double s) {
  Vec r = a;
  for (int i = 0; i < a.n; ++i) r[i] *= s;
  return r;
}

double norm(const Vec& a) {
  double s = 0;
  for (int i = 0; i < a.n; ++i) s += a[i] * a[i];
  return std::sqrt(s);
}

double norm_inf(const Vec& a) {
  double s = 0;
  for (int i = 0; i < a.n; ++i) s = std::max(s, std::abs(a[i]));
  return s;
}

double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;  // guards x = -eps rounding up
  return r;
}

Point wrap(const AmbientSpace& space, Point p) {
  if (space.torus())
    for (int i = 0; i < p.n; ++i) p[i] = wrap_unit(p[i]);
  return p;
}

Vec displacement(const AmbientSpace& space, const Vec& a, const Vec& b) {
  Vec d = sub(b, a);
  if (space.torus()) {
    for (int i = 0; i < d.n; ++i) {
      d[i] = d[i] - std::round(d[i]);
      if (d[i] == 0.5) d[i] = -0.5;
    }
  }
  return d;
}

double distance(const AmbientSpace& space, const Vec& a, const Vec& b) {
  return norm(displacement(space, a, b));
}

double cloud_diameter(const PointCloud& cloud) {
  const int n = cloud.ambient.dim;
  if (cloud.ambient.torus()) return 0.5 * std::sqrt(double(n));
  if (cloud.points.empty()) return 0.0;
  Vec lo = cloud.points.front(), hi = cloud.points.front();
  for (const auto& p : cloud.points)
    for (int i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  return norm(sub(hi, lo));
}

}  // namespace invdim
