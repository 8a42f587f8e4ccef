#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace invdim {

inline constexpr int kMaxDim = 8;

/// Fixed-capacity coordinate vector (ambient dimensions up to kMaxDim).
struct Vec {
  std::array<double, kMaxDim> c{};
  int n = 0;

  Vec() = default;
  Vec(std::initializer_list<double> xs) {
    n = int(xs.size());
    int i = 0;
    for (double x : xs) c[size_t(i++)] = x;
  }
  static Vec zeros(int dim) {
    Vec v;
    v.n = dim;
    return v;
  }

  int dim() const { return n; }
  double operator[](int i) const { return c[size_t(i)]; }
  double& operator[](int i) { return c[size_t(i)]; }
  bool finite() const;
};

using Point = Vec;

Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, double s);
double norm(const Vec& a);
double norm_inf(const Vec& a);

enum class SpaceKind { Euclidean, FlatTorus };

/// Ambient model space: Euclidean R^n or the flat torus [0,1)^n with
/// wraparound metric.
struct AmbientSpace {
  SpaceKind kind = SpaceKind::Euclidean;
  int dim = 0;

  bool torus() const { return kind == SpaceKind::FlatTorus; }
  std::string kind_name() const { return torus() ? "flat_torus" : "euclidean"; }
};

/// Reduces x into [0,1).
double wrap_unit(double x);

/// Wraps every coordinate into [0,1) when the space is a torus; identity otherwise.
Point wrap(const AmbientSpace& space, Point p);

/// Shortest representative of (b - a): per-axis wrapped into [-1/2, 1/2) on the torus.
Vec displacement(const AmbientSpace& space, const Vec& a, const Vec& b);

/// Metric distance. On the torus this equals the minimum over lattice translates
/// of the Euclidean distance (computed per axis, which is equivalent).
double distance(const AmbientSpace& space, const Vec& a, const Vec& b);

struct CloudMeta {
  std::string method;
  std::uint64_t seed = 0;
  std::int64_t budget = 0;
  int transient = 0;
};

/// Finite sample approximating a compact invariant set.
struct PointCloud {
  AmbientSpace ambient;
  std::vector<Point> points;
  CloudMeta meta;

  std::int64_t size() const { return std::int64_t(points.size()); }
};

/// Diameter of the sampled set: bounding-box diagonal in Euclidean space,
/// sqrt(n)/2 (the maximal wrapped distance) on the torus.
double cloud_diameter(const PointCloud& cloud);

}  // namespace invdim
