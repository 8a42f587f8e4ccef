#include "invdim/systems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "invdim/errors.hpp"
#include "invdim/parallel.hpp"
#include "invdim/rng.hpp"

namespace invdim {

namespace {

std::string point_str(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.dim(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

double get_param(const std::map<std::string, double>& given,
                 const std::vector<std::pair<std::string, double>>& defaults,
                 const std::string& key) {
  auto it = given.find(key);
  if (it != given.end()) return it->second;
  for (const auto& [k, v] : defaults)
    if (k == key) return v;
  throw InvalidInput("systems: missing parameter " + key);
}

void reject_unknown(const std::string& name, const std::map<std::string, double>& given,
                    const std::vector<std::pair<std::string, double>>& defaults) {
  for (const auto& [k, v] : given) {
    bool known = false;
    for (const auto& [dk, dv] : defaults) known = known || dk == k;
    if (!known) throw InvalidInput("systems: " + name + " has no parameter '" + k + "'");
  }
}

int int_param(const std::string& name, const std::string& key, double v, int lo) {
  double r = std::round(v);
  if (!std::isfinite(v) || std::abs(v - r) > 1e-9 || r < lo)
    throw InvalidInput("systems: " + name + " parameter " + key + " must be an integer >= " +
                       std::to_string(lo));
  return int(r);
}

// Uniform grid over the torus, floor(budget^(1/n)) points per axis.
PointCloud grid_cloud(const SystemInfo& info, std::int64_t budget, std::uint64_t seed) {
  if (budget < 1) throw InvalidInput("systems: budget must be >= 1");
  const int n = info.ambient.dim;
  std::int64_t g = std::int64_t(std::floor(std::pow(double(budget), 1.0 / n) + 1e-9));
  g = std::max<std::int64_t>(g, 1);
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) total *= g;

  PointCloud cloud;
  cloud.ambient = info.ambient;
  cloud.meta = {"uniform-grid", seed, budget, 0};
  cloud.points.resize(size_t(total));
  parallel_for(total, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t idx = b; idx < e; ++idx) {
      Point p = Vec::zeros(n);
      std::int64_t rem = idx;
      for (int i = 0; i < n; ++i) {
        p[i] = double(rem % g) / double(g);
        rem /= g;
      }
      cloud.points[size_t(idx)] = p;
    }
  });
  return cloud;
}

// Random composition of inverse branches, one independent digit stream per
// output point. After `depth` steps the point sits on the invariant set to
// double precision.
PointCloud branch_cloud(const SystemInfo& info, std::int64_t budget, std::uint64_t seed,
                        int branch_count, int depth,
                        const std::function<Point(const Point&, int)>& branch_inverse) {
  if (budget < 1) throw InvalidInput("systems: budget must be >= 1");
  PointCloud cloud;
  cloud.ambient = info.ambient;
  cloud.meta = {"inverse-branch", seed, budget, depth};
  cloud.points.resize(size_t(budget));
  parallel_for(budget, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      SplitMix64 rng(derive_seed(seed, std::uint64_t(i)));
      Point x = Vec::zeros(info.ambient.dim);
      for (int k = 0; k < x.dim(); ++k) x[k] = 0.5;
      for (int step = 0; step < depth; ++step)
        x = branch_inverse(x, int(rng.below(std::uint64_t(branch_count))));
      cloud.points[size_t(i)] = x;
    }
  });
  return cloud;
}

}  // namespace

std::string invariance_name(Invariance inv) {
  switch (inv) {
    case Invariance::Forward: return "forward";
    case Invariance::Backward: return "backward";
    default: return "both";
  }
}

double SystemInfo::param(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  throw InvalidInput("systems: " + name + " has no parameter '" + key + "'");
}

bool System::contains(const Point& x) const {
  return x.dim() == info_.ambient.dim && x.finite();
}

std::optional<Point> System::inverse_evaluate(const Point&) const {
  throw UnsupportedOperation("systems: " + info_.name + " has no inverse");
}

Matrix System::inverse_jacobian(const Point&) const {
  throw UnsupportedOperation("systems: " + info_.name + " has no inverse");
}

void System::require_inside(const Point& x, const char* who) const {
  if (!contains(x))
    throw OutsideDomain("systems: " + info_.name + "::" + who + " at point outside domain " +
                        point_str(x));
}

double System::sampler_resolution(std::int64_t budget) const {
  double d = info_.reference_dimension.value_or(double(info_.ambient.dim));
  d = std::max(d, 0.5);
  const double b = double(std::max<std::int64_t>(budget, 2));
  // covering-radius estimate for ~b samples of a d-dimensional set
  return 4.0 * std::pow(std::log(b) / b, 1.0 / d);
}

namespace {

// ---------------------------------------------------------------------------
// torus maps
// ---------------------------------------------------------------------------

class CatMap final : public System {
 public:
  explicit CatMap(SystemInfo info) : System(std::move(info)) {}

  std::optional<Point> evaluate(const Point& x) const override {
    if (!contains(x)) return std::nullopt;
    Point y = Vec::zeros(2);
    y[0] = wrap_unit(2.0 * x[0] + x[1]);
    y[1] = wrap_unit(x[0] + x[1]);
    return y;
  }

  Matrix jacobian(const Point& x) const override {
    require_inside(x, "jacobian");
    return Matrix::from_rows({{2, 1}, {1, 1}});
  }

  std::optional<Point> inverse_evaluate(const Point& x) const override {
    if (!contains(x)) return std::nullopt;
    Point y = Vec::zeros(2);
    y[0] = wrap_unit(x[0] - x[1]);
    y[1] = wrap_unit(-x[0] + 2.0 * x[1]);
    return y;
  }

  Matrix inverse_jacobian(const Point& x) const override {
    require_inside(x, "inverse_jacobian");
    return Matrix::from_rows({{1, -1}, {-1, 2}});
  }

  PointCloud sample_invariant_set(std::int64_t budget, std::uint64_t seed) const override {
    return grid_cloud(info_, budget, seed);
  }

  double sampler_resolution(std::int64_t budget) const override {
    const auto g = std::max<std::int64_t>(1, std::int64_t(std::floor(std::sqrt(double(budget)))));
    return 1.0 / double(g);
  }
};

class ToralEndomorphism final : public System {
 public:
  ToralEndomorphism(SystemInfo info, int p, int q) : System(std::move(info)), p_(p), q_(q) {}

  std::optional<Point> evaluate(const Point& x) const override {
    if (!contains(x)) return std::nullopt;
    Point y = Vec::zeros(2);
    y[0] = wrap_unit(double(p_) * x[0]);
    y[1] = wrap_unit(double(q_) * x[1]);
    return y;
  }

  Matrix jacobian(const Point& x) const override {
    require_inside(x, "jacobian");
    return Matrix::diagonal({double(p_), double(q_)});
  }

  PointCloud sample_invariant_set(std::int64_t budget, std::uint64_t seed) const override {
    return grid_cloud(info_, budget, seed);
  }

  double sampler_resolution(std::int64_t budget) const override {
    const auto g = std::max<std::int64_t>(1, std::int64_t(std::floor(std::sqrt(double(budget)))));
    return 1.0 / double(g);
  }

 private:
  int p_, q_;
};

class CircleExpanding final : public System {
 public:
  CircleExpanding(SystemInfo info, int k) : System(std::move(info)), k_(k) {}

  std::optional<Point> evaluate(const Point& x) const override {
    if (!contains(x)) return std::nullopt;
    Point y = Vec::zeros(1);
    y[0] = wrap_unit(double(k_) * x[0]);
    return y;
  }

  Matrix jacobian(const Point& x) const override {
    require_inside(x, "jacobian");
    return Matrix::diagonal({double(k_)});
  }

  PointCloud sample_invariant_set(std::int64_t budget, std::uint64_t seed) const override {
    // K is the whole circle; backward random iteration equidistributes.
    return branch_cloud(info_, budget, seed, k_, 64, [this](const Point& x, int branch) {
      Point y = Vec::zeros(1);
      y[0] = (x[0] + double(branch)) / double(k_);
      return y;
    });
  }

 private:
  int k_;
};

// ---------------------------------------------------------------------------
// planar maps
// ---------------------------------------------------------------------------

// Two affine branches on the unit square: (x, y) -> (lam*x, mu*y) on the
// bottom strip y <= 1/mu, and (1 - lam*x, mu*(1 - y)) on the top strip
// y >= 1 - 1/mu. The middle strip escapes; the non-escaping set is the
// product of a lam-Cantor set in x and a (1/mu)-Cantor set in y.
class LinearHorseshoe final : public System {
 public:
  LinearHorseshoe(SystemInfo info, double lam, double mu)
      : System(std::move(info)), lam_(lam), mu_(mu) {}

  bool contains(const Point& x) const override {
    if (!System::contains(x)) return false;
    if (x[0] < 0.0 || x[0] > 1.0 || x[1] < 0.0 || x[1] > 1.0) return false;
    return x[1] <= 1.0 / mu_ || x[1] >= 1.0 - 1.0 / mu_;
  }

  std::optional<Point> evaluate(const Point& x) const override {
    if (!contains(x)) return std::nullopt;
    Point y = Vec::zeros(2);
    if (x[1] <= 1.0 / mu_) {
      y[0] = lam_ * x[0];
      y[1] = mu_ * x[1];
    } else {
      y[0] = 1.0 - lam_ * x[0];
      y[1] = mu_ * (1.0 - x[1]);
    }
    return y;
  }

  Matrix jacobian(const Point& x) const override {
    require_inside(x, "jacobian");
    if (x[1] <= 1.0 / mu_) return Matrix::diagonal({lam_, mu_});
    return Matrix::diagonal({-lam_, -mu_});
  }

  std::optional<Point> inverse_evaluate(const Point& x) const override {
    if (x.dim() != 2 || !x.finite()) return std::nullopt;
    if (x[1] < 0.0 || x[1] > 1.0) return std::nullopt;
    Point y = Vec::zeros(2);
    if (x[0] >= 0.0 && x[0] <= lam_) {
      y[0] = x[0] / lam_;
      y[1] = x[1] / mu_;
      return y;
    }
    if (x[0] >= 1.0 - lam_ && x[0] <= 1.0) {
      y[0] = (1.0 - x[0]) / lam_;
      y[1] = 1.0 - x[1] / mu_;
      return y;
    }
    return std::nullopt;  // outside the image strips
  }

  Matrix inverse_jacobian(const Point& x) const override {
    if (!inverse_evaluate(x))
      throw OutsideDomain("systems: linear_horseshoe::inverse_jacobian outside image at " +
                          point_str(x));
    if (x[0] <= lam_) return Matrix::diagonal({1.0 / lam_, 1.0 / mu_});
    return Matrix::diagonal({-1.0 / lam_, -1.0 / mu_});
  }

  PointCloud sample_invariant_set(std::int64_t budget, std::uint64_t seed) const override {
    // Direct generation: each point is the product of two random Cantor-set
    // addresses, one per axis, resolved to 64 symbolic digits.
    if (budget < 1) throw InvalidInput("systems: budget must be >= 1");
    PointCloud cloud;
    cloud.ambient = info_.ambient;
    cloud.meta = {"symbolic-address", seed, budget, 64};
    cloud.points.resize(size_t(budget));
    const double lam = lam_, mu = mu_;
    parallel_for(budget, [&](std::int64_t b, std::int64_t e) {
      for (std::int64_t i = b; i < e; ++i) {
        SplitMix64 rng(derive_seed(seed, std::uint64_t(i)));
        const std::uint64_t xbits = rng.next(), ybits = rng.next();
        double x = 0.5, y = 0.5;
        for (int k = 0; k < 64; ++k) {
          x = (xbits >> k) & 1u ? 1.0 - lam * x : lam * x;
          y = (ybits >> k) & 1u ? 1.0 - y / mu : y / mu;
        }
        Point p = Vec::zeros(2);
        p[0] = x;
        p[1] = y;
        cloud.points[size_t(i)] = p;
      }
    });
    return cloud;
  }

 private:
  double lam_, mu_;
};

// Piecewise-affine expanding interval map: both halves of [0,1] minus the
// middle-alpha gap map affinely onto [0,1]. The non-escaping set is the
// self-similar Cantor set with ratio s = (1-alpha)/2.
class CookieCutter final : public System {
 public:
  CookieCutter(SystemInfo info, double alpha)
      : System(std::move(info)), s_((1.0 - alpha) / 2.0) {}

  bool contains(const Point& x) const override {
    if (!System::contains(x)) return false;
    return (x[0] >= 0.0 && x[0] <= s_) || (x[0] >= 1.0 - s_ && x[0] <= 1.0);
  }

  std::optional<Point> evaluate(const Point& x) const override {
    if (!contains(x)) return std::nullopt;
    Point y = Vec::zeros(1);
    y[0] = x[0] <= s_ ? x[0] / s_ : (x[0] - (1.0 - s_)) / s_;
    return y;
  }

  Matrix jacobian(const Point& x) const override {
    require_inside(x, "jacobian");
    return Matrix::diagonal({1.0 / s_});
  }

  PointCloud sample_invariant_set(std::int64_t budget, std::uint64_t seed) const override {
    const double s = s_;
    return branch_cloud(info_, budget, seed, 2, 64, [s](const Point& x, int branch) {
      Point y = Vec::zeros(1);
      y[0] = branch ? (1.0 - s) + s * x[0] : s * x[0];
      return y;
    });
  }

 private:
  double s_;
};

class Henon final : public System {
 public:
  Henon(SystemInfo info, double a, double b) : System(std::move(info)), a_(a), b_(b) {}

  bool contains(const Point& x) const override {
    return System::contains(x) && norm_inf(x) <= kEscapeBound;
  }

  std::optional<Point> evaluate(const Point& x) const override {
    if (!contains(x)) return std::nullopt;
    Point y = Vec::zeros(2);
    y[0] = 1.0 - a_ * x[0] * x[0] + x[1];
    y[1] = b_ * x[0];
    return y;
  }

  Matrix jacobian(const Point& x) const override {
    require_inside(x, "jacobian");
    return Matrix::from_rows({{-2.0 * a_ * x[0], 1.0}, {b_, 0.0}});
  }

  std::optional<Point> inverse_evaluate(const Point& x) const override {
    if (!contains(x)) return std::nullopt;
    Point y = Vec::zeros(2);
    y[0] = x[1] / b_;
    y[1] = x[0] - 1.0 + a_ * (x[1] / b_) * (x[1] / b_);
    return y;
  }

  Matrix inverse_jacobian(const Point& x) const override {
    require_inside(x, "inverse_jacobian");
    return Matrix::from_rows({{0.0, 1.0 / b_}, {1.0, 2.0 * a_ * x[1] / (b_ * b_)}});
  }

  PointCloud sample_invariant_set(std::int64_t budget, std::uint64_t seed) const override;

 private:
  static constexpr double kEscapeBound = 1e6;
  double a_, b_;
};

class ContractingAffine final : public System {
 public:
  ContractingAffine(SystemInfo info, Matrix a, Vec c)
      : System(std::move(info)), a_(a), c_(c), inv_a_(Matrix(a.dim())) {
    // column-wise solve gives the exact inverse used by inverse_jacobian
    for (int j = 0; j < a_.dim(); ++j) {
      Vec ej = Vec::zeros(a_.dim());
      ej[j] = 1.0;
      Vec col = solve(a_, ej);
      for (int i = 0; i < a_.dim(); ++i) inv_a_(i, j) = col[i];
    }
  }

  std::optional<Point> evaluate(const Point& x) const override {
    if (!contains(x)) return std::nullopt;
    return add(a_.apply(x), c_);
  }

  Matrix jacobian(const Point& x) const override {
    require_inside(x, "jacobian");
    return a_;
  }

  std::optional<Point> inverse_evaluate(const Point& x) const override {
    if (!contains(x)) return std::nullopt;
    return inv_a_.apply(sub(x, c_));
  }

  Matrix inverse_jacobian(const Point& x) const override {
    require_inside(x, "inverse_jacobian");
    return inv_a_;
  }

  PointCloud sample_invariant_set(std::int64_t budget, std::uint64_t seed) const override;

 private:
  Matrix a_;
  Vec c_;
  Matrix inv_a_;
};

// Forward iteration with transient discard, split into fixed-length orbit
// chunks so the cloud is identical for every thread count.
PointCloud forward_orbit_cloud(const System& sys, std::int64_t budget, std::uint64_t seed,
                               int transient, const std::function<Point(SplitMix64&)>& start) {
  if (budget < 1) throw InvalidInput("systems: budget must be >= 1");
  constexpr std::int64_t kChunk = 8192;
  constexpr int kMaxRestarts = 100;

  PointCloud cloud;
  cloud.ambient = sys.info().ambient;
  cloud.meta = {"forward-orbit", seed, budget, transient};
  cloud.points.resize(size_t(budget));

  const std::int64_t chunks = (budget + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::int64_t cb, std::int64_t ce) {
    for (std::int64_t c = cb; c < ce; ++c) {
      const std::int64_t lo = c * kChunk;
      const std::int64_t hi = std::min(budget, lo + kChunk);
      Point escape_point = Vec::zeros(sys.info().ambient.dim);
      bool done = false;
      for (int attempt = 0; attempt < kMaxRestarts && !done; ++attempt) {
        SplitMix64 rng(derive_seed(seed, std::uint64_t(c) * 1009u + std::uint64_t(attempt)));
        Point x = start(rng);
        bool escaped = false;
        for (int t = 0; t < transient && !escaped; ++t) {
          auto next = sys.evaluate(x);
          if (!next) {
            escaped = true;
            escape_point = x;
          } else {
            x = *next;
          }
        }
        if (escaped) continue;
        std::int64_t idx = lo;
        for (; idx < hi; ++idx) {
          auto next = sys.evaluate(x);
          if (!next) {
            escape_point = x;
            break;
          }
          cloud.points[size_t(idx)] = x;
          x = *next;
        }
        done = idx == hi;
      }
      if (!done)
        throw SamplerFailure("systems: " + sys.info().name +
                             " orbit escaped past the retry limit near " + point_str(escape_point));
    }
  });
  return cloud;
}

PointCloud Henon::sample_invariant_set(std::int64_t budget, std::uint64_t seed) const {
  return forward_orbit_cloud(*this, budget, seed, 1000, [](SplitMix64& rng) {
    Point p = Vec::zeros(2);
    p[0] = 0.1 * (rng.uniform01() - 0.5);
    p[1] = 0.1 * (rng.uniform01() - 0.5);
    return p;
  });
}

PointCloud ContractingAffine::sample_invariant_set(std::int64_t budget, std::uint64_t seed) const {
  const int n = info_.ambient.dim;
  return forward_orbit_cloud(*this, budget, seed, 1000, [n](SplitMix64& rng) {
    Point p = Vec::zeros(n);
    for (int i = 0; i < n; ++i) p[i] = rng.uniform01() - 0.5;
    return p;
  });
}

// ---------------------------------------------------------------------------
// registry
// ---------------------------------------------------------------------------

struct BuiltinDef {
  std::string name;
  std::vector<std::pair<std::string, double>> defaults;
  std::function<SystemPtr(const std::map<std::string, double>&)> make;
};

const std::vector<BuiltinDef>& builtin_defs() {
  static const std::vector<BuiltinDef> defs = [] {
    std::vector<BuiltinDef> d;

    d.push_back({"cat_map", {}, [](const std::map<std::string, double>& p) -> SystemPtr {
                   reject_unknown("cat_map", p, {});
                   SystemInfo info;
                   info.name = "cat_map";
                   info.ambient = {SpaceKind::FlatTorus, 2};
                   info.degree = 1;
                   info.invariance = Invariance::Both;
                   info.invertible = true;
                   info.reference_dimension = 2.0;
                   info.reference_note = "invariant set is the whole torus";
                   return std::make_unique<CatMap>(std::move(info));
                 }});

    d.push_back({"toral_endomorphism",
                 {{"p", 2}, {"q", 3}},
                 [](const std::map<std::string, double>& given) -> SystemPtr {
                   const std::vector<std::pair<std::string, double>> defs0 = {{"p", 2}, {"q", 3}};
                   reject_unknown("toral_endomorphism", given, defs0);
                   int p = int_param("toral_endomorphism", "p", get_param(given, defs0, "p"), 1);
                   int q = int_param("toral_endomorphism", "q", get_param(given, defs0, "q"), 1);
                   SystemInfo info;
                   info.name = "toral_endomorphism";
                   info.ambient = {SpaceKind::FlatTorus, 2};
                   info.params = {{"p", double(p)}, {"q", double(q)}};
                   info.degree = p * q;
                   info.invariance = Invariance::Both;
                   info.invertible = p == 1 && q == 1;
                   info.reference_dimension = 2.0;
                   info.reference_note = "invariant set is the whole torus";
                   return std::make_unique<ToralEndomorphism>(std::move(info), p, q);
                 }});

    d.push_back({"circle_expanding",
                 {{"k", 3}},
                 [](const std::map<std::string, double>& given) -> SystemPtr {
                   const std::vector<std::pair<std::string, double>> defs0 = {{"k", 3}};
                   reject_unknown("circle_expanding", given, defs0);
                   int k = int_param("circle_expanding", "k", get_param(given, defs0, "k"), 2);
                   SystemInfo info;
                   info.name = "circle_expanding";
                   info.ambient = {SpaceKind::FlatTorus, 1};
                   info.params = {{"k", double(k)}};
                   info.degree = k;
                   info.invariance = Invariance::Both;
                   info.invertible = false;
                   info.reference_dimension = 1.0;
                   info.reference_note = "invariant set is the whole circle";
                   return std::make_unique<CircleExpanding>(std::move(info), k);
                 }});

    d.push_back({"linear_horseshoe",
                 {{"lambda", 0.2}, {"mu", 4}},
                 [](const std::map<std::string, double>& given) -> SystemPtr {
                   const std::vector<std::pair<std::string, double>> defs0 = {{"lambda", 0.2},
                                                                              {"mu", 4}};
                   reject_unknown("linear_horseshoe", given, defs0);
                   double lam = get_param(given, defs0, "lambda");
                   double mu = get_param(given, defs0, "mu");
                   if (!(lam > 0.0 && lam < 0.5))
                     throw InvalidInput("systems: linear_horseshoe needs lambda in (0, 1/2)");
                   if (!(mu > 2.0)) throw InvalidInput("systems: linear_horseshoe needs mu > 2");
                   SystemInfo info;
                   info.name = "linear_horseshoe";
                   info.ambient = {SpaceKind::Euclidean, 2};
                   info.params = {{"lambda", lam}, {"mu", mu}};
                   info.invariance = Invariance::Both;
                   info.invertible = true;
                   info.reference_dimension =
                       std::log(2.0) / std::log(mu) + std::log(2.0) / (-std::log(lam));
                   info.reference_note = "product of two self-similar Cantor sets";
                   return std::make_unique<LinearHorseshoe>(std::move(info), lam, mu);
                 }});

    d.push_back({"cookie_cutter",
                 {{"alpha", 1.0 / 3.0}},
                 [](const std::map<std::string, double>& given) -> SystemPtr {
                   const std::vector<std::pair<std::string, double>> defs0 = {
                       {"alpha", 1.0 / 3.0}};
                   reject_unknown("cookie_cutter", given, defs0);
                   double alpha = get_param(given, defs0, "alpha");
                   if (!(alpha > 0.0 && alpha < 1.0))
                     throw InvalidInput("systems: cookie_cutter needs alpha in (0, 1)");
                   const double s = (1.0 - alpha) / 2.0;
                   SystemInfo info;
                   info.name = "cookie_cutter";
                   info.ambient = {SpaceKind::Euclidean, 1};
                   info.params = {{"alpha", alpha}};
                   info.invariance = Invariance::Both;
                   info.invertible = false;
                   info.reference_dimension = std::log(2.0) / (-std::log(s));
                   info.reference_note = "self-similar Cantor set with ratio (1-alpha)/2";
                   return std::make_unique<CookieCutter>(std::move(info), alpha);
                 }});

    d.push_back({"henon",
                 {{"a", 1.4}, {"b", 0.3}},
                 [](const std::map<std::string, double>& given) -> SystemPtr {
                   const std::vector<std::pair<std::string, double>> defs0 = {{"a", 1.4},
                                                                              {"b", 0.3}};
                   reject_unknown("henon", given, defs0);
                   double a = get_param(given, defs0, "a");
                   double b = get_param(given, defs0, "b");
                   if (b == 0.0 || !std::isfinite(a) || !std::isfinite(b))
                     throw InvalidInput("systems: henon needs finite a and b != 0");
                   SystemInfo info;
                   info.name = "henon";
                   info.ambient = {SpaceKind::Euclidean, 2};
                   info.params = {{"a", a}, {"b", b}};
                   info.invariance = Invariance::Both;
                   info.invertible = true;
                   if (a == 1.4 && b == 0.3) {
                     info.reference_dimension = 1.26;
                     info.reference_note = "box-counting estimates reported for these parameters";
                   }
                   return std::make_unique<Henon>(std::move(info), a, b);
                 }});

    d.push_back(
        {"contracting_affine",
         {{"a11", 0.5}, {"a12", 0}, {"a21", 0}, {"a22", 0.5}, {"c1", 0}, {"c2", 0}},
         [](const std::map<std::string, double>& given) -> SystemPtr {
           const std::vector<std::pair<std::string, double>> defs0 = {
               {"a11", 0.5}, {"a12", 0}, {"a21", 0}, {"a22", 0.5}, {"c1", 0}, {"c2", 0}};
           reject_unknown("contracting_affine", given, defs0);
           Matrix a = Matrix::from_rows(
               {{get_param(given, defs0, "a11"), get_param(given, defs0, "a12")},
                {get_param(given, defs0, "a21"), get_param(given, defs0, "a22")}});
           Vec c{get_param(given, defs0, "c1"), get_param(given, defs0, "c2")};
           if (!(operator_norm(a) < 1.0))
             throw InvalidInput("systems: contracting_affine needs operator norm of A below 1");
           if (log_abs_det(a).sign == 0)
             throw InvalidInput("systems: contracting_affine needs invertible A");
           SystemInfo info;
           info.name = "contracting_affine";
           info.ambient = {SpaceKind::Euclidean, 2};
           info.params = {{"a11", a(0, 0)}, {"a12", a(0, 1)}, {"a21", a(1, 0)},
                          {"a22", a(1, 1)}, {"c1", c[0]},    {"c2", c[1]}};
           info.invariance = Invariance::Both;
           info.invertible = true;
           info.reference_dimension = 0.0;
           info.reference_note = "unique attracting fixed point";
           return std::make_unique<ContractingAffine>(std::move(info), a, c);
         }});

    return d;
  }();
  return defs;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& d : builtin_defs()) names.push_back(d.name);
  return names;
}

std::vector<SystemInfo> builtin_catalog() {
  std::vector<SystemInfo> out;
  for (const auto& d : builtin_defs()) out.push_back(d.make({})->info());
  return out;
}

SystemPtr make_system(const std::string& name, const std::map<std::string, double>& params) {
  for (const auto& d : builtin_defs())
    if (d.name == name) return d.make(params);
  std::string known;
  for (const auto& d : builtin_defs()) known += (known.empty() ? "" : ", ") + d.name;
  throw InvalidInput("systems: unknown system '" + name + "' (known: " + known + ")");
}

}  // namespace invdim
