#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <unordered_map>

#include "invdim/errors.hpp"
#include "invdim/systems.hpp"
#include "oracles.hpp"

using namespace invdim;

namespace {

// grid-hash nearest-neighbor test: is some cloud point within h of q?
class NeighborIndex {
 public:
  NeighborIndex(const PointCloud& cloud, double h) : cloud_(cloud), h_(h) {
    for (size_t i = 0; i < cloud.points.size(); ++i) bins_[key(cloud.points[i])].push_back(i);
  }

  bool within(const Point& q, double h) const {
    const int n = cloud_.ambient.dim;
    std::array<std::int64_t, kMaxDim> base{};
    for (int i = 0; i < n; ++i) base[size_t(i)] = cell(q[i]);
    std::array<int, kMaxDim> off{};
    off.fill(-1);
    while (true) {
      std::int64_t k = 0;
      for (int i = 0; i < n; ++i) k = k * 1000003 + (base[size_t(i)] + off[size_t(i)]);
      auto it = bins_.find(k);
      if (it != bins_.end())
        for (size_t idx : it->second)
          if (distance(cloud_.ambient, cloud_.points[idx], q) <= h) return true;
      int axis = 0;
      while (axis < n) {
        if (++off[size_t(axis)] <= 1) break;
        off[size_t(axis)] = -1;
        ++axis;
      }
      if (axis == n) break;
    }
    return false;
  }

 private:
  std::int64_t cell(double x) const { return std::int64_t(std::floor(x / h_)); }
  std::int64_t key(const Point& p) const {
    std::int64_t k = 0;
    for (int i = 0; i < cloud_.ambient.dim; ++i) k = k * 1000003 + cell(p[i]);
    return k;
  }

  const PointCloud& cloud_;
  double h_;
  std::unordered_map<std::int64_t, std::vector<size_t>> bins_;
};

}  // namespace

TEST(Evaluate, KnownImages) {
  const auto cat = make_system("cat_map");
  const auto fixed = cat->evaluate(Point{0.0, 0.0});
  ASSERT_TRUE(fixed);
  EXPECT_DOUBLE_EQ((*fixed)[0], 0.0);
  EXPECT_DOUBLE_EQ((*fixed)[1], 0.0);

  const auto circle = make_system("circle_expanding", {{"k", 3}});
  const auto y = circle->evaluate(Point{0.2});
  ASSERT_TRUE(y);
  EXPECT_NEAR((*y)[0], 0.6, 1e-12);

  const auto henon = make_system("henon", {{"a", 1.4}, {"b", 0.3}});
  const auto img = henon->evaluate(Point{0.0, 0.0});
  ASSERT_TRUE(img);
  EXPECT_DOUBLE_EQ((*img)[0], 1.0);
  EXPECT_DOUBLE_EQ((*img)[1], 0.0);
}

TEST(Evaluate, HorseshoeEscapeSignal) {
  const auto hs = make_system("linear_horseshoe", {{"lambda", 0.2}, {"mu", 4}});
  EXPECT_FALSE(hs->evaluate(Point{0.5, 0.5}));  // middle strip escapes
  EXPECT_TRUE(hs->evaluate(Point{0.5, 0.1}));
  EXPECT_FALSE(hs->inverse_evaluate(Point{0.5, 0.5}));  // outside the image strips
  EXPECT_THROW(hs->jacobian(Point{0.5, 0.5}), OutsideDomain);
}

TEST(Jacobian, KnownMatrices) {
  const auto cat = make_system("cat_map");
  const Matrix jc = cat->jacobian(Point{0.3, 0.7});
  EXPECT_DOUBLE_EQ(jc(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(jc(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(jc(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(jc(1, 1), 1.0);

  const auto henon = make_system("henon");
  const Matrix jh = henon->jacobian(Point{0.0, 0.0});
  EXPECT_DOUBLE_EQ(jh(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(jh(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(jh(1, 0), 0.3);
  EXPECT_DOUBLE_EQ(jh(1, 1), 0.0);

  const auto circle = make_system("circle_expanding", {{"k", 3}});
  EXPECT_DOUBLE_EQ(circle->jacobian(Point{0.9})(0, 0), 3.0);
}

TEST(Inverse, KnownMatricesAndRoundTrip) {
  const auto cat = make_system("cat_map");
  const Matrix ji = cat->inverse_jacobian(Point{0.1, 0.9});
  EXPECT_DOUBLE_EQ(ji(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(ji(0, 1), -1.0);
  EXPECT_DOUBLE_EQ(ji(1, 0), -1.0);
  EXPECT_DOUBLE_EQ(ji(1, 1), 2.0);

  const auto hs = make_system("linear_horseshoe", {{"lambda", 0.2}, {"mu", 4}});
  const Matrix jh = hs->inverse_jacobian(Point{0.1, 0.5});
  EXPECT_DOUBLE_EQ(jh(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(jh(1, 1), 0.25);

  for (const char* name : {"cat_map", "linear_horseshoe", "henon", "contracting_affine"}) {
    const auto sys = make_system(name);
    const auto cloud = sys->sample_invariant_set(1000, 11);
    for (const auto& p : cloud.points) {
      const auto fwd = sys->evaluate(p);
      ASSERT_TRUE(fwd) << name;
      const auto back = sys->inverse_evaluate(*fwd);
      ASSERT_TRUE(back) << name;
      EXPECT_LE(distance(sys->info().ambient, *back, p), 1e-9) << name;
    }
  }
}

TEST(Inverse, JacobianIsMatrixInverseAtPreimage) {
  for (const char* name : {"cat_map", "linear_horseshoe", "henon", "contracting_affine"}) {
    const auto sys = make_system(name);
    const auto cloud = sys->sample_invariant_set(200, 23);
    for (const auto& p : cloud.points) {
      const auto pre = sys->inverse_evaluate(p);
      ASSERT_TRUE(pre) << name;
      const Matrix inv_j = sys->inverse_jacobian(p);
      const Matrix j_at_pre = sys->jacobian(*pre);
      const Matrix prod = matmul(j_at_pre, inv_j);
      for (int i = 0; i < prod.dim(); ++i)
        for (int k = 0; k < prod.dim(); ++k)
          EXPECT_NEAR(prod(i, k), i == k ? 1.0 : 0.0, 1e-8) << name;
    }
  }
}

TEST(Inverse, UnsupportedThrows) {
  const auto circle = make_system("circle_expanding", {{"k", 3}});
  EXPECT_THROW(circle->inverse_evaluate(Point{0.2}), UnsupportedOperation);
  EXPECT_THROW(circle->inverse_jacobian(Point{0.2}), UnsupportedOperation);
  const auto cookie = make_system("cookie_cutter");
  EXPECT_THROW(cookie->inverse_evaluate(Point{0.1}), UnsupportedOperation);
}

TEST(Registry, NamesAndValidation) {
  const auto names = builtin_names();
  for (const char* expected :
       {"cat_map", "toral_endomorphism", "circle_expanding", "linear_horseshoe", "cookie_cutter",
        "henon", "contracting_affine"})
    EXPECT_NE(std::find(names.begin(), names.end(), expected), names.end());

  EXPECT_THROW(make_system("no_such_system"), InvalidInput);
  EXPECT_THROW(make_system("henon", {{"bogus", 1.0}}), InvalidInput);
  EXPECT_THROW(make_system("linear_horseshoe", {{"lambda", 0.7}}), InvalidInput);
  EXPECT_THROW(make_system("linear_horseshoe", {{"mu", 1.5}}), InvalidInput);
  EXPECT_THROW(make_system("henon", {{"b", 0.0}}), InvalidInput);
  EXPECT_THROW(make_system("contracting_affine", {{"a11", 1.2}}), InvalidInput);

  const auto hs = make_system("linear_horseshoe", {{"lambda", 0.2}, {"mu", 4}});
  ASSERT_TRUE(hs->info().reference_dimension);
  EXPECT_NEAR(*hs->info().reference_dimension,
              std::log(2.0) / std::log(4.0) + std::log(2.0) / std::log(5.0), 1e-12);
}

TEST(Sampler, CookieCutterTernaryDigits) {
  const auto cookie = make_system("cookie_cutter");  // middle thirds
  const auto cloud = cookie->sample_invariant_set(10000, 3);
  ASSERT_EQ(cloud.size(), 10000);
  for (const auto& p : cloud.points) {
    ASSERT_GE(p[0], 0.0);
    ASSERT_LE(p[0], 1.0);
    EXPECT_TRUE(oracles::avoids_middle_third(p[0], 8)) << p[0];
  }
}

TEST(Sampler, CatMapGridFillsBoxes) {
  const auto cat = make_system("cat_map");
  const auto cloud = cat->sample_invariant_set(10000, 1);
  ASSERT_EQ(cloud.size(), 10000);
  bool occupied[10][10] = {};
  for (const auto& p : cloud.points) {
    ASSERT_GE(p[0], 0.0);
    ASSERT_LT(p[0], 1.0);
    occupied[int(p[0] * 10)][int(p[1] * 10)] = true;
  }
  int filled = 0;
  for (auto& row : occupied)
    for (bool b : row) filled += b;
  EXPECT_EQ(filled, 100);
}

TEST(Sampler, ContractingAffineCollapsesToFixedPoint) {
  const auto sys = make_system("contracting_affine");
  const auto cloud = sys->sample_invariant_set(500, 9);
  for (const auto& p : cloud.points) EXPECT_LE(norm(p), 1e-6);
}

TEST(Sampler, DeterministicAcrossThreadCounts) {
  for (const char* name : {"henon", "cookie_cutter", "cat_map", "linear_horseshoe"}) {
    setenv("INVDIM_THREADS", "1", 1);
    const auto one = make_system(name)->sample_invariant_set(20000, 42);
    setenv("INVDIM_THREADS", "8", 1);
    const auto eight = make_system(name)->sample_invariant_set(20000, 42);
    unsetenv("INVDIM_THREADS");
    ASSERT_EQ(one.size(), eight.size()) << name;
    for (size_t i = 0; i < one.points.size(); ++i)
      for (int d = 0; d < one.ambient.dim; ++d) {
        const double a = one.points[i][d], b = eight.points[i][d];
        ASSERT_EQ(std::memcmp(&a, &b, sizeof(double)), 0) << name;
      }
  }
}

TEST(Jacobian, FiniteDifferenceValidation) {
  for (const auto& name : builtin_names()) {
    const auto sys = make_system(name);
    const auto cloud = sys->sample_invariant_set(400, 7);
    int checked = 0;
    for (const auto& p : cloud.points) {
      if (checked >= 100) break;
      const auto fd = oracles::fd_jacobian(*sys, p);
      if (!fd) continue;  // stencil crosses the domain boundary
      ++checked;
      const Matrix exact = sys->jacobian(p);
      double scale = 1.0;
      for (int i = 0; i < exact.dim(); ++i)
        for (int j = 0; j < exact.dim(); ++j) scale = std::max(scale, std::abs(exact(i, j)));
      for (int i = 0; i < exact.dim(); ++i)
        for (int j = 0; j < exact.dim(); ++j)
          EXPECT_NEAR((*fd)(i, j), exact(i, j), 1e-4 * scale) << name;
    }
    EXPECT_EQ(checked, 100) << name;
  }
}

TEST(Invariance, SampledCloudIsInvariant) {
  for (const auto& name : builtin_names()) {
    const auto sys = make_system(name);
    const std::int64_t budget = 20000;
    const auto cloud = sys->sample_invariant_set(budget, 5);
    const double h = 2.0 * sys->sampler_resolution(budget);
    NeighborIndex index(cloud, h);

    const auto inv = sys->info().invariance;
    const bool check_forward = inv == Invariance::Forward || inv == Invariance::Both;
    const bool check_backward =
        (inv == Invariance::Backward || inv == Invariance::Both) && sys->info().invertible;

    int misses = 0;
    for (const auto& p : cloud.points) {
      if (check_forward) {
        const auto q = sys->evaluate(p);
        ASSERT_TRUE(q) << name;
        if (!index.within(*q, h)) ++misses;
      }
      if (check_backward) {
        const auto q = sys->inverse_evaluate(p);
        ASSERT_TRUE(q) << name;
        if (!index.within(*q, h)) ++misses;
      }
    }
    EXPECT_EQ(misses, 0) << name << " h=" << h;
  }
}

TEST(Sampler, MetaRecorded) {
  const auto henon = make_system("henon");
  const auto cloud = henon->sample_invariant_set(1000, 77);
  EXPECT_EQ(cloud.meta.method, "forward-orbit");
  EXPECT_EQ(cloud.meta.seed, 77u);
  EXPECT_EQ(cloud.meta.budget, 1000);
  EXPECT_EQ(cloud.meta.transient, 1000);
  EXPECT_THROW(henon->sample_invariant_set(0, 1), InvalidInput);
}
