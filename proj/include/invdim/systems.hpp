#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "invdim/geometry.hpp"
#include "invdim/matrix.hpp"

namespace invdim {

/// Which inclusions hold for the invariant set K: f(K) subset K (Forward),
/// K subset f(K) (Backward), or both.
enum class Invariance { Forward, Backward, Both };

std::string invariance_name(Invariance inv);

/// Static description of a built-in map.
struct SystemInfo {
  std::string name;
  AmbientSpace ambient;
  std::vector<std::pair<std::string, double>> params;  // ordered for reproducible output
  std::optional<int> degree;                           // only on closed (torus) ambients
  Invariance invariance = Invariance::Both;
  bool invertible = false;  // true when the map is a diffeomorphism onto its image
  std::optional<double> reference_dimension;
  std::string reference_note;

  double param(const std::string& key) const;
};

/// A smooth map with exact Jacobian, an inverse where one exists, and a
/// sampler producing a deterministic point cloud approximating its compact
/// invariant set. Instances are immutable after construction and safe to
/// share across threads.
class System {
 public:
  virtual ~System() = default;

  const SystemInfo& info() const { return info_; }

  /// Domain-of-definition test. Points outside escape rather than crash.
  virtual bool contains(const Point& x) const;

  /// Applies the map; nullopt signals that x lies outside the domain.
  virtual std::optional<Point> evaluate(const Point& x) const = 0;

  /// Exact analytic Jacobian. Throws OutsideDomain when !contains(x).
  virtual Matrix jacobian(const Point& x) const = 0;

  /// Inverse map / its Jacobian. Throw UnsupportedOperation when the system
  /// is not invertible; return nullopt when x lies outside the image.
  virtual std::optional<Point> inverse_evaluate(const Point& x) const;
  virtual Matrix inverse_jacobian(const Point& x) const;

  /// Deterministic for (system, budget, seed) regardless of thread count.
  virtual PointCloud sample_invariant_set(std::int64_t budget, std::uint64_t seed) const = 0;

  /// Covering-radius estimate of the sampled cloud, used to pick invariance
  /// test tolerances. Conservative by a fixed factor.
  virtual double sampler_resolution(std::int64_t budget) const;

 protected:
  explicit System(SystemInfo info) : info_(std::move(info)) {}

  void require_inside(const Point& x, const char* who) const;

  SystemInfo info_;
};

using SystemPtr = std::unique_ptr<System>;

/// Names of all built-in systems.
std::vector<std::string> builtin_names();

/// Descriptors of all built-ins at their default parameters.
std::vector<SystemInfo> builtin_catalog();

/// Instantiates a built-in by name. Unknown names, unknown parameter keys and
/// out-of-range values raise InvalidInput.
SystemPtr make_system(const std::string& name, const std::map<std::string, double>& params = {});

}  // namespace invdim
