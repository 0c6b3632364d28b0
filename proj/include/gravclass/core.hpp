#pragma once

// Universe data model: planets, weighted samples, global constants and the
// distance function shared by training and both predictors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gravclass {

using Vector = std::vector<double>;
using ClassLabel = std::int32_t;
using PlanetId = std::uint64_t;

// Errors ------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Domain types --------------------------------------------------------------

enum class Metric { Euclidean, Manhattan };

inline const char* to_string(Metric m) {
  return m == Metric::Euclidean ? "euclidean" : "manhattan";
}

inline Metric parse_metric(const std::string& s) {
  if (s == "euclidean") return Metric::Euclidean;
  if (s == "manhattan") return Metric::Manhattan;
  throw InvalidArgument("unknown metric '" + s + "'");
}

struct Planet {
  double mass = 0.0;
  double radius = 0.0;
  Vector position;
  ClassLabel class_label = 0;
  PlanetId id = 0;

  bool operator==(const Planet&) const = default;
};

struct HybridSample {
  Vector position;
  double mass = 1.0;
  ClassLabel class_label = 0;

  bool operator==(const HybridSample&) const = default;
};

struct UniverseConfig {
  double initial_radius = 50.0;  // r'
  double step_fraction = 0.01;   // alpha
  std::uint32_t iteration_count = 100;  // beta
  Metric distance_metric = Metric::Euclidean;
  double epsilon_distance = 1e-9;
  bool early_stop_on_collision = false;

  bool operator==(const UniverseConfig&) const = default;

  void validate() const {
    if (!(initial_radius > 0.0) || !std::isfinite(initial_radius))
      throw InvalidArgument("initial radius must be positive");
    if (!(step_fraction > 0.0) || !std::isfinite(step_fraction))
      throw InvalidArgument("step fraction must be positive");
    if (iteration_count < 1)
      throw InvalidArgument("iteration count must be at least 1");
    if (!(epsilon_distance > 0.0) || !std::isfinite(epsilon_distance))
      throw InvalidArgument("epsilon distance must be positive");
  }
};

inline bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Metric distance between two points of equal dimension.
inline double distance(std::span<const double> a, std::span<const double> b,
                       Metric metric = Metric::Euclidean) {
  if (a.size() != b.size())
    throw DimensionError("distance: dimension mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
  if (!all_finite(a) || !all_finite(b))
    throw InvalidArgument("distance: non-finite component");
  double acc = 0.0;
  if (metric == Metric::Euclidean) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      acc += d * d;
    }
    return std::sqrt(acc);
  }
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

// Same arithmetic as distance() without validation; callers have already
// checked dimension and finiteness.
inline double distance_unchecked(const double* a, const double* b, std::size_t dim,
                                 Metric metric) {
  double acc = 0.0;
  if (metric == Metric::Euclidean) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = a[i] - b[i];
      acc += d * d;
    }
    return std::sqrt(acc);
  }
  for (std::size_t i = 0; i < dim; ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

/// The trained model. Planet ids equal their index in `planets()`; planets
/// are never removed, so ids are never reused.
class Universe {
 public:
  Universe() = default;
  explicit Universe(UniverseConfig config) : config_(config) { config_.validate(); }

  const UniverseConfig& config() const { return config_; }
  UniverseConfig& mutable_config() { return config_; }

  // 0 until the first planet fixes it.
  std::size_t dimension() const { return dimension_; }
  const std::vector<Planet>& planets() const { return planets_; }
  std::size_t size() const { return planets_.size(); }
  bool empty() const { return planets_.empty(); }

  const Planet& planet(PlanetId id) const {
    if (id >= planets_.size()) throw InvalidArgument("unknown planet id " + std::to_string(id));
    return planets_[id];
  }

  void fix_dimension(std::size_t d) {
    if (d == 0) throw DimensionError("dimension must be positive");
    if (dimension_ == 0) {
      dimension_ = d;
    } else if (dimension_ != d) {
      throw DimensionError("expected dimension " + std::to_string(dimension_) + ", got " +
                           std::to_string(d));
    }
  }

  void check_point(std::span<const double> point) const {
    if (dimension_ != 0 && point.size() != dimension_)
      throw DimensionError("expected dimension " + std::to_string(dimension_) + ", got " +
                           std::to_string(point.size()));
    if (!all_finite(point)) throw InvalidArgument("non-finite coordinate");
  }

  /// Appends a planet and assigns its id.
  const Planet& add_planet(double mass, double radius, Vector position, ClassLabel label) {
    if (!(mass > 0.0) || !(radius > 0.0)) throw InvalidArgument("planet mass and radius must be positive");
    fix_dimension(position.size());
    check_point(position);
    const PlanetId id = planets_.size();
    planets_.push_back(Planet{mass, radius, std::move(position), label, id});
    return planets_.back();
  }

  /// Replaces mass, radius and position of an existing planet. Class and id
  /// are immutable.
  const Planet& update_planet(PlanetId id, double mass, double radius, Vector position) {
    if (id >= planets_.size()) throw InvalidArgument("unknown planet id " + std::to_string(id));
    if (position.size() != dimension_) throw DimensionError("update_planet: dimension mismatch");
    Planet& p = planets_[id];
    p.mass = mass;
    p.radius = radius;
    p.position = std::move(position);
    return p;
  }

  /// Restores a planet list verbatim (persistence). Ids must be 0..n-1.
  void assign(std::size_t dimension, std::vector<Planet> planets) {
    for (std::size_t i = 0; i < planets.size(); ++i) {
      const Planet& p = planets[i];
      if (p.id != i) throw FormatError("planet ids must be dense and ascending");
      if (p.position.size() != dimension) throw FormatError("planet dimension mismatch");
      if (!(p.mass > 0.0) || !(p.radius > 0.0)) throw FormatError("non-positive planet mass or radius");
    }
    if (!planets.empty() && dimension == 0) throw FormatError("planets require a positive dimension");
    dimension_ = dimension;
    planets_ = std::move(planets);
  }

  bool operator==(const Universe&) const = default;

 private:
  UniverseConfig config_;
  std::size_t dimension_ = 0;
  std::vector<Planet> planets_;
};

/// Linear scan for planets whose own radius reaches `point`, ascending id.
inline std::vector<Planet> planets_containing(const Universe& u, std::span<const double> point) {
  if (u.dimension() != 0 && point.size() != u.dimension())
    throw DimensionError("planets_containing: dimension mismatch");
  std::vector<Planet> out;
  for (const Planet& p : u.planets())
    if (distance(p.position, point, u.config().distance_metric) <= p.radius) out.push_back(p);
  return out;
}

inline double total_mass(const Universe& u) {
  return std::accumulate(u.planets().begin(), u.planets().end(), 0.0,
                         [](double acc, const Planet& p) { return acc + p.mass; });
}

}  // namespace gravclass
