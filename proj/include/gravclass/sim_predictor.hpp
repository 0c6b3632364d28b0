#pragma once

// Simulation back-end: drop a unit test mass at the query, walk it beta
// fixed-length steps along the net pull of every planet, then read the class
// of whatever captures it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "gravclass/core.hpp"
#include "gravclass/spatial_index.hpp"

namespace gravclass {

enum class Capture { InsidePlanetsMode, NearestFallback, EquilibriumStop };

inline const char* to_string(Capture c) {
  switch (c) {
    case Capture::InsidePlanetsMode: return "inside-planets-mode";
    case Capture::NearestFallback: return "nearest-fallback";
    case Capture::EquilibriumStop: return "equilibrium-stop";
  }
  return "?";
}

struct TraceResult {
  ClassLabel predicted_class = 0;
  Vector final_position;
  std::uint32_t steps_taken = 0;
  Capture capture = Capture::NearestFallback;

  bool operator==(const TraceResult&) const = default;
};

/// Sum over planets of p.mass * (p.position - pos) / max(D, eps)^2.
inline Vector net_force(const Universe& u, std::span<const double> pos) {
  if (u.empty()) throw InvalidArgument("net_force: universe is empty");
  u.check_point(pos);
  const std::size_t dim = u.dimension();
  const Metric metric = u.config().distance_metric;
  const double eps = u.config().epsilon_distance;
  Vector force(dim, 0.0);
  for (const Planet& p : u.planets()) {
    const double d = std::max(distance_unchecked(p.position.data(), pos.data(), dim, metric), eps);
    const double scale = p.mass / (d * d);
    for (std::size_t i = 0; i < dim; ++i) force[i] += scale * (p.position[i] - pos[i]);
  }
  return force;
}

inline double euclidean_norm(std::span<const double> v) {
  double acc = 0.0;
  for (const double x : v) acc += x * x;
  return std::sqrt(acc);
}

/// Most common class among `ids`; ties go to the larger summed planet mass,
/// then to the smaller label.
inline ClassLabel mode_class(const Universe& u, std::span<const PlanetId> ids) {
  struct Tally {
    std::size_t count = 0;
    double mass = 0.0;
  };
  std::map<ClassLabel, Tally> tally;
  for (const PlanetId id : ids) {
    const Planet& p = u.planet(id);
    Tally& t = tally[p.class_label];
    ++t.count;
    t.mass += p.mass;
  }
  auto best = tally.begin();
  for (auto it = tally.begin(); it != tally.end(); ++it) {
    if (it->second.count > best->second.count ||
        (it->second.count == best->second.count && it->second.mass > best->second.mass))
      best = it;
  }
  return best->first;
}

inline TraceResult predict_sim(const Universe& u, const PlanetIndex& index,
                               std::span<const double> x) {
  if (u.empty()) throw InvalidArgument("predict_sim: universe is empty");
  if (x.size() != u.dimension())
    throw DimensionError("predict_sim: expected dimension " + std::to_string(u.dimension()) +
                         ", got " + std::to_string(x.size()));
  if (!all_finite(x)) throw InvalidArgument("predict_sim: non-finite query");
  if (index.size() != u.size()) throw InvalidArgument("predict_sim: index does not match universe");

  const UniverseConfig& cfg = u.config();
  TraceResult result;
  Vector pos(x.begin(), x.end());
  bool equilibrium = false;

  for (std::uint32_t step = 0; step < cfg.iteration_count; ++step) {
    const Vector force = net_force(u, pos);
    const double magnitude = euclidean_norm(force);
    if (magnitude <= cfg.epsilon_distance) {
      equilibrium = true;
      break;
    }
    const double scale = cfg.step_fraction / magnitude;
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] += scale * force[i];
    ++result.steps_taken;
    if (cfg.early_stop_on_collision) {
      const auto reach = index.planets_in_reach(pos);
      if (!reach.empty()) {
        result.predicted_class = mode_class(u, reach);
        result.capture = Capture::InsidePlanetsMode;
        result.final_position = std::move(pos);
        return result;
      }
    }
  }

  const auto reach = index.planets_in_reach(pos);
  if (!reach.empty()) {
    result.predicted_class = mode_class(u, reach);
    result.capture = Capture::InsidePlanetsMode;
  } else {
    result.predicted_class = u.planet(index.nearest_planet(pos)).class_label;
    result.capture = Capture::NearestFallback;
  }
  if (equilibrium) result.capture = Capture::EquilibriumStop;
  result.final_position = std::move(pos);
  return result;
}

}  // namespace gravclass
