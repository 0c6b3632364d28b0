#pragma once

// Online training: each weighted sample either founds a new planet of radius
// r' or is absorbed by the same-class planet in reach that pulls hardest on it.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gravclass/core.hpp"
#include "gravclass/spatial_index.hpp"

namespace gravclass {

enum class TrainAction { Created, Merged };

struct TrainOutcome {
  TrainAction action = TrainAction::Created;
  PlanetId planet_id = 0;
  double prior_mass = 0.0;  // 0 when created

  bool operator==(const TrainOutcome&) const = default;
};

/// Raised by train_batch; `index` is the position of the offending sample.
/// Samples before it have already been applied.
class BatchError : public Error {
 public:
  BatchError(std::size_t index, const std::string& what)
      : Error("sample " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

inline void validate_sample(const HybridSample& h) {
  if (!(h.mass > 0.0) || !std::isfinite(h.mass))
    throw InvalidArgument("sample mass must be positive and finite");
  if (h.position.empty()) throw DimensionError("sample position is empty");
  if (!all_finite(h.position)) throw InvalidArgument("non-finite sample coordinate");
  if (h.class_label < 0) throw InvalidArgument("class label must be non-negative");
}

/// Picks the merge target among `candidates` (ascending ids): largest
/// p.mass / D^2, a coincident center counts as infinite pull, ties keep the
/// smaller id.
inline PlanetId strongest_pull(const Universe& u, std::span<const PlanetId> candidates,
                               std::span<const double> point) {
  PlanetId best = candidates.front();
  double best_force = -1.0;
  for (const PlanetId id : candidates) {
    const Planet& p = u.planet(id);
    const double d = distance(p.position, point, u.config().distance_metric);
    const double force = d == 0.0 ? std::numeric_limits<double>::infinity() : p.mass / (d * d);
    if (force > best_force) {
      best_force = force;
      best = id;
    }
  }
  return best;
}

/// Applies one sample. `index` must mirror `u` (same planets, same metric).
inline TrainOutcome train_one(Universe& u, PlanetIndex& index, const HybridSample& h) {
  validate_sample(h);
  if (index.metric() != u.config().distance_metric)
    throw InvalidArgument("index metric does not match universe metric");
  if (u.dimension() != 0 && h.position.size() != u.dimension())
    throw DimensionError("expected dimension " + std::to_string(u.dimension()) + ", got " +
                         std::to_string(h.position.size()));

  std::vector<PlanetId> same_class;
  if (!u.empty()) {
    for (const PlanetId id : index.planets_in_reach(h.position))
      if (u.planet(id).class_label == h.class_label) same_class.push_back(id);
  }

  if (same_class.empty()) {
    const Planet& created = u.add_planet(h.mass, u.config().initial_radius, h.position, h.class_label);
    index.insert(created);
    return {TrainAction::Created, created.id, 0.0};
  }

  const PlanetId target = strongest_pull(u, same_class, h.position);
  const Planet& p = u.planet(target);
  const double prior = p.mass;
  const double mass = p.mass + h.mass;
  const double radius = mass * (p.radius / p.mass);
  Vector position(p.position.size());
  const double keep = p.mass / mass;
  const double take = h.mass / mass;
  for (std::size_t i = 0; i < position.size(); ++i)
    position[i] = keep * p.position[i] + take * h.position[i];
  const Planet& merged = u.update_planet(target, mass, radius, std::move(position));
  index.update_planet(merged);
  return {TrainAction::Merged, target, prior};
}

/// Folds train_one over `samples` in order.
inline std::vector<TrainOutcome> train_batch(Universe& u, PlanetIndex& index,
                                             std::span<const HybridSample> samples) {
  std::vector<TrainOutcome> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      out.push_back(train_one(u, index, samples[i]));
    } catch (const Error& e) {
      throw BatchError(i, e.what());
    }
  }
  return out;
}

}  // namespace gravclass
