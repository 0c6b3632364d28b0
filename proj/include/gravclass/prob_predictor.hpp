#pragma once

// Probabilistic back-end: every planet is treated as an isotropic Gaussian
// whose spread grows with its radius. A class scores the mean, over its
// planets, of the mass-scaled Gaussian exponent at the query; the highest
// (least negative) score wins. No simulation is involved.

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "gravclass/core.hpp"

namespace gravclass {

/// Spread as a function of planet radius. Square is the default.
enum class SigmaFunction { Identity, Square };

inline double sigma_of(double radius, SigmaFunction f) {
  return f == SigmaFunction::Square ? radius * radius : radius;
}

struct ClassScore {
  ClassLabel class_label = 0;
  double score = 0.0;  // log-domain, <= 0
  std::size_t planet_count = 0;

  bool operator==(const ClassScore&) const = default;
};

/// One score per class present, best first (ties: smaller label first).
inline std::vector<ClassScore> class_scores(const Universe& u, std::span<const double> x,
                                            SigmaFunction sigma = SigmaFunction::Square) {
  if (u.empty()) throw InvalidArgument("class_scores: universe is empty");
  if (x.size() != u.dimension())
    throw DimensionError("class_scores: expected dimension " + std::to_string(u.dimension()) +
                         ", got " + std::to_string(x.size()));
  if (!all_finite(x)) throw InvalidArgument("class_scores: non-finite query");

  const Metric metric = u.config().distance_metric;
  const double eps = u.config().epsilon_distance;
  std::map<ClassLabel, ClassScore> per_class;
  for (const Planet& p : u.planets()) {
    const double d = distance_unchecked(p.position.data(), x.data(), x.size(), metric);
    const double s = sigma_of(p.radius, sigma);
    const double denom = std::max(p.mass * 2.0 * s * s, eps);
    ClassScore& cs = per_class[p.class_label];
    cs.class_label = p.class_label;
    cs.score += -(d * d) / denom;
    ++cs.planet_count;
  }

  std::vector<ClassScore> out;
  out.reserve(per_class.size());
  for (auto& [label, cs] : per_class) {
    cs.score /= static_cast<double>(cs.planet_count);
    out.push_back(cs);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ClassScore& a, const ClassScore& b) { return a.score > b.score; });
  return out;
}

inline ClassLabel predict_prob(const Universe& u, std::span<const double> x,
                               SigmaFunction sigma = SigmaFunction::Square) {
  return class_scores(u, x, sigma).front().class_label;
}

}  // namespace gravclass
