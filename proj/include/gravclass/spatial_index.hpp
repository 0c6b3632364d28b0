#pragma once

// KD-tree over planet centers supporting the two geometric queries used by
// training and simulation: "which planets reach this point" and "which planet
// center is closest".
//
// Planets carry individual radii, so containment queries descend with the
// largest radius in the index as the search radius and then filter each
// candidate against its own radius. Moves are handled by tombstoning the old
// slot and inserting a fresh one; the tree is rebuilt balanced whenever the
// slot count doubles relative to the last build.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gravclass/core.hpp"

namespace gravclass {

/// Node visit counters, filled by queries when requested.
struct QueryStats {
  std::size_t nodes_visited = 0;
  std::size_t distance_evaluations = 0;
};

class PlanetIndex {
 public:
  explicit PlanetIndex(Metric metric = Metric::Euclidean, std::size_t dimension = 0)
      : metric_(metric), dim_(dimension) {}

  static PlanetIndex build(const Universe& u) {
    PlanetIndex idx(u.config().distance_metric, u.dimension());
    for (const Planet& p : u.planets()) idx.append_slot(p);
    idx.rebuild();
    return idx;
  }

  std::size_t size() const { return live_; }
  bool empty() const { return live_ == 0; }
  std::size_t dimension() const { return dim_; }
  Metric metric() const { return metric_; }
  bool contains(PlanetId id) const { return id < handles_.size() && handles_[id].slot != kNone; }

  void insert(const Planet& p) {
    if (contains(p.id)) throw InvalidArgument("planet id " + std::to_string(p.id) + " already indexed");
    check_planet(p);
    if (dim_ == 0) dim_ = p.position.size();
    const std::uint32_t slot = append_slot(p);
    link(slot);
    maybe_rebuild();
  }

  /// Moves an indexed planet to its new position and radius.
  void update_planet(const Planet& p) {
    if (!contains(p.id)) throw InvalidArgument("planet id " + std::to_string(p.id) + " not indexed");
    check_planet(p);
    Handle& h = handles_[p.id];
    alive_[h.slot] = 0;
    --live_;
    h.slot = kNone;
    const std::uint32_t slot = append_slot(p);
    link(slot);
    maybe_rebuild();
  }

  /// Ids of planets whose own radius reaches `point`, ascending.
  std::vector<PlanetId> planets_in_reach(std::span<const double> point,
                                         QueryStats* stats = nullptr) const {
    std::vector<PlanetId> out;
    if (live_ == 0) return out;
    check_query(point);
    const double reach = max_radius_;
    std::vector<std::uint32_t> stack{root_};
    while (!stack.empty()) {
      const std::uint32_t n = stack.back();
      stack.pop_back();
      if (n == kNone) continue;
      const Node& node = nodes_[n];
      if (stats) ++stats->nodes_visited;
      if (alive_[node.slot]) {
        if (stats) ++stats->distance_evaluations;
        const PlanetId id = slot_ids_[node.slot];
        const double d = distance_unchecked(coords(node.slot), point.data(), dim_, metric_);
        if (d <= handles_[id].radius) out.push_back(id);
      }
      const double diff = point[node.axis] - node.split;
      // left subtree coordinates are <= split, right subtree coordinates >= split
      if (diff <= reach) stack.push_back(node.left);
      if (-diff <= reach) stack.push_back(node.right);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Id of the planet center closest to `point`; ties go to the smallest id.
  PlanetId nearest_planet(std::span<const double> point, QueryStats* stats = nullptr) const {
    if (live_ == 0) throw InvalidArgument("nearest_planet: index is empty");
    check_query(point);
    double best_d = std::numeric_limits<double>::infinity();
    PlanetId best_id = std::numeric_limits<PlanetId>::max();
    nearest_recurse(root_, point, best_d, best_id, stats);
    return best_id;
  }

  /// Largest radius any indexed planet may have; the containment search radius.
  double search_radius() const { return max_radius_; }

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Node {
    std::uint32_t slot;
    std::uint32_t axis;
    double split;
    std::uint32_t left = kNone;
    std::uint32_t right = kNone;
  };

  struct Handle {
    std::uint32_t slot = kNone;
    double radius = 0.0;
  };

  const double* coords(std::uint32_t slot) const { return coords_.data() + std::size_t{slot} * dim_; }

  void check_planet(const Planet& p) const {
    if (p.position.empty()) throw DimensionError("planet position is empty");
    if (dim_ != 0 && p.position.size() != dim_)
      throw DimensionError("index dimension is " + std::to_string(dim_) + ", planet has " +
                           std::to_string(p.position.size()));
    if (!all_finite(p.position)) throw InvalidArgument("non-finite planet position");
    if (!(p.radius > 0.0)) throw InvalidArgument("planet radius must be positive");
  }

  void check_query(std::span<const double> point) const {
    if (point.size() != dim_)
      throw DimensionError("index dimension is " + std::to_string(dim_) + ", query has " +
                           std::to_string(point.size()));
    if (!all_finite(point)) throw InvalidArgument("non-finite query coordinate");
  }

  std::uint32_t append_slot(const Planet& p) {
    if (dim_ == 0) dim_ = p.position.size();
    const auto slot = static_cast<std::uint32_t>(slot_ids_.size());
    slot_ids_.push_back(p.id);
    alive_.push_back(1);
    coords_.insert(coords_.end(), p.position.begin(), p.position.end());
    if (handles_.size() <= p.id) handles_.resize(p.id + 1);
    handles_[p.id] = Handle{slot, p.radius};
    max_radius_ = std::max(max_radius_, p.radius);
    ++live_;
    return slot;
  }

  // Attaches a freshly appended slot as a leaf.
  void link(std::uint32_t slot) {
    const double* x = coords(slot);
    if (root_ == kNone) {
      nodes_.push_back(Node{slot, 0, x[0]});
      root_ = static_cast<std::uint32_t>(nodes_.size() - 1);
      return;
    }
    std::uint32_t cur = root_;
    for (;;) {
      Node& node = nodes_[cur];
      std::uint32_t& child = x[node.axis] < node.split ? node.left : node.right;
      if (child == kNone) {
        const std::uint32_t axis = (node.axis + 1) % static_cast<std::uint32_t>(dim_);
        const auto fresh = static_cast<std::uint32_t>(nodes_.size());
        child = fresh;  // taken before push_back invalidates `node`
        nodes_.push_back(Node{slot, axis, x[axis]});
        return;
      }
      cur = child;
    }
  }

  void maybe_rebuild() {
    if (slot_ids_.size() >= 2 * std::max<std::size_t>(built_slots_, 8)) rebuild();
  }

  // Compacts live slots and builds a balanced tree (median split on the axis
  // of widest spread).
  void rebuild() {
    std::vector<PlanetId> ids;
    std::vector<double> packed;
    ids.reserve(live_);
    packed.reserve(live_ * dim_);
    max_radius_ = 0.0;
    for (std::size_t s = 0; s < slot_ids_.size(); ++s) {
      if (!alive_[s]) continue;
      const PlanetId id = slot_ids_[s];
      handles_[id].slot = static_cast<std::uint32_t>(ids.size());
      max_radius_ = std::max(max_radius_, handles_[id].radius);
      ids.push_back(id);
      packed.insert(packed.end(), coords_.begin() + s * dim_, coords_.begin() + (s + 1) * dim_);
    }
    slot_ids_ = std::move(ids);
    coords_ = std::move(packed);
    alive_.assign(slot_ids_.size(), 1);
    nodes_.clear();
    nodes_.reserve(slot_ids_.size());
    std::vector<std::uint32_t> order(slot_ids_.size());
    std::iota(order.begin(), order.end(), 0u);
    root_ = build_range(order, 0, order.size());
    built_slots_ = slot_ids_.size();
  }

  std::uint32_t build_range(std::vector<std::uint32_t>& order, std::size_t lo, std::size_t hi) {
    if (lo >= hi) return kNone;
    std::uint32_t axis = 0;
    double widest = -1.0;
    for (std::size_t a = 0; a < dim_; ++a) {
      double mn = std::numeric_limits<double>::infinity();
      double mx = -mn;
      for (std::size_t i = lo; i < hi; ++i) {
        const double v = coords(order[i])[a];
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      if (mx - mn > widest) {
        widest = mx - mn;
        axis = static_cast<std::uint32_t>(a);
      }
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(order.begin() + lo, order.begin() + mid, order.begin() + hi,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double va = coords(a)[axis];
                       const double vb = coords(b)[axis];
                       return va < vb || (va == vb && a < b);
                     });
    const std::uint32_t slot = order[mid];
    const auto n = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{slot, axis, coords(slot)[axis]});
    const std::uint32_t left = build_range(order, lo, mid);
    const std::uint32_t right = build_range(order, mid + 1, hi);
    nodes_[n].left = left;
    nodes_[n].right = right;
    return n;
  }

  void nearest_recurse(std::uint32_t n, std::span<const double> point, double& best_d,
                       PlanetId& best_id, QueryStats* stats) const {
    if (n == kNone) return;
    const Node& node = nodes_[n];
    if (stats) ++stats->nodes_visited;
    if (alive_[node.slot]) {
      if (stats) ++stats->distance_evaluations;
      const PlanetId id = slot_ids_[node.slot];
      const double d = distance_unchecked(coords(node.slot), point.data(), dim_, metric_);
      if (d < best_d || (d == best_d && id < best_id)) {
        best_d = d;
        best_id = id;
      }
    }
    const double diff = point[node.axis] - node.split;
    const std::uint32_t near = diff < 0.0 ? node.left : node.right;
    const std::uint32_t far = diff < 0.0 ? node.right : node.left;
    nearest_recurse(near, point, best_d, best_id, stats);
    // Non-strict bound so equidistant planets behind the plane still compete
    // on id.
    if (std::abs(diff) <= best_d) nearest_recurse(far, point, best_d, best_id, stats);
  }

  Metric metric_;
  std::size_t dim_;
  std::vector<PlanetId> slot_ids_;
  std::vector<std::uint8_t> alive_;
  std::vector<double> coords_;
  std::vector<Handle> handles_;
  std::vector<Node> nodes_;
  std::uint32_t root_ = kNone;
  std::size_t live_ = 0;
  std::size_t built_slots_ = 0;
  double max_radius_ = 0.0;
};

}  // namespace gravclass
