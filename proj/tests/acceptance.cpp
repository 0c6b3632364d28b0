// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <list>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gravclass/gravclass.hpp"
#include "reference.hpp"

using namespace gravclass;

namespace {

const std::string kData = GRAVCLASS_DATA_DIR;

// Collects failed checks for one criterion.
struct Check {
  std::size_t cases = 0;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok && failures.size() == 5) failures.push_back("...");
  }
  bool ok() const { return failures.empty(); }
};

bool rel_near(double got, double want, double tol = 1e-9) {
  if (want == 0.0) return std::abs(got) <= tol;
  return std::abs(got - want) <= tol * std::abs(want);
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome from_check(const Check& c, const std::string& summary) {
  std::string d = summary;
  for (const auto& f : c.failures) d += "; " + f;
  return {c.ok(), d};
}

UniverseConfig config(double r, double alpha, std::uint32_t beta, Metric m = Metric::Euclidean) {
  UniverseConfig c;
  c.initial_radius = r;
  c.step_fraction = alpha;
  c.iteration_count = beta;
  c.distance_metric = m;
  return c;
}

UniverseConfig random_config(reference::Gen& gen) {
  UniverseConfig c = config(gen.uniform(0.3, 6.0), gen.uniform(0.01, 1.0),
                            static_cast<std::uint32_t>(gen.index(1, 30)));
  c.distance_metric = gen.index(0, 1) ? Metric::Manhattan : Metric::Euclidean;
  return c;
}

std::vector<HybridSample> stream(reference::Gen& gen, std::size_t n, std::size_t dim, ClassLabel classes) {
  std::vector<HybridSample> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen.sample(dim, 10.0, classes));
  return out;
}

Dataset load(const std::string& file) { return load_csv(kData + "/" + file, CsvSchema{}); }

struct MeanAccuracy {
  double sim = 0.0;
  double prob = 0.0;
  double planets = 0.0;
};

MeanAccuracy mean_over_seeds(const Dataset& ds, EvalOptions opt, SplitSpec base, std::uint64_t seeds) {
  MeanAccuracy m;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    base.seed = s;
    opt.split = base;
    const EvaluationReport r = evaluate(ds, opt);
    m.sim += r.accuracy_sim.value_or(0.0);
    m.prob += r.accuracy_prob.value_or(0.0);
    m.planets += r.planet_count;
  }
  m.sim /= static_cast<double>(seeds);
  m.prob /= static_cast<double>(seeds);
  m.planets /= static_cast<double>(seeds);
  return m;
}

std::string describe(const MeanAccuracy& m) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "sim=%s prob=%s planets=%.1f", pct(m.sim).c_str(), pct(m.prob).c_str(), m.planets);
  return buf;
}

// 1 ------------------------------------------------------------------------

Outcome golden() {
  Check c;
  auto expect_near = [&](double got, double want, const std::string& what) {
    ++c.cases;
    c.expect(rel_near(got, want), what + ": got " + format_double(got) + ", want " + format_double(want));
  };

  const Vector a{1, 1}, b{4, 5};
  expect_near(distance(a, b, Metric::Manhattan), 7.0, "manhattan distance");
  expect_near(distance(a, b, Metric::Euclidean), 5.0, "euclidean distance");

  {
    Universe u(config(50, 0.01, 100));
    u.add_planet(1.0, 50.0, {0, 0}, 0);
    ++c.cases;
    c.expect(planets_containing(u, Vector{3, 4}).size() == 1, "point (3,4) inside r=50");
    ++c.cases;
    c.expect(planets_containing(u, Vector{100, 0}).empty(), "point (100,0) outside r=50");
    const PlanetIndex idx = PlanetIndex::build(u);
    ++c.cases;
    c.expect(idx.planets_in_reach(Vector{3, 4}).size() == 1 && idx.planets_in_reach(Vector{100, 0}).empty(),
             "index containment");
  }
  {
    Universe u(config(1, 0.01, 100));
    u.add_planet(1.0, 1.0, {0}, 0);
    u.add_planet(3.0, 1.0, {5}, 0);
    u.add_planet(0.5, 1.0, {9}, 1);
    expect_near(total_mass(u), 4.5, "total mass");
  }
  {
    // merge: equal masses land on the midpoint with doubled radius
    Universe u(config(50, 0.01, 100));
    PlanetIndex idx;
    train_one(u, idx, {{0, 0}, 1.0, 0});
    const TrainOutcome o = train_one(u, idx, {{2, 0}, 1.0, 0});
    ++c.cases;
    c.expect(o.action == TrainAction::Merged && u.size() == 1, "same-class sample merges");
    const Planet& p = u.planet(0);
    expect_near(p.mass, 2.0, "merged mass");
    expect_near(p.radius, 100.0, "merged radius");
    expect_near(p.position[0], 1.0, "merged x");
    expect_near(p.position[1], 0.0, "merged y");
  }
  {
    Universe u(config(50, 0.01, 100));
    PlanetIndex idx;
    train_one(u, idx, {{0, 0}, 1.0, 0});
    const TrainOutcome o = train_one(u, idx, {{2, 0}, 1.0, 1});
    ++c.cases;
    c.expect(o.action == TrainAction::Created && u.size() == 2 && u.planet(1).radius == 50.0 &&
                 u.planet(1).position == Vector{2, 0},
             "other-class sample creates planet");
  }
  {
    Universe u(config(50, 0.01, 100));
    PlanetIndex idx;
    const std::vector<HybridSample> twin{{{0, 0}, 1.0, 0}, {{0, 0}, 1.0, 0}};
    train_batch(u, idx, twin);
    ++c.cases;
    c.expect(u.size() == 1, "identical samples give one planet");
    expect_near(u.planet(0).mass, 2.0, "identical samples mass");
  }
  {
    Universe u(config(1, 0.01, 100));
    PlanetIndex idx;
    std::vector<HybridSample> spaced;
    for (int k = 0; k < 6; ++k) spaced.push_back({{10.0 * k, 0}, 1.0, k});
    train_batch(u, idx, spaced);
    ++c.cases;
    c.expect(u.size() == 6, "distinct far classes give one planet each");
  }
  {
    Universe one(config(50, 0.01, 100));
    one.add_planet(1.0, 50.0, {1, 0}, 0);
    const Vector f = net_force(one, Vector{0, 0});
    expect_near(f[0], 1.0, "force x, unit planet");
    expect_near(f[1], 0.0, "force y, unit planet");
    Universe four(config(50, 0.01, 100));
    four.add_planet(4.0, 50.0, {2, 0}, 0);
    const Vector g = net_force(four, Vector{0, 0});
    expect_near(g[0], 2.0, "force x, mass 4 planet");
    expect_near(g[1], 0.0, "force y, mass 4 planet");
  }
  {
    Universe u(config(0.1, 0.01, 100));
    u.add_planet(1.0, 0.1, {0, 0}, 0);
    u.add_planet(1.0, 0.1, {100, 0}, 1);
    const PlanetIndex idx = PlanetIndex::build(u);
    const TraceResult t = predict_sim(u, idx, Vector{1, 0});
    const TraceResult ref = reference::predict_sim(u, Vector{1, 0});
    ++c.cases;
    c.expect(t.predicted_class == 0 && euclidean_norm(t.final_position) <= 0.1, "drift toward dominant planet");
    ++c.cases;
    c.expect(t == ref, "drift trace equals linear-scan trace");
    const TraceResult mid = predict_sim(u, idx, Vector{50, 0});
    ++c.cases;
    c.expect(mid.capture == Capture::EquilibriumStop && mid.predicted_class == 0 && mid.steps_taken == 0,
             "midpoint equilibrium falls back to smallest id");
  }
  {
    Universe u(config(1, 0.01, 100));
    u.add_planet(1.0, 1.0, {0, 0}, 0);
    u.add_planet(1.0, 1.0, {4, 0}, 1);
    const auto s = class_scores(u, Vector{1, 0});
    expect_near(s[0].score, -0.5, "score class 0");
    expect_near(s[1].score, -4.5, "score class 1");
    ++c.cases;
    c.expect(s[0].class_label == 0 && predict_prob(u, Vector{1, 0}) == 0, "prob predicts class 0");
    Universe heavy(u.config());
    heavy.add_planet(2.0, 1.0, {0, 0}, 0);
    heavy.add_planet(1.0, 1.0, {4, 0}, 1);
    expect_near(class_scores(heavy, Vector{1, 0})[0].score, -0.25, "score with doubled mass");
  }
  {
    Dataset iris3;
    iris3.dimension = 1;
    for (int i = 0; i < 150; ++i) iris3.samples.push_back({{static_cast<double>(i)}, 1.0, i / 50});
    iris3.refresh_labels();
    const auto one = split_indices(iris3, SplitSpec::one_per_class(1));
    ++c.cases;
    c.expect(one.train.size() == 3 && one.test.size() == 147, "one-per-class sizes 3/147");
    Dataset ten;
    ten.dimension = 1;
    for (int i = 0; i < 10; ++i) ten.samples.push_back({{static_cast<double>(i)}, 1.0, 0});
    ten.refresh_labels();
    ++c.cases;
    c.expect(split_indices(ten, SplitSpec::fraction(0.3, 1)).test.size() == 3, "fraction 0.3 of 10 gives 3");
  }
  {
    const Dataset iris = load("iris.csv");
    Classifier model(config(1, 0.01, 100));
    model.fit(iris.samples);
    std::set<ClassLabel> classes;
    for (const Planet& p : model.universe().planets()) classes.insert(p.class_label);
    ++c.cases;
    c.expect(model.universe().size() >= 3 && classes.size() == 3, "iris r'=1 has a planet per class");
  }
  return from_check(c, std::to_string(c.cases) + " hand-traced checks");
}

// 2 ------------------------------------------------------------------------

Outcome oracle_equivalence() {
  Check c;
  reference::Gen gen(20240501);
  std::size_t max_planets = 0, queries = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t dim = 1 + static_cast<std::size_t>(trial) % 16;
    UniverseConfig cfg = random_config(gen);
    cfg.early_stop_on_collision = trial % 7 == 0;
    const std::size_t n = trial % 20 == 0 ? 500 : gen.index(1, 80);
    const ClassLabel classes = static_cast<ClassLabel>(gen.index(1, 6));
    const std::string tag = "trial " + std::to_string(trial);
    ++c.cases;

    // training: index-backed vs linear scan, sample by sample
    Universe fast(cfg), slow(cfg);
    PlanetIndex idx(cfg.distance_metric);
    bool same = true;
    for (const HybridSample& h : stream(gen, n, dim, classes)) {
      const TrainOutcome a = train_one(fast, idx, h);
      const TrainOutcome b = reference::train_one(slow, h);
      same = same && a.action == b.action && a.planet_id == b.planet_id && a.prior_mass == b.prior_mass;
    }
    c.expect(same && fast == slow, tag + ": training diverged from linear scan");

    // a placed universe with exactly n planets exercises the predictors at full size
    const Universe placed = gen.universe(dim, n, cfg, classes);
    max_planets = std::max({max_planets, placed.size(), fast.size()});
    for (const Universe* u : {static_cast<const Universe*>(&fast), &placed}) {
      const PlanetIndex ix = PlanetIndex::build(*u);
      for (int q = 0; q < 2; ++q, ++queries) {
        const Vector x = gen.point(dim, 12.0);
        c.expect(ix.planets_in_reach(x) == reference::reach_scan(*u, x), tag + ": reach query differs");
        c.expect(ix.nearest_planet(x) == reference::nearest_scan(*u, x), tag + ": nearest differs");

        const TraceResult t = predict_sim(*u, ix, x);
        const TraceResult r = reference::predict_sim(*u, x);
        bool pos_ok = t.final_position.size() == r.final_position.size();
        for (std::size_t k = 0; pos_ok && k < dim; ++k)
          pos_ok = std::abs(t.final_position[k] - r.final_position[k]) <= 1e-9 * std::max(1.0, std::abs(r.final_position[k]));
        c.expect(t.predicted_class == r.predicted_class && t.capture == r.capture && t.steps_taken == r.steps_taken,
                 tag + ": simulated prediction differs");
        c.expect(pos_ok, tag + ": final position differs");

        const auto scores = class_scores(*u, x);
        const auto want = reference::mean_exponents(*u, x);
        ClassLabel best = want.begin()->first;
        for (const auto& [label, s] : want)
          if (s > want.at(best)) best = label;
        bool scores_ok = scores.size() == want.size();
        for (const auto& s : scores)
          scores_ok = scores_ok && want.count(s.class_label) &&
                      rel_near(s.score, static_cast<double>(want.at(s.class_label)));
        c.expect(scores_ok, tag + ": class scores differ");
        c.expect(scores.front().class_label == best, tag + ": probabilistic prediction differs");
      }
    }
  }
  return from_check(c, std::to_string(c.cases) + " universes, " + std::to_string(queries) +
                           " queries, dims 1-16, up to " + std::to_string(max_planets) + " planets");
}

// 3 ------------------------------------------------------------------------

Outcome properties() {
  reference::Gen gen(77);
  std::list<std::pair<std::string, Check>> suites;  // list: references must stay valid
  auto suite = [&](const std::string& name) -> Check& { return suites.emplace_back(name, Check{}).second; };

  {
    Check& c = suite("mass conservation");
    for (int t = 0; t < 500; ++t, ++c.cases) {
      const std::size_t dim = gen.index(1, 8);
      const auto samples = stream(gen, gen.index(1, 200), dim, static_cast<ClassLabel>(gen.index(1, 4)));
      Universe u(random_config(gen));
      PlanetIndex idx(u.config().distance_metric);
      train_batch(u, idx, samples);
      double want = 0.0;
      for (const auto& s : samples) want += s.mass;
      c.expect(rel_near(total_mass(u), want), "case " + std::to_string(t));
    }
  }
  {
    Check& convex = suite("convex-combination merge");
    Check& ratio = suite("radius/mass ratio preservation");
    while (convex.cases < 500) {
      const std::size_t dim = gen.index(1, 8);
      const UniverseConfig cfg = random_config(gen);
      Universe u(cfg);
      PlanetIndex idx(cfg.distance_metric);
      for (const HybridSample& h : stream(gen, 100, dim, 2)) {
        std::vector<Planet> snapshot(u.planets().begin(), u.planets().end());
        const TrainOutcome o = train_one(u, idx, h);
        if (o.action != TrainAction::Merged) continue;
        const Planet& old = snapshot[o.planet_id];
        const Planet& now = u.planet(o.planet_id);
        ++convex.cases;
        ++ratio.cases;
        bool inside = rel_near(now.mass, old.mass + h.mass);
        for (std::size_t k = 0; k < dim; ++k) {
          const double lo = std::min(old.position[k], h.position[k]), hi = std::max(old.position[k], h.position[k]);
          const double slack = 1e-12 * std::max(1.0, std::abs(hi));
          inside = inside && now.position[k] >= lo - slack && now.position[k] <= hi + slack;
          const double w = old.mass / now.mass;
          inside = inside && std::abs(now.position[k] - (w * old.position[k] + (1 - w) * h.position[k])) <=
                                 1e-9 * std::max(1.0, std::abs(now.position[k]));
        }
        convex.expect(inside, "merge off the segment");
        ratio.expect(rel_near(now.radius / now.mass, old.radius / old.mass), "ratio changed");
      }
    }
  }
  {
    Check& c = suite("step length = alpha");
    for (int t = 0; c.cases < 500; ++t) {
      const std::size_t dim = gen.index(1, 10);
      UniverseConfig cfg = random_config(gen);
      cfg.iteration_count = 1;
      const Universe u = gen.universe(dim, gen.index(1, 40), cfg);
      const Vector x = gen.point(dim, 12.0);
      const TraceResult r = predict_sim(u, PlanetIndex::build(u), x);
      if (r.capture == Capture::EquilibriumStop) continue;
      ++c.cases;
      double len = 0.0;
      for (std::size_t k = 0; k < dim; ++k) len += (r.final_position[k] - x[k]) * (r.final_position[k] - x[k]);
      c.expect(r.steps_taken == 1 && rel_near(std::sqrt(len), cfg.step_fraction, 1e-9), "case " + std::to_string(t));
    }
  }
  {
    Check& c = suite("translation equivariance");
    for (int t = 0; t < 500; ++t, ++c.cases) {
      const std::size_t dim = gen.index(1, 6);
      const UniverseConfig cfg = random_config(gen);
      const Universe u = gen.universe(dim, gen.index(1, 25), cfg);
      const Vector shift = gen.point(dim, 4.0);
      Universe moved(cfg);
      for (const Planet& p : u.planets()) {
        Vector x = p.position;
        for (std::size_t k = 0; k < dim; ++k) x[k] += shift[k];
        moved.add_planet(p.mass, p.radius, x, p.class_label);
      }
      Vector q = gen.point(dim, 10.0), qs = q;
      for (std::size_t k = 0; k < dim; ++k) qs[k] += shift[k];
      const TraceResult a = predict_sim(u, PlanetIndex::build(u), q);
      const TraceResult b = predict_sim(moved, PlanetIndex::build(moved), qs);
      bool ok = a.predicted_class == b.predicted_class;
      for (std::size_t k = 0; k < dim; ++k) ok = ok && std::abs(a.final_position[k] + shift[k] - b.final_position[k]) <= 1e-7;
      ok = ok && predict_prob(u, q) == predict_prob(moved, qs);
      c.expect(ok, "case " + std::to_string(t));
    }
  }
  {
    Check& c = suite("single-class totality");
    for (int t = 0; t < 500; ++t, ++c.cases) {
      const std::size_t dim = gen.index(1, 8);
      const ClassLabel label = static_cast<ClassLabel>(gen.index(0, 50));
      Universe u(random_config(gen));
      PlanetIndex idx(u.config().distance_metric);
      for (HybridSample h : stream(gen, gen.index(1, 40), dim, 1)) {
        h.class_label = label;
        train_one(u, idx, h);
      }
      const Vector x = gen.point(dim, 50.0);
      c.expect(predict_sim(u, idx, x).predicted_class == label && predict_prob(u, x) == label,
               "case " + std::to_string(t));
    }
  }
  {
    Check& c = suite("argmax duplication invariance");
    for (int t = 0; t < 500; ++t, ++c.cases) {
      const std::size_t dim = gen.index(1, 8);
      const Universe u = gen.universe(dim, gen.index(1, 30), random_config(gen));
      Universe doubled(u.config());
      for (int rep = 0; rep < 2; ++rep)
        for (const Planet& p : u.planets()) doubled.add_planet(p.mass, p.radius, p.position, p.class_label);
      const Vector x = gen.point(dim, 12.0);
      c.expect(predict_prob(u, x) == predict_prob(doubled, x), "case " + std::to_string(t));
    }
  }
  {
    Check& c = suite("split partition/stratification");
    for (int t = 0; t < 500; ++t, ++c.cases) {
      Dataset ds;
      ds.dimension = 1;
      std::vector<std::size_t> sizes(gen.index(1, 5));
      for (std::size_t k = 0; k < sizes.size(); ++k) {
        sizes[k] = gen.index(2, 40);
        for (std::size_t i = 0; i < sizes[k]; ++i)
          ds.samples.push_back({{static_cast<double>(ds.samples.size())}, 1.0, static_cast<ClassLabel>(k)});
      }
      ds.refresh_labels();
      const double f = gen.uniform(0.05, 0.95);
      const auto idx = split_indices(ds, SplitSpec::fraction(f, static_cast<std::uint64_t>(t)));
      std::set<std::size_t> all(idx.train.begin(), idx.train.end());
      bool ok = all.size() == idx.train.size();
      for (const auto i : idx.test) ok = ok && all.insert(i).second;
      ok = ok && all.size() == ds.size();
      for (std::size_t k = 0; k < sizes.size(); ++k) {
        double in_test = 0;
        for (const auto i : idx.test) in_test += ds.samples[i].class_label == static_cast<ClassLabel>(k);
        ok = ok && std::abs(in_test - f * static_cast<double>(sizes[k])) <= 1.0;
      }
      c.expect(ok, "case " + std::to_string(t));
    }
  }
  {
    Check& c = suite("persistence round-trip");
    for (int t = 0; t < 500; ++t, ++c.cases) {
      const std::size_t dim = gen.index(1, 12);
      const Universe u = gen.universe(dim, gen.index(1, 60), random_config(gen));
      std::stringstream buf;
      write_universe(buf, u);
      const Universe back = read_universe(buf);
      bool ok = back == u;
      const PlanetIndex a = PlanetIndex::build(u), b = PlanetIndex::build(back);
      for (int q = 0; q < 3 && ok; ++q) {
        const Vector x = gen.point(dim, 12.0);
        ok = predict_sim(u, a, x) == predict_sim(back, b, x) && class_scores(u, x) == class_scores(back, x);
      }
      c.expect(ok, "case " + std::to_string(t));
    }
  }

  bool pass = true;
  std::string detail;
  for (const auto& [name, c] : suites) {
    pass = pass && c.ok() && c.cases >= 500;
    detail += (detail.empty() ? "" : ", ") + name + " " + std::to_string(c.cases) + (c.ok() ? "" : " FAILED");
    for (const auto& f : c.failures) detail += " [" + f + "]";
  }
  return {pass, detail};
}

// 4 and 5 ------------------------------------------------------------------

EvalOptions wisconsin_options(double r, double alpha, std::uint32_t beta) {
  EvalOptions opt;
  opt.config = config(r, alpha, beta);
  return opt;
}

Outcome wisconsin() {
  const Dataset ds = load("wdbc.csv");
  const MeanAccuracy m = mean_over_seeds(ds, wisconsin_options(50, 0.01, 100), SplitSpec::fraction(0.3, 0), 10);
  const bool pass = std::abs(m.sim - 0.8965) <= 0.05 && std::abs(m.prob - 0.9278) <= 0.05;
  return {pass, "r'=50 alpha=0.01 beta=100, 10 seeds: " + describe(m) + " (bands 89.65+-5, 92.78+-5)"};
}

Outcome degradation() {
  const Dataset ds = load("wdbc.csv");
  const MeanAccuracy base = mean_over_seeds(ds, wisconsin_options(50, 0.01, 100), SplitSpec::fraction(0.3, 0), 10);
  const MeanAccuracy big = mean_over_seeds(ds, wisconsin_options(5000, 0.001, 1000), SplitSpec::fraction(0.3, 0), 10);
  const double drop = base.prob - big.prob;
  const bool pass = drop >= 0.10 && std::abs(big.sim - 0.9059) <= 0.05;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * drop);
  return {pass, "r'=5000 alpha=0.001 beta=1000: " + describe(big) + "; prob drop " + buf +
                    " points vs r'=50 (need >= 10), sim band 90.59+-5"};
}

// 6 -------------------------------------------------------------------------

Outcome iris() {
  const Dataset ds = load("iris.csv");
  EvalOptions opt;
  opt.config = config(0.05, 0.001, 100);
  const MeanAccuracy m = mean_over_seeds(ds, opt, SplitSpec::fraction(0.3, 0), 10);
  return {m.prob >= 0.93 && m.sim >= 0.90,
          "r'=0.05 alpha=0.001 beta=100 raw features, 10 seeds: " + describe(m) + " (need prob>=93, sim>=90)"};
}

// 7 -------------------------------------------------------------------------

Outcome few_shot() {
  EvalOptions opt;
  opt.config = config(0.05, 0.0005, 20);
  const MeanAccuracy iris = mean_over_seeds(load("iris.csv"), opt, SplitSpec::one_per_class(0), 20);
  const MeanAccuracy digits = mean_over_seeds(load("digits.csv"), opt, SplitSpec::one_per_class(0), 5);
  const bool pass = iris.sim >= 0.80 && iris.prob >= 0.80 && digits.sim >= 0.45 && digits.prob >= 0.45;
  return {pass, "one-per-class, r'=0.05 alpha=0.0005 beta=20: iris 20 seeds " + describe(iris) +
                    " (need 80); digits 5 seeds " + describe(digits) + " (need 45)"};
}

// 8 -------------------------------------------------------------------------

Outcome digits() {
  EvalOptions opt;
  opt.config = config(5, 0.0005, 20);
  const MeanAccuracy m = mean_over_seeds(load("digits.csv"), opt, SplitSpec::fraction(0.3, 0), 3);
  return {m.sim >= 0.80 && m.prob >= 0.80,
          "r'=5 alpha=0.0005 beta=20 raw 8x8 digits, 3 seeds: " + describe(m) +
              " (need 80); stands in for the face-image rows, whose preprocessing is unspecified"};
}

// 9 -------------------------------------------------------------------------

double visits_per_sample(std::size_t planets, std::uint64_t seed) {
  Xoshiro256StarStar rng(seed);
  UniverseConfig cfg = config(1e-4, 0.01, 10);
  Universe u(cfg);
  PlanetIndex idx(cfg.distance_metric);
  auto sample = [&] {
    return HybridSample{{rng.uniform(), rng.uniform()}, 1.0, static_cast<ClassLabel>(rng.bounded(1000))};
  };
  while (u.size() < planets) train_one(u, idx, sample());
  QueryStats stats;
  const int probes = 1000;
  for (int i = 0; i < probes; ++i) {
    const HybridSample h = sample();
    idx.planets_in_reach(h.position, &stats);
  }
  return static_cast<double>(stats.nodes_visited) / probes;
}

Outcome scaling() {
  const double small = visits_per_sample(1000, 5);
  const double large = visits_per_sample(100000, 5);
  const double slope = std::log(large / small) / std::log(100.0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "candidate visits per sample: %.1f at 1k planets, %.1f at 100k; log-log slope %.3f (need < 0.5)",
                small, large, slope);
  return {slope < 0.5, buf};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"golden hand-traced examples", golden},
      {"oracle equivalence", oracle_equivalence},
      {"property suites", properties},
      {"wisconsin reproduction", wisconsin},
      {"wisconsin degradation at large r'", degradation},
      {"iris reproduction", iris},
      {"few-shot one-per-class", few_shot},
      {"digits full split", digits},
      {"index scaling", scaling},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s [%zu] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
