#pragma once

// Train/evaluate driver shared by the command-line tool and the acceptance
// suite: splits a dataset, fits a universe, scores both predictors and
// produces a report with confusion matrices.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "gravclass/core.hpp"
#include "gravclass/dataset_io.hpp"
#include "gravclass/prob_predictor.hpp"
#include "gravclass/sim_predictor.hpp"
#include "gravclass/spatial_index.hpp"
#include "gravclass/trainer.hpp"

namespace gravclass {

/// A universe together with the index that mirrors it.
class Classifier {
 public:
  explicit Classifier(UniverseConfig config = {})
      : universe_(config), index_(config.distance_metric) {}

  explicit Classifier(Universe universe)
      : universe_(std::move(universe)), index_(PlanetIndex::build(universe_)) {}

  TrainOutcome learn(const HybridSample& h) { return train_one(universe_, index_, h); }

  std::vector<TrainOutcome> fit(std::span<const HybridSample> samples) {
    return train_batch(universe_, index_, samples);
  }

  TraceResult trace(std::span<const double> x) const { return predict_sim(universe_, index_, x); }
  ClassLabel predict_simulated(std::span<const double> x) const { return trace(x).predicted_class; }
  ClassLabel predict_probabilistic(std::span<const double> x,
                                   SigmaFunction sigma = SigmaFunction::Square) const {
    return predict_prob(universe_, x, sigma);
  }
  std::vector<ClassScore> scores(std::span<const double> x,
                                 SigmaFunction sigma = SigmaFunction::Square) const {
    return class_scores(universe_, x, sigma);
  }

  const Universe& universe() const { return universe_; }
  const PlanetIndex& index() const { return index_; }
  void set_early_stop(bool on) { universe_.mutable_config().early_stop_on_collision = on; }

 private:
  Universe universe_;
  PlanetIndex index_;
};

/// Runs body(i) for i in [0, n) over a few worker threads.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         unsigned threads = std::thread::hardware_concurrency()) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n / 8, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) body(i);
    });
  for (auto& th : pool) th.join();
}

class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<ClassLabel> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
    counts_.assign(labels_.size() * labels_.size(), 0);
  }

  void add(ClassLabel truth, ClassLabel predicted, std::size_t n = 1) {
    counts_[slot(truth) * labels_.size() + slot(predicted)] += n;
  }

  /// Adds `other`'s counts; the label set becomes the union of both.
  void merge(const ConfusionMatrix& other) {
    if (other.labels_ != labels_) {
      std::vector<ClassLabel> all = labels_;
      all.insert(all.end(), other.labels_.begin(), other.labels_.end());
      ConfusionMatrix wider(all);
      for (std::size_t r = 0; r < labels_.size(); ++r)
        for (std::size_t c = 0; c < labels_.size(); ++c)
          if (const auto n = count_at(r, c)) wider.add(labels_[r], labels_[c], n);
      *this = std::move(wider);
    }
    for (std::size_t r = 0; r < other.labels_.size(); ++r)
      for (std::size_t c = 0; c < other.labels_.size(); ++c)
        if (const auto n = other.count_at(r, c)) add(other.labels_[r], other.labels_[c], n);
  }

  const std::vector<ClassLabel>& labels() const { return labels_; }
  std::size_t count(ClassLabel truth, ClassLabel predicted) const {
    return counts_[slot(truth) * labels_.size() + slot(predicted)];
  }
  std::size_t count_at(std::size_t row, std::size_t col) const { return counts_[row * labels_.size() + col]; }

  std::size_t row_total(std::size_t row) const {
    std::size_t t = 0;
    for (std::size_t c = 0; c < labels_.size(); ++c) t += count_at(row, c);
    return t;
  }
  std::size_t total() const {
    std::size_t t = 0;
    for (const auto n : counts_) t += n;
    return t;
  }
  std::size_t correct() const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < labels_.size(); ++i) t += count_at(i, i);
    return t;
  }
  double accuracy() const { return total() ? static_cast<double>(correct()) / static_cast<double>(total()) : 0.0; }

 private:
  std::size_t slot(ClassLabel l) const {
    const auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
    if (it == labels_.end() || *it != l)
      throw InvalidArgument("label " + std::to_string(l) + " is not in the confusion matrix");
    return static_cast<std::size_t>(it - labels_.begin());
  }

  std::vector<ClassLabel> labels_;
  std::vector<std::size_t> counts_;
};

enum class Scaling { None, MinMax };

inline Scaling parse_scaling(const std::string& s) {
  if (s == "none") return Scaling::None;
  if (s == "minmax") return Scaling::MinMax;
  throw InvalidArgument("unknown scaling '" + s + "'");
}

struct EvalModes {
  bool sim = true;
  bool prob = true;
};

inline EvalModes parse_modes(const std::string& s) {
  if (s == "sim") return {true, false};
  if (s == "prob") return {false, true};
  if (s == "both") return {true, true};
  throw InvalidArgument("unknown mode '" + s + "'");
}

struct EvalOptions {
  UniverseConfig config;
  SplitSpec split;
  EvalModes modes;
  Scaling scaling = Scaling::None;
  std::optional<std::uint64_t> shuffle_seed;  // shuffles training order
  SigmaFunction sigma = SigmaFunction::Square;
  unsigned threads = std::thread::hardware_concurrency();
};

struct EvaluationReport {
  std::string dataset;
  std::string split;
  UniverseConfig config;
  std::string scaling = "none";
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  double planet_count = 0.0;  // mean over folds
  std::optional<double> accuracy_sim;
  std::optional<double> accuracy_prob;
  ConfusionMatrix confusion_sim;
  ConfusionMatrix confusion_prob;
  double train_seconds = 0.0;
  double sim_seconds = 0.0;
  double prob_seconds = 0.0;
  std::vector<std::string> notes;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct FoldResult {
  ConfusionMatrix sim;
  ConfusionMatrix prob;
  std::size_t planets = 0;
  std::size_t train_count = 0;
  double train_seconds = 0.0;
  double sim_seconds = 0.0;
  double prob_seconds = 0.0;
};

inline FoldResult run_fold(Dataset train, Dataset test, const EvalOptions& opt) {
  if (opt.scaling == Scaling::MinMax) {
    MinMaxScaler scaler;
    scaler.fit(train);
    scaler.transform(train);
    scaler.transform(test);
  }
  if (opt.shuffle_seed) train = shuffled(train, *opt.shuffle_seed);

  FoldResult out;
  out.train_count = train.size();
  auto t0 = std::chrono::steady_clock::now();
  Classifier model(opt.config);
  model.fit(train.samples);
  out.train_seconds = seconds_since(t0);
  out.planets = model.universe().size();

  std::vector<ClassLabel> labels = test.class_labels;
  for (const Planet& p : model.universe().planets()) labels.push_back(p.class_label);
  out.sim = ConfusionMatrix(labels);
  out.prob = ConfusionMatrix(labels);

  std::vector<ClassLabel> predicted(test.size());
  if (opt.modes.sim) {
    t0 = std::chrono::steady_clock::now();
    parallel_for(test.size(), [&](std::size_t i) { predicted[i] = model.predict_simulated(test.samples[i].position); },
                 opt.threads);
    for (std::size_t i = 0; i < test.size(); ++i) out.sim.add(test.samples[i].class_label, predicted[i]);
    out.sim_seconds = seconds_since(t0);
  }
  if (opt.modes.prob) {
    t0 = std::chrono::steady_clock::now();
    parallel_for(test.size(),
                 [&](std::size_t i) { predicted[i] = model.predict_probabilistic(test.samples[i].position, opt.sigma); },
                 opt.threads);
    for (std::size_t i = 0; i < test.size(); ++i) out.prob.add(test.samples[i].class_label, predicted[i]);
    out.prob_seconds = seconds_since(t0);
  }
  return out;
}

}  // namespace detail

/// Trains on the training part of `opt.split` and scores the requested
/// predictors on the held-out part. A k-fold split runs every fold and pools
/// the confusion matrices.
inline EvaluationReport evaluate(const Dataset& ds, const EvalOptions& opt) {
  opt.config.validate();
  EvaluationReport report;
  report.dataset = ds.name;
  report.split = opt.split.describe() + " seed=" + std::to_string(opt.split.seed);
  report.config = opt.config;
  report.scaling = opt.scaling == Scaling::MinMax ? "minmax" : "none";

  const std::size_t folds = opt.split.mode == SplitMode::KFold ? opt.split.folds : 1;
  std::vector<ClassLabel> labels = ds.class_labels;
  report.confusion_sim = ConfusionMatrix(labels);
  report.confusion_prob = ConfusionMatrix(labels);
  double planets = 0.0;
  for (std::size_t f = 0; f < folds; ++f) {
    SplitSpec spec = opt.split;
    spec.fold = f;
    auto [train, test] = split(ds, spec);
    if (train.samples.empty()) throw InvalidArgument("split left no training samples");
    report.test_count += test.size();
    auto r = detail::run_fold(std::move(train), std::move(test), opt);
    report.train_count += r.train_count;
    planets += static_cast<double>(r.planets);
    report.confusion_sim.merge(r.sim);
    report.confusion_prob.merge(r.prob);
    report.train_seconds += r.train_seconds;
    report.sim_seconds += r.sim_seconds;
    report.prob_seconds += r.prob_seconds;
  }
  report.planet_count = planets / static_cast<double>(folds);
  if (opt.modes.sim) report.accuracy_sim = report.confusion_sim.accuracy();
  if (opt.modes.prob) report.accuracy_prob = report.confusion_prob.accuracy();
  return report;
}

inline void write_confusion(std::ostream& out, const std::string& key, const ConfusionMatrix& m) {
  for (std::size_t r = 0; r < m.labels().size(); ++r) {
    out << key << '.' << m.labels()[r] << '=';
    for (std::size_t c = 0; c < m.labels().size(); ++c) out << (c ? "," : "") << m.count_at(r, c);
    out << '\n';
  }
}

/// Machine-readable report: one `key=value` per line.
inline void write_report(std::ostream& out, const EvaluationReport& r) {
  out << "dataset=" << r.dataset << '\n'
      << "split=" << r.split << '\n'
      << "r_init=" << format_double(r.config.initial_radius) << '\n'
      << "alpha=" << format_double(r.config.step_fraction) << '\n'
      << "beta=" << r.config.iteration_count << '\n'
      << "metric=" << to_string(r.config.distance_metric) << '\n'
      << "scaling=" << r.scaling << '\n'
      << "train_count=" << r.train_count << '\n'
      << "test_count=" << r.test_count << '\n'
      << "planet_count=" << format_double(r.planet_count) << '\n';
  out << "labels=";
  for (std::size_t i = 0; i < r.confusion_sim.labels().size(); ++i) out << (i ? "," : "") << r.confusion_sim.labels()[i];
  out << '\n';
  if (r.accuracy_sim) {
    out << "accuracy_sim=" << format_double(*r.accuracy_sim) << '\n';
    write_confusion(out, "confusion_sim", r.confusion_sim);
  }
  if (r.accuracy_prob) {
    out << "accuracy_prob=" << format_double(*r.accuracy_prob) << '\n';
    write_confusion(out, "confusion_prob", r.confusion_prob);
  }
  out << "wall_time_train=" << format_double(r.train_seconds) << '\n'
      << "wall_time_sim=" << format_double(r.sim_seconds) << '\n'
      << "wall_time_prob=" << format_double(r.prob_seconds) << '\n';
  for (const auto& n : r.notes) out << "note=" << n << '\n';
}

/// Human-readable summary table.
inline void print_report(std::ostream& out, const EvaluationReport& r) {
  const auto flags = out.flags();
  out << "dataset   " << r.dataset << "  (" << r.split << ", scaling " << r.scaling << ")\n"
      << "config    r'=" << format_double(r.config.initial_radius)
      << " alpha=" << format_double(r.config.step_fraction) << " beta=" << r.config.iteration_count
      << " metric=" << to_string(r.config.distance_metric) << '\n'
      << "samples   train " << r.train_count << ", test " << r.test_count << ", planets "
      << format_double(r.planet_count) << '\n';
  out << std::fixed << std::setprecision(2);
  out << "+---------------+----------+----------+\n"
      << "| model         | accuracy | time (s) |\n"
      << "+---------------+----------+----------+\n";
  if (r.accuracy_sim)
    out << "| simulated     | " << std::setw(7) << 100.0 * *r.accuracy_sim << "% | " << std::setw(8)
        << r.sim_seconds << " |\n";
  if (r.accuracy_prob)
    out << "| probabilistic | " << std::setw(7) << 100.0 * *r.accuracy_prob << "% | " << std::setw(8)
        << r.prob_seconds << " |\n";
  out << "+---------------+----------+----------+\n";
  for (const auto& n : r.notes) out << "note: " << n << '\n';
  out.flags(flags);
}

}  // namespace gravclass
