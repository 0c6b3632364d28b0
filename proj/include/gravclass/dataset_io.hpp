#pragma once

// Dataset ingestion (CSV with optional per-row weights), seeded splitting,
// min-max scaling and the versioned text format for trained universes.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "gravclass/core.hpp"

namespace gravclass {

// Random numbers ------------------------------------------------------------

/// xoshiro256** 1.0 (Blackman & Vigna), seeded through splitmix64 so that a
/// single 64-bit seed reproduces the same stream on any platform.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256StarStar(std::uint64_t seed = 0) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t bounded(std::uint64_t bound) {
    const std::uint64_t limit = max() - max() % bound;
    for (;;) {
      const std::uint64_t v = (*this)();
      if (v < limit) return v % bound;
    }
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

/// Fisher-Yates shuffle drawing from `rng.bounded`, so the permutation is
/// independent of the standard library in use.
template <typename T>
void seeded_shuffle(std::vector<T>& v, Xoshiro256StarStar& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = rng.bounded(i);
    std::swap(v[i - 1], v[j]);
  }
}

// Numbers -------------------------------------------------------------------

/// Shortest decimal that parses back to exactly `v`.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// Datasets ------------------------------------------------------------------

struct Dataset {
  std::string name;
  std::size_t dimension = 0;
  std::vector<HybridSample> samples;
  std::vector<ClassLabel> class_labels;  // sorted, distinct
  std::vector<std::string> feature_names;
  // Original label strings by dense id; empty when labels were numeric.
  std::vector<std::string> label_names;

  std::size_t size() const { return samples.size(); }

  void refresh_labels() {
    std::set<ClassLabel> seen;
    for (const auto& s : samples) seen.insert(s.class_label);
    class_labels.assign(seen.begin(), seen.end());
  }

  /// Dataset with the same metadata holding the given rows, in that order.
  Dataset subset(std::span<const std::size_t> rows, std::string suffix = {}) const {
    Dataset out;
    out.name = name + suffix;
    out.dimension = dimension;
    out.feature_names = feature_names;
    out.label_names = label_names;
    out.samples.reserve(rows.size());
    for (const std::size_t r : rows) out.samples.push_back(samples.at(r));
    out.refresh_labels();
    return out;
  }
};

struct CsvSchema {
  std::string label_column = "label";
  std::optional<std::string> weight_column;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one CSV record; double quotes may wrap a field ("" is a literal quote).
inline std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.emplace_back(trim(cur));
  return fields;
}

}  // namespace detail

/// Parses CSV text. Rows are numbered from 1 after the header in error
/// messages. Weights default to 1. Labels that are all non-negative integers
/// are kept as-is; otherwise every distinct label string gets a dense id in
/// order of first appearance.
inline Dataset parse_csv(std::istream& in, const CsvSchema& schema, std::string name = "dataset") {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!detail::trim(line).empty()) {
      header = detail::split_record(line);
      break;
    }
  }
  if (header.empty()) throw FormatError(name + ": missing header row");

  std::optional<std::size_t> label_col;
  std::optional<std::size_t> weight_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == schema.label_column) label_col = i;
    if (schema.weight_column && header[i] == *schema.weight_column) weight_col = i;
  }
  if (!label_col) throw FormatError(name + ": label column '" + schema.label_column + "' not found");
  if (schema.weight_column && !weight_col)
    throw FormatError(name + ": weight column '" + *schema.weight_column + "' not found");
  if (weight_col && *weight_col == *label_col)
    throw FormatError(name + ": label and weight column are the same");

  Dataset ds;
  ds.name = std::move(name);
  for (std::size_t i = 0; i < header.size(); ++i)
    if (i != *label_col && (!weight_col || i != *weight_col)) ds.feature_names.push_back(header[i]);
  ds.dimension = ds.feature_names.size();
  if (ds.dimension == 0) throw FormatError(ds.name + ": no feature columns");

  std::vector<std::string> raw_labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    ++row;
    const auto fields = detail::split_record(line);
    const std::string where = ", row " + std::to_string(row);
    if (fields.size() != header.size())
      throw FormatError("ragged row: expected " + std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()) + where);
    HybridSample s;
    s.position.reserve(ds.dimension);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i == *label_col) continue;
      const auto v = parse_double(fields[i]);
      if (i == weight_col) {
        if (!v || !std::isfinite(*v)) throw FormatError("non-numeric weight '" + fields[i] + "'" + where);
        if (!(*v > 0.0)) throw FormatError("non-positive weight" + where);
        s.mass = *v;
        continue;
      }
      if (!v || !std::isfinite(*v))
        throw FormatError("non-numeric feature '" + fields[i] + "' in column '" + header[i] + "'" + where);
      s.position.push_back(*v);
    }
    raw_labels.push_back(fields[*label_col]);
    ds.samples.push_back(std::move(s));
  }
  if (ds.samples.empty()) throw FormatError(ds.name + ": no data rows");

  bool numeric = true;
  for (const auto& l : raw_labels) {
    const auto v = parse_int<ClassLabel>(l);
    if (!v || *v < 0) {
      numeric = false;
      break;
    }
  }
  if (numeric) {
    for (std::size_t i = 0; i < raw_labels.size(); ++i)
      ds.samples[i].class_label = *parse_int<ClassLabel>(raw_labels[i]);
  } else {
    std::map<std::string, ClassLabel> ids;
    for (std::size_t i = 0; i < raw_labels.size(); ++i) {
      auto [it, fresh] = ids.try_emplace(raw_labels[i], static_cast<ClassLabel>(ds.label_names.size()));
      if (fresh) ds.label_names.push_back(raw_labels[i]);
      ds.samples[i].class_label = it->second;
    }
  }
  ds.refresh_labels();
  return ds;
}

inline Dataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (const auto dot = name.rfind('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return parse_csv(in, schema, name);
}

// Splitting -----------------------------------------------------------------

enum class SplitMode { Fraction, OnePerClass, KFold };

struct SplitSpec {
  SplitMode mode = SplitMode::Fraction;
  double test_fraction = 0.3;
  std::size_t folds = 5;
  std::size_t fold = 0;  // which fold is held out (KFold)
  std::uint64_t seed = 0;

  static SplitSpec fraction(double f, std::uint64_t seed) {
    SplitSpec s;
    s.mode = SplitMode::Fraction;
    s.test_fraction = f;
    s.seed = seed;
    return s;
  }
  static SplitSpec one_per_class(std::uint64_t seed) {
    SplitSpec s;
    s.mode = SplitMode::OnePerClass;
    s.seed = seed;
    return s;
  }
  static SplitSpec kfold(std::size_t k, std::size_t fold, std::uint64_t seed) {
    SplitSpec s;
    s.mode = SplitMode::KFold;
    s.folds = k;
    s.fold = fold;
    s.seed = seed;
    return s;
  }

  void validate() const {
    if (mode == SplitMode::Fraction && !(test_fraction > 0.0 && test_fraction < 1.0))
      throw InvalidArgument("test fraction must lie in (0, 1)");
    if (mode == SplitMode::KFold && folds < 2) throw InvalidArgument("k-fold needs k >= 2");
    if (mode == SplitMode::KFold && fold >= folds) throw InvalidArgument("fold index out of range");
  }

  std::string describe() const {
    switch (mode) {
      case SplitMode::Fraction: return "frac:" + format_double(test_fraction);
      case SplitMode::OnePerClass: return "one-per-class";
      case SplitMode::KFold: return "kfold:" + std::to_string(folds);
    }
    return "?";
  }
};

/// Accepts `frac:<f>`, `one-per-class` and `kfold:<k>`.
inline SplitSpec parse_split(const std::string& text, std::uint64_t seed) {
  if (text == "one-per-class") return SplitSpec::one_per_class(seed);
  if (text.rfind("frac:", 0) == 0) {
    const auto f = parse_double(std::string_view(text).substr(5));
    if (!f) throw InvalidArgument("bad split fraction in '" + text + "'");
    auto s = SplitSpec::fraction(*f, seed);
    s.validate();
    return s;
  }
  if (text.rfind("kfold:", 0) == 0) {
    const auto k = parse_int<std::size_t>(std::string_view(text).substr(6));
    if (!k) throw InvalidArgument("bad fold count in '" + text + "'");
    auto s = SplitSpec::kfold(*k, 0, seed);
    s.validate();
    return s;
  }
  throw InvalidArgument("unknown split '" + text + "'");
}

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Row indices of each part, each in original row order.
///
/// Fraction: per class, floor(n_c * f) shuffled rows go to test.
/// OnePerClass: one seeded row per class trains, the rest test.
/// KFold: per class, shuffled rows are dealt round-robin into k folds.
inline SplitIndices split_indices(const Dataset& ds, const SplitSpec& spec) {
  spec.validate();
  std::map<ClassLabel, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) by_class[ds.samples[i].class_label].push_back(i);

  if (spec.mode == SplitMode::OnePerClass) {
    for (const auto& [label, rows] : by_class)
      if (rows.size() < 2)
        throw InvalidArgument("one-per-class split needs >= 2 samples of class " + std::to_string(label));
  }
  if (spec.mode == SplitMode::KFold && ds.samples.size() < spec.folds)
    throw InvalidArgument("k-fold needs at least k samples");

  Xoshiro256StarStar rng(spec.seed);
  std::vector<std::uint8_t> in_test(ds.samples.size(), 0);
  std::size_t offset = 0;  // keeps folds balanced across classes
  for (auto& [label, rows] : by_class) {
    seeded_shuffle(rows, rng);
    switch (spec.mode) {
      case SplitMode::Fraction: {
        const auto n_test = static_cast<std::size_t>(
            std::floor(static_cast<double>(rows.size()) * spec.test_fraction + 1e-9));
        for (std::size_t i = 0; i < n_test; ++i) in_test[rows[i]] = 1;
        break;
      }
      case SplitMode::OnePerClass:
        for (std::size_t i = 1; i < rows.size(); ++i) in_test[rows[i]] = 1;
        break;
      case SplitMode::KFold:
        for (std::size_t i = 0; i < rows.size(); ++i)
          if ((i + offset) % spec.folds == spec.fold) in_test[rows[i]] = 1;
        offset += rows.size();
        break;
    }
  }
  SplitIndices out;
  for (std::size_t i = 0; i < in_test.size(); ++i) (in_test[i] ? out.test : out.train).push_back(i);
  return out;
}

inline std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  const auto idx = split_indices(ds, spec);
  return {ds.subset(idx.train, "/train"), ds.subset(idx.test, "/test")};
}

/// Seeded permutation of the rows.
inline Dataset shuffled(const Dataset& ds, std::uint64_t seed) {
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Xoshiro256StarStar rng(seed);
  seeded_shuffle(order, rng);
  Dataset out = ds.subset(order);
  out.name = ds.name;
  return out;
}

// Scaling -------------------------------------------------------------------

/// Per-feature affine map of the fitted range onto [0, 1]. Constant features
/// map to 0.
class MinMaxScaler {
 public:
  void fit(const Dataset& ds) {
    if (ds.samples.empty()) throw InvalidArgument("cannot fit scaler on an empty dataset");
    lo_.assign(ds.dimension, std::numeric_limits<double>::infinity());
    hi_.assign(ds.dimension, -std::numeric_limits<double>::infinity());
    for (const auto& s : ds.samples)
      for (std::size_t i = 0; i < ds.dimension; ++i) {
        lo_[i] = std::min(lo_[i], s.position[i]);
        hi_[i] = std::max(hi_[i], s.position[i]);
      }
  }

  void transform(Vector& x) const {
    if (x.size() != lo_.size()) throw DimensionError("scaler dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double span = hi_[i] - lo_[i];
      x[i] = span > 0.0 ? (x[i] - lo_[i]) / span : 0.0;
    }
  }

  void transform(Dataset& ds) const {
    for (auto& s : ds.samples) transform(s.position);
  }

 private:
  Vector lo_;
  Vector hi_;
};

// Universe persistence --------------------------------------------------------

inline constexpr std::string_view kUniverseMagic = "gravclass-universe";
inline constexpr int kUniverseVersion = 1;

/// Line-oriented text form; every float is written in shortest round-trip
/// decimal, so a reload is bit-identical. The collision early-stop flag is a
/// prediction option and is not stored.
inline void write_universe(std::ostream& out, const Universe& u) {
  const auto& c = u.config();
  out << kUniverseMagic << " v" << kUniverseVersion << '\n';
  out << "r_init=" << format_double(c.initial_radius) << " alpha=" << format_double(c.step_fraction)
      << " beta=" << c.iteration_count << " metric=" << to_string(c.distance_metric)
      << " eps=" << format_double(c.epsilon_distance) << '\n';
  out << "dim=" << u.dimension() << " planets=" << u.size() << '\n';
  for (const Planet& p : u.planets()) {
    out << "id=" << p.id << " class=" << p.class_label << " mass=" << format_double(p.mass)
        << " radius=" << format_double(p.radius) << " pos=";
    for (std::size_t i = 0; i < p.position.size(); ++i) {
      if (i) out << ',';
      out << format_double(p.position[i]);
    }
    out << '\n';
  }
}

namespace detail {

// Splits "k1=v1 k2=v2 ..." and checks the keys appear exactly in `keys` order.
inline std::vector<std::string> expect_fields(const std::string& line,
                                              std::initializer_list<std::string_view> keys,
                                              std::size_t line_no) {
  std::istringstream ss(line);
  std::vector<std::string> values;
  std::string token;
  auto key = keys.begin();
  while (ss >> token) {
    const auto eq = token.find('=');
    if (key == keys.end() || eq == std::string::npos || std::string_view(token).substr(0, eq) != *key)
      throw FormatError("corrupt universe file: unexpected '" + token + "' on line " + std::to_string(line_no));
    values.push_back(token.substr(eq + 1));
    ++key;
  }
  if (key != keys.end())
    throw FormatError("corrupt universe file: missing '" + std::string(*key) + "' on line " +
                      std::to_string(line_no));
  return values;
}

template <typename T>
T require(std::optional<T> v, std::string_view what, std::size_t line_no) {
  if (!v) throw FormatError("corrupt universe file: bad " + std::string(what) + " on line " + std::to_string(line_no));
  return *v;
}

}  // namespace detail

inline Universe read_universe(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("corrupt universe file: empty");
  {
    std::istringstream ss(line);
    std::string magic, version;
    ss >> magic >> version;
    if (magic != kUniverseMagic || version.size() < 2 || version[0] != 'v')
      throw FormatError("corrupt universe file: bad header");
    const auto v = parse_int<int>(std::string_view(version).substr(1));
    if (!v) throw FormatError("corrupt universe file: bad version tag");
    if (*v != kUniverseVersion)
      throw VersionError("unsupported universe file version " + std::to_string(*v) + " (expected " +
                         std::to_string(kUniverseVersion) + ")");
  }

  if (!std::getline(in, line)) throw FormatError("corrupt universe file: missing config line");
  const auto cfg = detail::expect_fields(line, {"r_init", "alpha", "beta", "metric", "eps"}, 2);
  UniverseConfig config;
  config.initial_radius = detail::require(parse_double(cfg[0]), "r_init", 2);
  config.step_fraction = detail::require(parse_double(cfg[1]), "alpha", 2);
  config.iteration_count = detail::require(parse_int<std::uint32_t>(cfg[2]), "beta", 2);
  try {
    config.distance_metric = parse_metric(cfg[3]);
  } catch (const InvalidArgument&) {
    throw FormatError("corrupt universe file: bad metric on line 2");
  }
  config.epsilon_distance = detail::require(parse_double(cfg[4]), "eps", 2);
  try {
    config.validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("corrupt universe file: ") + e.what());
  }

  if (!std::getline(in, line)) throw FormatError("corrupt universe file: missing size line");
  const auto sizes = detail::expect_fields(line, {"dim", "planets"}, 3);
  const auto dim = detail::require(parse_int<std::size_t>(sizes[0]), "dim", 3);
  const auto count = detail::require(parse_int<std::size_t>(sizes[1]), "planets", 3);

  std::vector<Planet> planets;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t line_no = 4 + i;
    if (!std::getline(in, line))
      throw FormatError("corrupt universe file: truncated after " + std::to_string(i) + " of " +
                        std::to_string(count) + " planets");
    const auto f = detail::expect_fields(line, {"id", "class", "mass", "radius", "pos"}, line_no);
    Planet p;
    p.id = detail::require(parse_int<PlanetId>(f[0]), "id", line_no);
    p.class_label = detail::require(parse_int<ClassLabel>(f[1]), "class", line_no);
    p.mass = detail::require(parse_double(f[2]), "mass", line_no);
    p.radius = detail::require(parse_double(f[3]), "radius", line_no);
    std::string_view pos = f[4];
    while (true) {
      const auto comma = pos.find(',');
      p.position.push_back(detail::require(parse_double(pos.substr(0, comma)), "pos", line_no));
      if (comma == std::string_view::npos) break;
      pos.remove_prefix(comma + 1);
    }
    if (!all_finite(p.position) || !std::isfinite(p.mass) || !std::isfinite(p.radius))
      throw FormatError("corrupt universe file: non-finite value on line " + std::to_string(line_no));
    planets.push_back(std::move(p));
  }
  while (std::getline(in, line))
    if (!detail::trim(line).empty()) throw FormatError("corrupt universe file: trailing data");

  Universe u(config);
  u.assign(dim, std::move(planets));
  return u;
}

inline void save_universe(const Universe& u, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  write_universe(out, u);
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

inline Universe load_universe(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_universe(in);
}

}  // namespace gravclass
