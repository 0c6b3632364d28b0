// gravclass: train, query and benchmark gravitational-clustering models.
//
//   gravclass train    --data iris.csv --out iris.universe
//   gravclass predict  --model iris.universe --query 5.1,3.5,1.4,0.2 --verbose
//   gravclass evaluate --data wdbc.csv --split frac:0.3 --seed 1 --out report.txt

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gravclass/gravclass.hpp"

namespace {

using namespace gravclass;

struct ConfigFlags {
  double r_init = 50.0;
  double alpha = 0.01;
  std::uint32_t beta = 100;
  std::string metric = "euclidean";
  bool early_stop = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("--r-init", r_init, "Radius of a newly created planet")->capture_default_str();
    cmd.add_option("--alpha", alpha, "Step length of the simulated test mass")->capture_default_str();
    cmd.add_option("--beta", beta, "Number of simulation steps")->capture_default_str();
    cmd.add_option("--metric", metric, "Distance metric")
        ->check(CLI::IsMember({"euclidean", "manhattan"}))
        ->capture_default_str();
    cmd.add_flag("--early-stop-collision", early_stop, "Stop tracing at the first captured position");
  }

  UniverseConfig build() const {
    UniverseConfig c;
    c.initial_radius = r_init;
    c.step_fraction = alpha;
    c.iteration_count = beta;
    c.distance_metric = parse_metric(metric);
    c.early_stop_on_collision = early_stop;
    c.validate();
    return c;
  }
};

struct DataFlags {
  std::string path;
  std::string label_col = "label";
  std::optional<std::string> weight_col;

  void attach(CLI::App& cmd) {
    cmd.add_option("--data", path, "CSV file with a header row")->required();
    cmd.add_option("--label-col", label_col, "Name of the class label column")->capture_default_str();
    cmd.add_option("--weight-col", weight_col, "Name of the optional per-row weight column");
  }

  Dataset load() const { return load_csv(path, CsvSchema{label_col, weight_col}); }
};

Vector parse_query(const std::string& text) {
  Vector out;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const auto v = parse_double(detail::trim(rest.substr(0, comma)));
    if (!v) throw InvalidArgument("query is not a comma-separated list of numbers");
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::string join(const Vector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

int run_train(const DataFlags& data, const ConfigFlags& cfg, std::optional<std::uint64_t> shuffle_seed,
              const std::string& out_path) {
  Dataset ds = data.load();
  if (shuffle_seed) ds = shuffled(ds, *shuffle_seed);
  Classifier model(cfg.build());
  const auto outcomes = model.fit(ds.samples);
  save_universe(model.universe(), out_path);
  std::size_t merged = 0;
  for (const auto& o : outcomes) merged += o.action == TrainAction::Merged;
  std::cout << "samples=" << ds.size() << " planets=" << model.universe().size() << " merged=" << merged
            << " total_mass=" << format_double(total_mass(model.universe())) << '\n';
  return 0;
}

int run_predict(const std::string& model_path, const std::string& query, const std::string& mode,
                bool verbose, bool early_stop) {
  Classifier model(load_universe(model_path));
  model.set_early_stop(early_stop);
  const Vector x = parse_query(query);
  const EvalModes modes = parse_modes(mode);
  if (modes.sim) {
    const TraceResult t = model.trace(x);
    std::cout << "sim=" << t.predicted_class << '\n';
    if (verbose) {
      std::cout << "  final_position=" << join(t.final_position) << '\n'
                << "  capture=" << to_string(t.capture) << '\n'
                << "  steps=" << t.steps_taken << '\n';
    }
  }
  if (modes.prob) {
    const auto scores = model.scores(x);
    std::cout << "prob=" << scores.front().class_label << '\n';
    if (verbose)
      for (const auto& s : scores)
        std::cout << "  score." << s.class_label << '=' << format_double(s.score) << " planets=" << s.planet_count
                  << '\n';
  }
  return 0;
}

int run_evaluate(const DataFlags& data, const ConfigFlags& cfg, const std::string& split_text, std::uint64_t seed,
                 std::optional<std::uint64_t> shuffle_seed, const std::string& scale, const std::string& mode,
                 const std::string& out_path) {
  const Dataset ds = data.load();
  EvalOptions opt;
  opt.config = cfg.build();
  opt.split = parse_split(split_text, seed);
  opt.modes = parse_modes(mode);
  opt.scaling = parse_scaling(scale);
  opt.shuffle_seed = shuffle_seed;
  const EvaluationReport report = evaluate(ds, opt);
  print_report(std::cout, report);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write '" + out_path + "'");
    write_report(out, report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gravitational clustering classifier"};
  app.require_subcommand(1);

  DataFlags train_data;
  ConfigFlags train_cfg;
  std::optional<std::uint64_t> train_shuffle;
  std::string train_out;
  auto* train = app.add_subcommand("train", "Build a universe from a CSV file, in row order");
  train_data.attach(*train);
  train_cfg.attach(*train);
  train->add_option("--shuffle-seed", train_shuffle, "Shuffle the training order with this seed");
  train->add_option("--out,--model", train_out, "Universe file to write")->required();

  std::string model_path, query, predict_mode = "both";
  bool verbose = false, predict_early_stop = false;
  auto* predict = app.add_subcommand("predict", "Classify one query vector with a saved universe");
  predict->add_option("--model", model_path, "Universe file")->required();
  predict->add_option("--query", query, "Comma-separated feature values")->required();
  predict->add_option("--mode", predict_mode, "Predictor")->check(CLI::IsMember({"sim", "prob", "both"}))->capture_default_str();
  predict->add_flag("--verbose", verbose, "Print trace details or all class scores");
  predict->add_flag("--early-stop-collision", predict_early_stop, "Stop tracing at the first captured position");

  DataFlags eval_data;
  ConfigFlags eval_cfg;
  std::string split_text = "frac:0.3", scale = "none", eval_mode = "both", report_path;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> eval_shuffle;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Split, train and score both predictors");
  eval_data.attach(*evaluate_cmd);
  eval_cfg.attach(*evaluate_cmd);
  evaluate_cmd->add_option("--split", split_text, "frac:<f> | one-per-class | kfold:<k>")->capture_default_str();
  evaluate_cmd->add_option("--seed", seed, "Split seed")->capture_default_str();
  evaluate_cmd->add_option("--shuffle-seed", eval_shuffle, "Shuffle the training order with this seed");
  evaluate_cmd->add_option("--scale", scale, "Feature scaling fitted on the training part")
      ->check(CLI::IsMember({"none", "minmax"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--mode", eval_mode, "Predictors to score")
      ->check(CLI::IsMember({"sim", "prob", "both"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--out", report_path, "Write the key=value report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return run_train(train_data, train_cfg, train_shuffle, train_out);
    if (*predict) return run_predict(model_path, query, predict_mode, verbose, predict_early_stop);
    if (*evaluate_cmd)
      return run_evaluate(eval_data, eval_cfg, split_text, seed, eval_shuffle, scale, eval_mode, report_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
