// Command-line entry points: train, evaluate, aggregate, plot, gradcheck.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "chac/alloc.hpp"
#include "chac/numeric/gradient_check.hpp"
#include "chac/runner/config.hpp"
#include "chac/runner/report.hpp"
#include "chac/runner/trainer.hpp"

namespace {

int RunTrain(const std::string& config_path, std::optional<std::uint64_t> seed) {
  chac::runner::RunConfig config = chac::runner::LoadConfig(config_path);
  if (seed) config.seeds = {*seed};
  const auto files = chac::runner::Train(config, &std::cerr);
  for (const auto& f : files) std::cout << f.string() << '\n';
  return 0;
}

int RunEvaluate(const std::string& checkpoint, int episodes, std::uint64_t seed) {
  const double rate = chac::runner::Evaluate(checkpoint, episodes, seed);
  std::cout << "success_rate " << rate << '\n';
  return 0;
}

int RunAggregate(const std::vector<std::string>& inputs, const std::string& out,
                 const std::optional<std::string>& label) {
  std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
  const auto curves = chac::runner::Aggregate(paths, label);
  std::ofstream os(out);
  if (!os) throw chac::InvalidInput("cannot write " + out);
  chac::runner::WriteCurves(os, curves);
  return 0;
}

int RunPlot(const std::string& input, const std::string& out, int smoothing,
            const std::string& title) {
  std::ifstream in(input);
  if (!in) throw chac::InvalidInput("cannot open " + input);
  const auto curves = chac::runner::ReadCurves(in);
  chac::runner::PlotOptions opts;
  opts.smoothing = smoothing;
  opts.title = title;
  std::ofstream os(out);
  if (!os) throw chac::InvalidInput("cannot write " + out);
  chac::runner::WriteSvg(os, curves, opts);
  return 0;
}

int RunGradcheck(int networks, std::uint64_t seed, double tolerance) {
  const auto r = chac::numeric::RandomNetworkGradientSuite(networks, seed);
  std::cout << "networks " << r.networks << " max_relative_error "
            << r.max_relative_error << " seconds " << r.seconds << '\n';
  if (!(r.max_relative_error < tolerance)) {
    std::cerr << "gradcheck: max relative error " << r.max_relative_error
              << " exceeds " << tolerance << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  chac::TuneAllocator();
  CLI::App app{"Curious hierarchical actor-critic experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> train_seed;
  auto* train = app.add_subcommand("train", "train every (eta, seed) of a config");
  train->add_option("--config", config_path, "key = value config file")->required();
  train->add_option("--seed", train_seed, "run only this seed");

  std::string checkpoint;
  int episodes = 0;
  std::uint64_t eval_seed = 0;
  auto* evaluate = app.add_subcommand("evaluate", "noiseless success rate of a checkpoint");
  evaluate->add_option("--checkpoint", checkpoint, "checkpoint directory")->required();
  evaluate->add_option("--episodes", episodes, "number of test episodes")->required();
  evaluate->add_option("--seed", eval_seed, "episode seed stream");

  std::vector<std::string> inputs;
  std::string agg_out;
  std::optional<std::string> label;
  auto* aggregate = app.add_subcommand("aggregate", "mean/std curves across seeds");
  aggregate->add_option("csv", inputs, "metrics CSV files")->required();
  aggregate->add_option("--out", agg_out, "output CSV")->required();
  aggregate->add_option("--label", label, "single label for all inputs");

  std::string plot_in;
  std::string plot_out;
  int smoothing = 1;
  std::string title = "success rate";
  auto* plot = app.add_subcommand("plot", "SVG learning curves");
  plot->add_option("csv", plot_in, "aggregated CSV")->required();
  plot->add_option("--out", plot_out, "output SVG")->required();
  plot->add_option("--smooth", smoothing, "moving-average window (1 = off)");
  plot->add_option("--title", title, "plot title");

  int networks = 100;
  std::uint64_t gc_seed = 1;
  double tolerance = 1e-4;
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient suite");
  gradcheck->add_option("--networks", networks, "random networks to check");
  gradcheck->add_option("--seed", gc_seed, "generator seed");
  gradcheck->add_option("--tolerance", tolerance, "max relative error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*train) return RunTrain(config_path, train_seed);
    if (*evaluate) return RunEvaluate(checkpoint, episodes, eval_seed);
    if (*aggregate) return RunAggregate(inputs, agg_out, label);
    if (*plot) return RunPlot(plot_in, plot_out, smoothing, title);
    if (*gradcheck) return RunGradcheck(networks, gc_seed, tolerance);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
