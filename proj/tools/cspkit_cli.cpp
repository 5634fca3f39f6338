// cspkit command line: synthetic data generation, filter fitting, the
// comparison experiment and report conversion.
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cspkit/cspkit.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

int exit_code_for(const cspkit::Error& e) {
  switch (cspkit::category(e.code())) {
    case cspkit::ErrorCategory::Config: return kExitConfig;
    case cspkit::ErrorCategory::Data: return kExitData;
    case cspkit::ErrorCategory::Numerical: return kExitNumerical;
  }
  return kExitNumerical;
}

void write_truth_csv(const cspkit::Matrix& filters, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw cspkit::Error(cspkit::ErrorCode::Io, "cannot write " + path);
  out << "channel,filter1,filter2\n";
  char buf[96];
  for (cspkit::Index i = 0; i < filters.rows(); ++i) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", static_cast<long long>(i), filters(i, 0),
                  filters(i, 1));
    out << buf;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Common spatial pattern filters and the Stiefel trace-ratio variant"};
  app.require_subcommand(1);

  cspkit::SynthParams synth;
  std::string gen_out;
  std::string gen_truth;
  auto* gen = app.add_subcommand("gen", "Write a synthetic two-class EPO1 dataset");
  gen->add_option("--channels", synth.channels, "Channels C")->capture_default_str();
  gen->add_option("--samples", synth.samples, "Samples per epoch T")->capture_default_str();
  gen->add_option("--per-class", synth.epochs_per_class, "Epochs per class")->capture_default_str();
  gen->add_option("--std-high", synth.source_std_high, "Std of a source in its active class")
      ->capture_default_str();
  gen->add_option("--std-low", synth.source_std_low, "Std of inactive sources")->capture_default_str();
  gen->add_option("--noise", synth.noise_std, "Sensor noise std")->capture_default_str();
  gen->add_option("--kappa", synth.mixing_condition_max, "Mixing-matrix condition bound")
      ->capture_default_str();
  gen->add_option("--fs", synth.sample_rate_hz, "Sample rate (Hz)")->capture_default_str();
  gen->add_option("--seed", synth.seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output .epo1 file")->required();
  gen->add_option("--truth", gen_truth, "Optional CSV for the ground-truth filters");

  std::string fit_data, fit_method = "csp", fit_out;
  int fit_cprime = 6;
  double fit_lambda = 0.0;
  auto* fit = app.add_subcommand("fit", "Fit a filter bank on an EPO1 dataset");
  fit->add_option("--data", fit_data, "Input .epo1 file")->required();
  fit->add_option("--method", fit_method, "csp|csp1|sm|rcsp|rsm")->capture_default_str();
  fit->add_option("--cprime", fit_cprime, "Number of filters C' (even)")->capture_default_str();
  fit->add_option("--lambda", fit_lambda, "Ridge strength for rcsp/rsm")->capture_default_str();
  fit->add_option("--out", fit_out, "Output bank.json")->required();

  std::string eval_config, eval_out;
  auto* eval = app.add_subcommand("eval", "Run the repeated-split comparison experiment");
  eval->add_option("--config", eval_config, "Experiment config JSON")->required();
  eval->add_option("--out", eval_out, "Output directory")->required();

  std::string report_in, report_format = "csv", report_out;
  auto* report = app.add_subcommand("report", "Re-render CSV tables from a report.json");
  report->add_option("--in", report_in, "report.json")->required();
  report->add_option("--format", report_format, "Output format")
      ->check(CLI::IsMember({"csv"}))
      ->capture_default_str();
  report->add_option("--out", report_out, "Output directory (default: next to the input)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) {
      const cspkit::SyntheticData data = cspkit::generate_synthetic(synth);
      cspkit::write_epo(data.dataset, gen_out);
      if (!gen_truth.empty()) write_truth_csv(data.ground_truth_filters, gen_truth);
    } else if (*fit) {
      const auto method = cspkit::method_from_string(fit_method);
      if (!method) throw cspkit::Error(cspkit::ErrorCode::Config, "unknown method " + fit_method);
      const cspkit::Dataset ds = cspkit::read_epo(fit_data);
      const cspkit::FilterBank bank =
          cspkit::fit_bank(ds, *method, fit_cprime, cspkit::RegParam{fit_lambda});
      cspkit::write_bank(bank, fit_out);
    } else if (*eval) {
      const cspkit::ExperimentConfig cfg = cspkit::load_config(eval_config);
      const cspkit::ExperimentReport rep = cspkit::run_experiment(cfg);
      cspkit::render_report(rep, eval_out);
      std::cout << cspkit::accuracy_csv(rep);
    } else if (*report) {
      const cspkit::ExperimentReport rep = cspkit::load_report(report_in);
      std::filesystem::path dir = report_out.empty()
                                      ? std::filesystem::path(report_in).parent_path()
                                      : std::filesystem::path(report_out);
      if (dir.empty()) dir = ".";
      cspkit::render_csv(rep, dir);
      std::cout << cspkit::accuracy_csv(rep);
    }
  } catch (const cspkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
