// ppcd-stab: stability analysis of planar probabilistic PCD systems and
// weighted Markov chains.
//
//   ppcd-stab analyze FILE [--json]
//   ppcd-stab quotient FILE
//   ppcd-stab simulate FILE [--steps N] [--seed S] [--trials T] [--check-conservation | --average]
//   ppcd-stab bench --experiment {1,2,3} [--seed S] [--locs-per-region K] [--emit PATH]

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "ppcdstab/bench.hpp"
#include "ppcdstab/errors.hpp"
#include "ppcdstab/json_io.hpp"
#include "ppcdstab/ppcd.hpp"
#include "ppcdstab/sampling.hpp"

using namespace ppcdstab;

namespace {

constexpr int kExitError = 2;

struct Input {
  std::string path;
  std::string bytes;
  Json doc;
  InputKind kind;
};

Input read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
  Input input{path, std::string(std::istreambuf_iterator<char>(in), {}), {}, InputKind::Model};
  try {
    input.doc = Json::parse(input.bytes);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
  input.kind = detect_input_kind(input.doc);
  return input;
}

Json point_json(const Vec2Q& p) { return Json::array({rat_fraction(p(0)), rat_fraction(p(1))}); }

int cmd_analyze(const std::string& path, bool json, const std::vector<std::string>& argv) {
  const Input input = read_input(path);
  const RunContext ctx{argv, path, sha256_hex(input.bytes), input.kind};
  const AnalysisReport report =
      input.kind == InputKind::Model ? analyze(ppcd_from_json(input.doc)) : analyze_chain(chain_from_json(input.doc));
  if (json) {
    std::cout << analysis_to_json(report, ctx).dump(2) << "\n";
  } else {
    std::cout << analysis_to_text(report, ctx);
  }
  return exit_code(report);
}

int cmd_quotient(const std::string& path) {
  const Input input = read_input(path);
  if (input.kind != InputKind::Model) throw Error(ErrorCode::Parse, path + ": quotient needs a ppcd model");
  std::cout << chain_to_json(build_quotient(ppcd_from_json(input.doc)).chain).dump(2) << "\n";
  return 0;
}

struct SimulateOptions {
  std::size_t steps = 100;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  bool check_conservation = false;
  bool average = false;
};

Json average_json(const Wdtmc& chain, const SimulateOptions& opt) {
  Json trials = Json::array();
  for (std::size_t i = 0; i < opt.trials; ++i) {
    const MonteCarloStats stats = average_step_weight(chain, sample_path(chain, opt.steps, opt.seed + i));
    const double z = stats.std_error > 0 ? (stats.partial_average - stats.target) / stats.std_error : 0.0;
    trials.push_back({{"seed", opt.seed + i},
                      {"steps", stats.steps},
                      {"partial_average", stats.partial_average},
                      {"target", std::isnan(stats.target) ? Json(nullptr) : Json(stats.target)},
                      {"std_error", stats.std_error},
                      {"within_3_sigma", !std::isnan(stats.target) && std::abs(z) <= 3.0}});
  }
  return trials;
}

int cmd_simulate(const std::string& path, const SimulateOptions& opt) {
  const Input input = read_input(path);
  Json out{{"schema", std::string(kReportSchema)}, {"rng", std::string(kRngAlgorithm)}, {"seed", opt.seed},
           {"input_sha256", sha256_hex(input.bytes)}};

  if (input.kind == InputKind::Chain) {
    const Wdtmc chain = chain_from_json(input.doc);
    require_valid(chain);
    if (opt.check_conservation) throw Error(ErrorCode::InvalidArgument, "--check-conservation needs a ppcd model");
    if (opt.average) {
      out["average"] = average_json(chain, opt);
    } else {
      Json trials = Json::array();
      for (std::size_t i = 0; i < opt.trials; ++i) {
        const Path p = sample_path(chain, opt.steps, opt.seed + i);
        Json states = Json::array();
        for (StateId s : p.states) states.push_back(chain.name(s));
        trials.push_back({{"seed", opt.seed + i}, {"states", states}, {"weight", path_weight(chain, p).str()}});
      }
      out["trials"] = trials;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  const Ppcd model = ppcd_from_json(input.doc);
  if (opt.average) {
    out["average"] = average_json(build_quotient(model).chain, opt);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  if (opt.check_conservation) {
    const ConservationReport report = weight_conservation_check(model, opt.steps, opt.trials, opt.seed);
    Json trials = Json::array();
    for (const ConservationTrial& t : report.trials) {
      trials.push_back({{"seed", t.seed},
                        {"start_multiple", rat_fraction(t.start_multiple)},
                        {"steps", t.steps_taken},
                        {"end", std::string(to_string(t.end))},
                        {"concrete_product", t.concrete_product.str()},
                        {"quotient_product", t.quotient_product.str()},
                        {"passed", t.passed},
                        {"detail", t.detail}});
    }
    out["conservation"] = {{"passed", report.passed()}, {"trials", report.trials.size()}, {"results", trials}};
    std::cout << out.dump(2) << "\n";
    std::cerr << report.passed() << "/" << report.trials.size() << " trials conserve weight\n";
    return report.all_passed() ? 0 : 1;
  }

  const Location* init = model.find(model.initial.location);
  if (init == nullptr) throw Error(ErrorCode::InvalidModel, "initial location '" + model.initial.location + "' does not exist");
  const Vec2Q base = init->invariant().facet(model.initial.facet).dir();
  Json trials = Json::array();
  for (std::size_t i = 0; i < opt.trials; ++i) {
    const ConcretePath p = simulate_concrete(model, base, opt.steps, opt.seed + i);
    Json steps = Json::array();
    for (std::size_t k = 0; k < p.steps.size(); ++k) {
      Json s{{"location", p.steps[k].location},
             {"point", point_json(p.steps[k].point)},
             {"log_norm", log_double(inf_norm(p.steps[k].point))}};
      if (k > 0) s["scale"] = p.step_scales[k - 1].str();
      steps.push_back(std::move(s));
    }
    trials.push_back({{"seed", opt.seed + i}, {"end", std::string(to_string(p.end))}, {"note", p.note}, {"steps", steps}});
  }
  out["trials"] = trials;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_bench(const ExperimentConfig& cfg, const std::string& emit) {
  const Ppcd model = gen_experiment(cfg);
  if (!emit.empty()) {
    std::ofstream(emit) << ppcd_to_json(model).dump(2) << "\n";
    Json manifest = experiment_manifest(cfg);
    manifest["model"] = emit;
    std::ofstream(emit + ".manifest.json") << manifest.dump(2) << "\n";
  }
  const AnalysisReport report = analyze(model);
  std::cout << bench_header() << "\n" << bench_row(cfg, model.locations.size(), report) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact stability analysis for planar probabilistic PCD systems and weighted Markov chains"};
  app.require_subcommand(1);
  const std::vector<std::string> command(argv, argv + argc);

  std::string file;
  bool json = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Decide absolute and almost-sure stability");
  analyze_cmd->add_option("file", file, "ppcd or wdtmc JSON file")->required();
  analyze_cmd->add_flag("--json", json, "JSON report on stdout");

  auto* quotient_cmd = app.add_subcommand("quotient", "Print the quotient chain of a ppcd model");
  quotient_cmd->add_option("file", file, "ppcd JSON file")->required();

  SimulateOptions sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Seeded exact simulation");
  simulate_cmd->add_option("file", file, "ppcd or wdtmc JSON file")->required();
  simulate_cmd->add_option("--steps", sim.steps, "Steps per trial")->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed, "Seed of the first trial; trial i uses seed + i")->capture_default_str();
  simulate_cmd->add_option("--trials", sim.trials, "Number of trials")->capture_default_str();
  auto* conserve = simulate_cmd->add_flag("--check-conservation", sim.check_conservation,
                                          "Compare concrete step scales with quotient edge weights");
  simulate_cmd->add_flag("--average", sim.average, "Average step log-weight against the effective weight")
      ->excludes(conserve);

  ExperimentConfig bench;
  std::string emit;
  auto* bench_cmd = app.add_subcommand("bench", "Generate and analyze a benchmark model");
  bench_cmd->add_option("--experiment", bench.experiment, "Experiment 1, 2 or 3")
      ->required()
      ->check(CLI::Range(1, 3));
  bench_cmd->add_option("--seed", bench.seed, "Generator seed")->capture_default_str();
  bench_cmd->add_option("--locs-per-region", bench.locs_per_region, "Locations in each of the 8 regions")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--emit", emit, "Write the model here (and a manifest next to it)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(file, json, command);
    if (*quotient_cmd) return cmd_quotient(file);
    if (*simulate_cmd) return cmd_simulate(file, sim);
    if (*bench_cmd) return cmd_bench(bench, emit);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
