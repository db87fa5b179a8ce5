#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "../vendor/CLI11.hpp"
#include "radsup/diagnostics.hpp"
#include "radsup/experiment.hpp"
#include "radsup/specfun.hpp"

// Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage or
// configuration error.

namespace {

using namespace radsup;

int print_report(const ExitReport& report) {
  for (const CheckLine& c : report.checks) std::puts(format_check(c).c_str());
  for (const std::string& f : report.csv_written)
    std::printf("wrote %s\n", f.c_str());
  return report.passed() ? 0 : 1;
}

// merge --config values (if any) with explicitly passed flags; flags win
ExperimentSpec assemble_spec(Scenario scenario, const std::string& config_path,
                             const std::map<std::string, std::string>& flags,
                             const std::string& out) {
  ExperimentSpec spec;
  if (!config_path.empty()) {
    spec = parse_config(config_path);
    if (spec.scenario != scenario) {
      throw std::invalid_argument(config_path + ": scenario '" +
                                  to_string(spec.scenario) +
                                  "' does not match the subcommand");
    }
  }
  spec.scenario = scenario;
  for (const auto& [k, v] : flags) spec.parameters[k] = v;
  if (!out.empty()) spec.outputs = {out};
  return spec;
}

struct ScenarioCli {
  std::string config, out;
  std::map<std::string, std::string> flags;

  void add_option(CLI::App* cmd, const std::string& key) {
    cmd->add_option_function<std::string>(
        "--" + key, [this, key](const std::string& v) { flags[key] = v; });
  }
};

void add_scenario_command(CLI::App& app, const char* group, const char* verb,
                          Scenario scenario,
                          const std::vector<std::string>& keys,
                          int& exit_code) {
  CLI::App* cmd = app.add_subcommand(group)->add_subcommand(verb);
  auto cli = std::make_shared<ScenarioCli>();
  cmd->add_option("--config", cli->config, "key=value config file");
  cmd->add_option("--out", cli->out, "CSV output path");
  for (const std::string& k : keys) cli->add_option(cmd, k);
  cmd->callback([&exit_code, cli, scenario]() {
    ExperimentSpec spec =
        assemble_spec(scenario, cli->config, cli->flags, cli->out);
    exit_code = print_report(run_experiment(spec));
  });
}

int run_suite(int jobs, unsigned long seed) {
  using Checks = std::vector<CheckLine>;
  struct Task {
    std::string label;
    std::function<Checks()> run;
  };
  // criteria 6 and 9 share one wave run and are reported as one task
  std::vector<Task> tasks = {
      {"criterion 1 (kummer suite)", criterion_kummer},
      {"criterion 2 (potential)", criterion_potential},
      {"criterion 3 (supersolution certificates)", criterion_certificates},
      {"criterion 4 (solver oracle)", criterion_solver_oracle},
      {"criterion 5 (heat decay rates)", criterion_heat_rates},
      {"criteria 6+9 (wave energy bounds)",
       [] {
         auto [w, h] = criterion_wave_energy();
         w.insert(w.end(), h.begin(), h.end());
         return w;
       }},
      {"criterion 7 (diffusion phenomena)", criterion_diffusion},
      {"criterion 8 (hardy inequality)", [seed] { return criterion_hardy(seed); }},
  };

  std::vector<Checks> results(tasks.size());
  std::vector<std::string> failures(tasks.size());
  std::mutex next_mutex;
  size_t next = 0;
  auto worker = [&]() {
    for (;;) {
      size_t i;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= tasks.size()) return;
        i = next++;
      }
      try {
        results[i] = tasks[i].run();
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  jobs = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  bool all_pass = true;
  for (size_t i = 0; i < tasks.size(); ++i) {
    if (!failures[i].empty()) {
      std::printf("[FAIL] %s: %s\n", tasks[i].label.c_str(), failures[i].c_str());
      all_pass = false;
      continue;
    }
    bool pass = true;
    for (const CheckLine& c : results[i]) {
      std::puts(format_check(c).c_str());
      pass = pass && c.pass;
    }
    std::printf("%s: %s\n", tasks[i].label.c_str(), pass ? "PASS" : "FAIL");
    all_pass = all_pass && pass;
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification suite for weighted decay estimates "
               "of radial parabolic and damped wave equations"};
  app.require_subcommand(1);
  int exit_code = 0;

  // specfun eval
  CLI::App* specfun_cmd = app.add_subcommand("specfun");
  CLI::App* eval_cmd = specfun_cmd->add_subcommand("eval");
  double opt_b = 0.5, opt_c = 1.5, opt_s = 1.0;
  int opt_deriv = 0;
  eval_cmd->add_option("--b", opt_b, "first parameter")->required();
  eval_cmd->add_option("--c", opt_c, "second parameter")->required();
  eval_cmd->add_option("--s", opt_s, "argument, s >= 0")->required();
  eval_cmd->add_option("--deriv-order", opt_deriv, "derivative order, 0..4");
  eval_cmd->callback([&]() {
    double v = opt_deriv == 0
                   ? specfun::kummer_m({opt_b, opt_c}, opt_s)
                   : specfun::kummer_m_derivative({opt_b, opt_c}, opt_s, opt_deriv);
    std::printf("%.17g\n", v);
  });

  // rates fit
  CLI::App* rates_cmd = app.add_subcommand("rates");
  CLI::App* fit_cmd = rates_cmd->add_subcommand("fit");
  std::string fit_input;
  double fit_tmin = 0.0, fit_tmax = 1e300;
  bool fit_log = false;
  fit_cmd->add_option("--input", fit_input, "CSV with columns t,value")->required();
  fit_cmd->add_option("--tmin", fit_tmin, "fit window start");
  fit_cmd->add_option("--tmax", fit_tmax, "fit window end");
  fit_cmd->add_flag("--log-corrected", fit_log,
                    "divide values by sqrt(log(2+t)) before fitting");
  fit_cmd->callback([&]() {
    std::ifstream in(fit_input);
    if (!in) throw CLI::ValidationError("--input", "cannot open " + fit_input);
    RateSeries series;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      double t, v;
      if (std::sscanf(line.c_str(), "%lg,%lg", &t, &v) == 2) {
        series.t.push_back(t);
        series.value.push_back(v);
      }
    }
    RateFit fit = fit_rate(series, fit_tmin, fit_tmax, fit_log);
    std::printf("slope=%.10g intercept=%.10g rsq=%.10g\n", fit.slope,
                fit.intercept, fit.rsq);
  });

  // suite
  CLI::App* suite_cmd = app.add_subcommand("suite", "run the acceptance criteria");
  int jobs = 1;
  unsigned long seed = 42;
  suite_cmd->add_option("--jobs", jobs, "concurrent criteria, default 1");
  suite_cmd->add_option("--seed", seed, "seed for randomized sweeps, default 42");
  suite_cmd->callback([&]() { exit_code = run_suite(jobs, seed); });

  // scenario runners
  add_scenario_command(app, "potential", "build", Scenario::PotentialCheck,
                       {"alpha", "a0", "dim", "kind", "r0", "rmax", "dr", "eps"},
                       exit_code);
  add_scenario_command(app, "supersol", "check", Scenario::SupersolCert,
                       {"alpha", "dim", "sigma", "eps", "delta", "t0", "r0",
                        "rmax", "dr"},
                       exit_code);
  add_scenario_command(app, "heat", "run", Scenario::HeatDecay,
                       {"alpha", "dim", "sigma", "data_sigma", "rmax", "dr",
                        "dt", "dt_ramp", "horizon", "tmin", "tmax"},
                       exit_code);
  add_scenario_command(app, "wave", "run", Scenario::WaveEnergy,
                       {"alpha", "dim", "sigma", "lambda", "delta", "eps",
                        "t0", "dr", "dt", "horizon"},
                       exit_code);
  add_scenario_command(app, "compare", "run", Scenario::DiffusionCompare,
                       {"alpha", "dim", "sigma", "data_sigma", "u1_amp",
                        "rmax", "dr", "dt", "horizon", "tmin", "tmax"},
                       exit_code);

  // kummer-suite scenario, grouped under specfun
  {
    CLI::App* kcmd = specfun_cmd->add_subcommand("suite");
    auto cli = std::make_shared<ScenarioCli>();
    kcmd->add_option("--config", cli->config, "key=value config file");
    kcmd->add_option("--out", cli->out, "CSV output path");
    kcmd->callback([&exit_code, cli]() {
      ExperimentSpec spec = assemble_spec(Scenario::KummerSuite, cli->config,
                                          cli->flags, cli->out);
      exit_code = print_report(run_experiment(spec));
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return exit_code;
}
