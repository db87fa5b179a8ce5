#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

// Experiment orchestration: plain-text key=value configs, scenario runners
// that emit CSV artifacts, and the acceptance checks shared by the `suite`
// subcommand and the acceptance test binary. Criteria 6 and 9 are produced
// by one wave run.

namespace radsup {

enum class Scenario {
  KummerSuite,
  PotentialCheck,
  SupersolCert,
  HeatDecay,
  WaveEnergy,
  DiffusionCompare,
};

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

struct ExperimentSpec {
  std::string name;
  Scenario scenario = Scenario::KummerSuite;
  std::map<std::string, std::string> parameters;
  std::vector<std::string> outputs;  // CSV paths, in emission order
};

// one checked inequality or rate: target, observed value, tolerance, verdict
struct CheckLine {
  std::string id;
  double target = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ExitReport {
  std::string name;
  std::vector<CheckLine> checks;
  std::vector<std::string> csv_written;
  bool passed() const;
};

// key=value lines, '#' starts a comment, unknown keys rejected; every
// problem is reported with its line number, all at once.
ExperimentSpec parse_config(const std::string& path);
ExperimentSpec parse_config_text(const std::string& text,
                                 const std::string& origin);

// canonical text form; parse(serialize(s)) == s and serialize is stable
std::string serialize_config(const ExperimentSpec& spec);

ExitReport run_experiment(const ExperimentSpec& spec);

// CSV cell format: '.' decimal always, scientific when 0 < |x| < 1e-4
std::string csv_number(double x);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_check(const CheckLine& c);

// Acceptance criteria 1..9; 6 and 9 come from the same wave run, so they
// are returned together (first = weighted energy bounds, second = the
// higher-order energies of the velocity).
std::vector<CheckLine> criterion_kummer();                       // 1
std::vector<CheckLine> criterion_potential();                    // 2
std::vector<CheckLine> criterion_certificates();                 // 3
std::vector<CheckLine> criterion_solver_oracle();                // 4
std::vector<CheckLine> criterion_heat_rates();                   // 5
std::pair<std::vector<CheckLine>, std::vector<CheckLine>>
criterion_wave_energy();                                         // 6 and 9
std::vector<CheckLine> criterion_diffusion();                    // 7
std::vector<CheckLine> criterion_hardy(unsigned long seed);      // 8

}  // namespace radsup
