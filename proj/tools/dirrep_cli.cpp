// dirrep: r-out-of-n directional replicability testing at the command line.
//
// Subcommands: test, adaptive, type1-curve, gg-curve, simulate.
// Exit codes: 0 success, 1 runtime/IO error, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dirrep/commands.hpp"

namespace {

struct CommonOut {
  std::string format = "csv";
  std::string output;  // empty = stdout
};

void add_output_flags(CLI::App* cmd, CommonOut& c) {
  cmd->add_option("--format", c.format, "Output format (csv|json)")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output", c.output, "Write the report to PATH instead of stdout");
}

// Emits through a buffer so a failed run never leaves a half-written file.
void emit(const CommonOut& c, const std::string& body) {
  if (c.output.empty()) {
    std::cout << body;
    if (!std::cout) throw dirrep::io_error("failed to write to stdout");
    return;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file) throw dirrep::io_error("cannot open output file '" + c.output + "'");
  file << body;
  if (!file) throw dirrep::io_error("failed to write output file '" + c.output + "'");
}

dirrep::FeatureTable load_table(const std::string& path, bool pvalues) {
  if (path == "-") return dirrep::read_feature_table(std::cin, pvalues);
  std::ifstream file(path);
  if (!file) throw dirrep::io_error("cannot open input file '" + path + "'");
  return dirrep::read_feature_table(file, pvalues);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"r-out-of-n directional replicability tests and error analysis"};
  app.require_subcommand(1);

  // test
  std::string test_input;
  bool test_pvalues = false;
  int test_r = 0;
  double test_alpha = 0.0;
  std::string test_combiner = "bonferroni";
  std::string test_rule = "auto";
  CommonOut test_out;
  auto* test = app.add_subcommand("test", "Directional replicability test per feature");
  test->add_option("input", test_input, "Input CSV (feature_id,z1,...,zn); '-' for stdin")
      ->required();
  test->add_flag("--pvalues", test_pvalues,
                 "Input columns are right-sided p-values instead of z-scores");
  test->add_option("--r", test_r, "Replicability requirement r")->required();
  test->add_option("--alpha", test_alpha, "Significance level, in (0, 0.5)")->required();
  test->add_option("--combiner", test_combiner, "Combining function")
      ->check(CLI::IsMember({"bonferroni", "sidak", "simes", "fisher"}));
  test->add_option("--rule", test_rule, "Rejection rule")
      ->check(CLI::IsMember({"auto", "min", "double"}));
  add_output_flags(test, test_out);

  // adaptive
  std::string adapt_input;
  bool adapt_pvalues = false;
  double adapt_alpha = 0.0;
  std::string adapt_combiner = "bonferroni";
  CommonOut adapt_out;
  auto* adaptive = app.add_subcommand("adaptive", "Data-adaptive choice of r per feature");
  adaptive->add_option("input", adapt_input, "Input CSV (feature_id,z1,...,zn); '-' for stdin")
      ->required();
  adaptive->add_flag("--pvalues", adapt_pvalues,
                     "Input columns are right-sided p-values instead of z-scores");
  adaptive->add_option("--alpha", adapt_alpha, "Significance level, in (0, 0.5)")->required();
  adaptive->add_option("--combiner", adapt_combiner, "Combining function")
      ->check(CLI::IsMember({"bonferroni", "sidak", "simes", "fisher"}));
  add_output_flags(adaptive, adapt_out);

  // type1-curve
  int curve_n = 0;
  double curve_alpha = 0.0;
  CommonOut curve_out;
  auto* curve = app.add_subcommand("type1-curve",
                                   "Closed-form Type I error of the min rule for small r");
  curve->add_option("--n", curve_n, "Number of studies (>= 4)")->required();
  curve->add_option("--alpha", curve_alpha, "Significance level, in (0, 0.5)")->required();
  add_output_flags(curve, curve_out);

  // gg-curve
  double gg_alpha = 0.0;
  double gg_max = 3.0;
  double gg_step = 0.3333333;
  CommonOut gg_out;
  auto* gg = app.add_subcommand("gg-curve", "Fixed-point scan g(g(theta1)) for n=3, r=2");
  gg->add_option("--alpha", gg_alpha, "Significance level, in (0, 0.5)")->required();
  gg->add_option("--grid-max", gg_max, "Largest theta1 on the grid");
  gg->add_option("--grid-step", gg_step, "Grid spacing");
  add_output_flags(gg, gg_out);

  // simulate
  std::string sim_theta;
  int sim_n = 0;
  int sim_r = 0;
  double sim_alpha = 0.0;
  std::string sim_combiner = "bonferroni";
  std::string sim_rule = "auto";
  std::string sim_mode = "type1";
  long long sim_reps = 0;
  std::uint64_t sim_seed = 1;
  CommonOut sim_out;
  auto* sim = app.add_subcommand("simulate", "Seeded Monte Carlo error estimate at a theta point");
  sim->add_option("--theta", sim_theta,
                  "Theta spec: comma-separated values, 'v*k' repeats, inf/-inf allowed")
      ->required();
  sim->add_option("--n", sim_n, "Number of studies (default: theta length)");
  sim->add_option("--r", sim_r, "Replicability requirement r")->required();
  sim->add_option("--alpha", sim_alpha, "Significance level, in (0, 0.5)")->required();
  sim->add_option("--combiner", sim_combiner, "Combining function (bonferroni|sidak)")
      ->check(CLI::IsMember({"bonferroni", "sidak", "simes", "fisher"}));
  sim->add_option("--rule", sim_rule, "min (or auto) simulates the min rule; double halves alpha")
      ->check(CLI::IsMember({"auto", "min", "double"}));
  sim->add_option("--mode", sim_mode, "type1 or type3")
      ->check(CLI::IsMember({"type1", "type3"}));
  sim->add_option("--reps", sim_reps, "Monte Carlo replicates")->required();
  sim->add_option("--seed", sim_seed, "RNG seed");
  add_output_flags(sim, sim_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    std::ostringstream body;
    if (*test) {
      const auto table = load_table(test_input, test_pvalues);
      dirrep::ReplicabilityQuery q{table.n, test_r, test_alpha,
                                   dirrep::combiner_from_string(test_combiner),
                                   dirrep::rule_from_string(test_rule)};
      dirrep::cmd_test(table, q, dirrep::format_from_string(test_out.format), body);
      emit(test_out, body.str());
    } else if (*adaptive) {
      const auto table = load_table(adapt_input, adapt_pvalues);
      dirrep::cmd_adaptive(table, adapt_alpha, dirrep::combiner_from_string(adapt_combiner),
                           dirrep::format_from_string(adapt_out.format), body);
      emit(adapt_out, body.str());
    } else if (*curve) {
      dirrep::cmd_type1_curve(curve_n, curve_alpha, dirrep::format_from_string(curve_out.format),
                              body);
      emit(curve_out, body.str());
    } else if (*gg) {
      dirrep::cmd_gg_curve(gg_alpha, gg_max, gg_step, dirrep::format_from_string(gg_out.format),
                           body);
      emit(gg_out, body.str());
    } else if (*sim) {
      const auto theta = dirrep::parse_theta_spec(sim_theta);
      if (sim->count("--n") && sim_n != static_cast<int>(theta.size()))
        throw std::invalid_argument("--n disagrees with the theta spec length");
      dirrep::ReplicabilityQuery q{static_cast<int>(theta.size()), sim_r, sim_alpha,
                                   dirrep::combiner_from_string(sim_combiner),
                                   dirrep::rule_from_string(sim_rule)};
      dirrep::cmd_simulate(dirrep::ThetaPoint(theta), q, sim_reps, sim_seed,
                           dirrep::simulate_mode_from_string(sim_mode),
                           dirrep::format_from_string(sim_out.format), body);
      emit(sim_out, body.str());
    }
  } catch (const dirrep::io_error& e) {
    std::cerr << "dirrep: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "dirrep: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "dirrep: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dirrep: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
