// urt: optimal departure frequencies for an urban rail line.
//
//   urt optimize --scenario s.json [--format csv|json] [--out file]
//   urt compare  --scenario s.json
//   urt simulate --scenario s.json --period 07:00-08:00 [--frequency f]
//                [--reps n] [--seed s] [--trace trace.csv]
//   urt sweep    --scenario s.json --param f --from 6 --to 40 --steps 100
//
// Exit codes: 0 all periods feasible, 2 some period infeasible, 1 usage or
// configuration error.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "urt/commands.hpp"
#include "urt/error.hpp"

namespace {

struct common_opts {
  std::string scenario_path;
  std::string out_path;
  std::string format{"csv"};
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, common_opts& o) {
  cmd->add_option("--scenario", o.scenario_path, "Scenario file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out_path, "Output file (default: stdout)");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--set", o.sets, "Override a parameter, key=value");
}

std::map<std::string, std::string> overrides(common_opts const& o) {
  std::map<std::string, std::string> out;
  for (auto const& s : o.sets) {
    auto const eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw urt::config_error("--set expects key=value, got '" + s + "'");
    }
    out[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return out;
}

template <typename WriteCsv, typename MakeJson>
void emit(common_opts const& o, WriteCsv&& write_csv, MakeJson&& make_json) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!o.out_path.empty()) {
    file.open(o.out_path, std::ios::binary);
    if (!file) {
      throw urt::config_error("cannot write '" + o.out_path + "'");
    }
    out = &file;
  }
  if (o.format == "json") {
    *out << make_json().dump(2) << '\n';
  } else {
    write_csv(*out);
  }
}

urt::period pick_period(urt::scenario const& s, std::string const& text) {
  if (text.empty()) {
    return s.periods.front();
  }
  auto const p = urt::parse_period(text);
  for (auto const& q : s.periods) {
    if (std::abs(q.start - p.start) < 1e-9 && std::abs(q.end - p.end) < 1e-9) {
      return q;
    }
  }
  throw urt::validation_error("period " + text + " is not in the scenario");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stackelberg departure-frequency optimizer for urban rail"};
  app.require_subcommand(1);

  common_opts opt_o, cmp_o, sim_o, sw_o;
  auto* optimize = app.add_subcommand("optimize", "Equilibrium per period");
  add_common(optimize, opt_o);

  auto* compare = app.add_subcommand("compare", "Equilibrium vs baseline");
  add_common(compare, cmp_o);

  auto* simulate = app.add_subcommand("simulate", "Poisson line simulation");
  add_common(simulate, sim_o);
  std::string sim_period;
  std::optional<double> sim_frequency;
  std::size_t reps = 1;
  std::uint64_t seed = 1;
  std::string trace_path;
  simulate->add_option("--period", sim_period, "HH:MM-HH:MM (default: first)");
  simulate->add_option("--frequency", sim_frequency,
                       "Trains/hour (default: equilibrium f*)");
  simulate->add_option("--reps", reps, "Replications")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "Base seed");
  simulate->add_option("--trace", trace_path,
                       "Write the first replication's event trace CSV");

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep table");
  add_common(sweep, sw_o);
  std::string param;
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 0;
  std::string sw_period;
  std::optional<double> sw_frequency;
  std::optional<double> sw_demand;
  sweep->add_option("--param", param, "f, c, alpha, e_c, e_f, B or Q")
      ->required();
  sweep->add_option("--from", from)->required();
  sweep->add_option("--to", to)->required();
  sweep->add_option("--steps", steps)->required();
  sweep->add_option("--period", sw_period, "HH:MM-HH:MM (default: first)");
  sweep->add_option("--frequency", sw_frequency,
                    "Frequency held fixed when sweeping c");
  sweep->add_option("--demand", sw_demand, "Use this Q instead of the period's");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return urt::exit_usage;
  }

  try {
    if (optimize->parsed()) {
      auto const s = urt::load_scenario(opt_o.scenario_path, overrides(opt_o));
      auto const rows = urt::cmd_optimize(s);
      emit(
          opt_o, [&](std::ostream& out) { urt::write_csv(out, rows, s.params); },
          [&] { return urt::to_json(rows, s.params); });
      return urt::exit_code(rows);
    }
    if (compare->parsed()) {
      auto const s = urt::load_scenario(cmp_o.scenario_path, overrides(cmp_o));
      auto const rows = urt::cmd_compare(s);
      emit(
          cmp_o, [&](std::ostream& out) { urt::write_csv(out, rows); },
          [&] { return urt::to_json(rows); });
      return urt::exit_code(rows);
    }
    if (simulate->parsed()) {
      auto const s = urt::load_scenario(sim_o.scenario_path, overrides(sim_o));
      auto const when = pick_period(s, sim_period);
      auto const report = urt::cmd_simulate(s, when, sim_frequency, reps, seed,
                                            !trace_path.empty());
      if (!trace_path.empty()) {
        std::ofstream trace{trace_path, std::ios::binary};
        if (!trace) {
          throw urt::config_error("cannot write '" + trace_path + "'");
        }
        urt::write_trace_csv(trace, report.summary.runs.front().trace);
      }
      emit(
          sim_o, [&](std::ostream& out) { urt::write_csv(out, report); },
          [&] { return urt::to_json(report); });
      return urt::exit_ok;
    }
    if (sweep->parsed()) {
      auto const s = urt::load_scenario(sw_o.scenario_path, overrides(sw_o));
      auto const rows = urt::cmd_sweep(s, param, from, to, steps,
                                       pick_period(s, sw_period), sw_frequency,
                                       sw_demand);
      emit(
          sw_o, [&](std::ostream& out) { urt::write_csv(out, rows, param); },
          [&] { return urt::to_json(rows, param); });
      return urt::exit_ok;
    }
  } catch (urt::infeasible_error const& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (auto const& v : e.violations()) {
      std::cerr << "  " << v << '\n';
    }
    return urt::exit_partial;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return urt::exit_usage;
  }
  return urt::exit_usage;
}
