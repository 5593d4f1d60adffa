#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "brw/brw.hpp"

namespace brw::cli {

namespace {

unsigned threads_from_env() {
  const char* raw = std::getenv("BRW_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  unsigned long v = std::strtoul(raw, &end, 10);
  if (*end != '\0') throw InvalidArgument("BRW_THREADS must be a non-negative integer");
  return static_cast<unsigned>(v);
}

std::pair<std::string, std::string> split_pair(const std::string& s) {
  auto pos = s.find(':');
  if (pos == std::string::npos) throw InvalidArgument("expected A:B, got '" + s + "'");
  return {s.substr(0, pos), s.substr(pos + 1)};
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

long long to_integer(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw InvalidArgument("not an integer: '" + s + "'");
  return v;
}

Configuration parse_initial(const std::vector<std::string>& items) {
  Configuration c;
  for (const std::string& item : items) {
    auto [site, count] = split_pair(item);
    long long k = to_integer(count);
    if (k < 0) throw InvalidArgument("initial counts must be >= 0");
    c.add(to_integer(site), k);
  }
  return c;
}

struct Common {
  std::optional<std::string> format;
  std::string out_path;
  std::uint64_t seed = 0;
  double tol = kDefaultTolerance;
};

struct SimOptions {
  double lambda = 0.0;
  int n = 0;  // 0 = unrestricted
  double t_max = 100.0;
  std::uint64_t pop_cap = 1'000'000;
  std::vector<std::string> initial{"0:1"};

  SimParams params(std::uint64_t seed) const {
    SimParams p;
    p.lambda = BirthRate(lambda);
    if (n != 0) p.n = IntervalRadius(n);
    p.initial = parse_initial(initial);
    p.t_max = t_max;
    p.pop_cap = pop_cap;
    p.seed = seed;
    p.validate();
    return p;
  }
};

void add_sim_options(CLI::App* cmd, SimOptions& o) {
  cmd->add_option("--lambda", o.lambda, "Birth rate per neighbour")->required()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--n", o.n, "Interval radius N (omit or 0 for the walk on Z)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--t-max", o.t_max, "Time horizon")->capture_default_str();
  cmd->add_option("--pop-cap", o.pop_cap, "Event budget per trial")->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--initial", o.initial, "Initial individuals as SITE:COUNT[,SITE:COUNT...]")
      ->delimiter(',')->capture_default_str();
}

std::string format_or(const Common& c, const std::string& fallback) {
  std::string f = c.format.value_or(fallback);
  if (f != "csv" && f != "json") throw InvalidArgument("--format must be csv or json");
  return f;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Branching random walk on {-N..N}: critical values, mean dynamics, simulation"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--format", common.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", common.out_path, "Write the payload to PATH instead of stdout");
  app.add_option("--seed", common.seed, "Master seed for Monte Carlo subcommands");
  app.add_option("--tol", common.tol, "Bisection tolerance")->check(CLI::PositiveNumber);

  // Each handler returns the payload; simulate streams and returns nothing.
  std::function<std::string(std::ostream&)> action;

  int crit_n = 1;
  auto* crit = app.add_subcommand("critical-lambda", "lambda_c(N) by Sturm bisection, cross-checked");
  crit->add_option("--n", crit_n, "Interval radius N")->required()->check(CLI::PositiveNumber);
  crit->callback([&] {
    action = [&](std::ostream&) {
      CriticalPoint cp = critical_lambda(IntervalRadius(crit_n), common.tol);
      if (format_or(common, "json") == "json") return to_json(cp);
      return "n,lambda_c,method,residual,bracket_width\n" + std::to_string(cp.n.value()) + "," +
             format_number(cp.lambda_c) + "," + std::string(to_string(cp.method)) + "," +
             format_number(cp.residual) + "," + format_number(cp.bracket_width) + "\n";
    };
  });

  double ncrit_lambda = 0.0;
  auto* ncrit = app.add_subcommand("critical-n", "Least N on which lambda is supercritical");
  ncrit->add_option("--lambda", ncrit_lambda, "Birth rate (> 1/2)")->required();
  ncrit->callback([&] {
    action = [&](std::ostream&) {
      int nc = critical_n(BirthRate(ncrit_lambda), common.tol);
      if (common.format.value_or("csv") == "json") {
        return "{\n  \"schema\": \"" + std::string(kSchema) + "\",\n  \"lambda\": " +
               format_number(ncrit_lambda) + ",\n  \"n_c\": " + std::to_string(nc) + "\n}\n";
      }
      return std::to_string(nc) + "\n";
    };
  });

  int phase_n_max = 1;
  auto* phase = app.add_subcommand("phase", "Table of lambda_c(n) and n^2 (2 lambda_c - 1)");
  phase->add_option("--n-max", phase_n_max, "Largest radius")->required()
      ->check(CLI::PositiveNumber);
  phase->callback([&] {
    action = [&](std::ostream&) {
      auto rows = phase_table(phase_n_max, common.tol, threads_from_env());
      return format_or(common, "csv") == "csv" ? phase_csv(rows) : to_json(rows);
    };
  });

  int mean_n = 1;
  double mean_lambda = 0.0;
  double mean_t = 0.0;
  int mean_j = 0;
  std::vector<double> mean_times;
  auto* mean = app.add_subcommand("mean", "Mean matrix exp(A_N t) or expected-total curve");
  mean->add_option("--n", mean_n, "Interval radius N")->required()->check(CLI::PositiveNumber);
  mean->add_option("--lambda", mean_lambda, "Birth rate")->required()
      ->check(CLI::NonNegativeNumber);
  mean->add_option("--t", mean_t, "Time for the mean matrix")->check(CLI::NonNegativeNumber);
  mean->add_option("--j", mean_j, "Initial type for the curve")->check(CLI::NonNegativeNumber);
  mean->add_option("--times", mean_times, "Emit the curve at these increasing times")
      ->delimiter(',');
  mean->callback([&] {
    action = [&](std::ostream&) -> std::string {
      IntervalRadius n(mean_n);
      BirthRate lambda(mean_lambda);
      if (!mean_times.empty()) {
        MeanCurve curve = mean_curve(n, lambda, mean_times, mean_j);
        if (format_or(common, "csv") == "csv") return mean_curve_csv(curve);
        std::string s = "{\n  \"schema\": \"" + std::string(kSchema) + "\",\n  \"t\": [";
        for (std::size_t i = 0; i < curve.times.size(); ++i) {
          s += (i ? ", " : "") + format_number(curve.times[i]);
        }
        s += "],\n  \"expected_total\": [";
        for (std::size_t i = 0; i < curve.times.size(); ++i) {
          s += (i ? ", " : "") + format_number(curve.expected_total[i]);
        }
        return s + "]\n}\n";
      }
      MeanMatrix m = mean_matrix(n, lambda, mean_t);
      if (format_or(common, "json") == "json") return to_json(m);
      std::string s = "j,k,mean\n";
      for (int j = 0; j < m.size(); ++j) {
        for (int k = 0; k < m.size(); ++k) {
          s += std::to_string(j) + "," + std::to_string(k) + "," + format_number(m(j, k)) + "\n";
        }
      }
      return s;
    };
  });

  SimOptions sim;
  double sim_grid = 0.0;
  bool sim_genealogy = false;
  auto* simulate = app.add_subcommand("simulate", "One trajectory as (time,site,count) CSV");
  add_sim_options(simulate, sim);
  simulate->add_option("--grid", sim_grid, "Sample every DT instead of at each event")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--genealogy", sim_genealogy,
                     "Emit the full birth tree of the walk on Z as JSON");
  simulate->callback([&] {
    action = [&](std::ostream& sink) -> std::string {
      SimParams p = sim.params(common.seed);
      Engine rng = trial_engine(p.seed, 0);
      if (sim_genealogy) {
        Genealogy g = build_genealogy(p, rng);
        if (g.truncated) {
          err << "genealogy truncated by --pop-cap at t = " << format_number(g.complete_until)
              << "\n";
        }
        return to_json(g);
      }
      TrajectoryCsvWriter writer(sink);
      TrialOutcome outcome;
      if (sim_grid > 0.0) {
        if (!std::isfinite(p.t_max)) throw InvalidArgument("--grid needs a finite --t-max");
        std::vector<double> grid;
        for (long long i = 0; static_cast<double>(i) * sim_grid <= p.t_max; ++i) {
          grid.push_back(static_cast<double>(i) * sim_grid);
        }
        auto [o, samples] = sample_trajectory(p, grid, rng);
        outcome = o;
        for (std::size_t i = 0; i < grid.size(); ++i) writer.write(grid[i], samples[i]);
      } else {
        writer.write(0.0, p.initial);
        outcome = run_trajectory(p, rng, [&](double t, Site s, Count c) { writer.write(t, s, c); })
                      .outcome;
      }
      const char* verdict = outcome.verdict == Verdict::Extinct          ? "extinct"
                            : outcome.verdict == Verdict::AliveAtHorizon ? "alive-at-horizon"
                                                                          : "cap-reached";
      err << "verdict=" << verdict << " end_time=" << format_number(outcome.end_time)
          << " final_total=" << outcome.final_total << " events=" << outcome.events_used << "\n";
      return {};
    };
  });

  SimOptions surv;
  std::uint64_t surv_trials = 10'000;
  auto* survival = app.add_subcommand("survival", "Finite-horizon survival probability estimate");
  add_sim_options(survival, surv);
  survival->add_option("--trials", surv_trials, "Number of independent trials")
      ->capture_default_str()->check(CLI::PositiveNumber);
  survival->callback([&] {
    action = [&](std::ostream&) {
      SurvivalEstimate s = estimate_survival(surv.params(common.seed), surv_trials,
                                             threads_from_env());
      return to_json(s);
    };
  });

  std::vector<std::string> couple_pairs{"0.55:0.65"};
  std::vector<std::string> couple_npairs{"2:4"};
  CouplingConfig couple;
  std::vector<std::string> couple_initial{"0:1"};
  auto* cc = app.add_subcommand("couple-check", "Pathwise domination of the lambda and N couplings");
  cc->add_option("--pairs", couple_pairs, "LAMBDA1:LAMBDA2 pairs")->delimiter(',')
      ->capture_default_str();
  cc->add_option("--n-pairs", couple_npairs, "N1:N2 pairs")->delimiter(',')->capture_default_str();
  cc->add_option("--genealogies", couple.genealogies, "Genealogies per lambda pair")
      ->capture_default_str()->check(CLI::PositiveNumber);
  cc->add_option("--t-max", couple.t_max, "Genealogy horizon")->capture_default_str()
      ->check(CLI::PositiveNumber);
  cc->add_option("--pop-cap", couple.pop_cap, "Individuals per genealogy")
      ->capture_default_str()->check(CLI::PositiveNumber);
  cc->add_option("--initial", couple_initial, "Initial individuals as SITE:COUNT")
      ->delimiter(',')->capture_default_str();
  cc->callback([&] {
    action = [&](std::ostream&) {
      couple.lambda_pairs.clear();
      for (const auto& s : couple_pairs) {
        auto [a, b] = split_pair(s);
        couple.lambda_pairs.emplace_back(to_double(a), to_double(b));
      }
      couple.n_pairs.clear();
      for (const auto& s : couple_npairs) {
        auto [a, b] = split_pair(s);
        couple.n_pairs.emplace_back(static_cast<int>(to_integer(a)),
                                    static_cast<int>(to_integer(b)));
      }
      couple.initial = parse_initial(couple_initial);
      couple.seed = common.seed;
      couple.threads = threads_from_env();
      CouplingReport r = coupling_check(couple);
      return to_json(r, couple);
    };
  });

  std::vector<int> asym_radii{1000, 2000, 5000, 10000};
  auto* asym = app.add_subcommand("asymptotics", "Scaled gap n^2 (2 lambda_c - 1) and its limit");
  asym->add_option("--n-list", asym_radii, "Increasing radii")->delimiter(',')
      ->capture_default_str();
  asym->callback([&] {
    action = [&](std::ostream&) {
      AsymptoticReport r = asymptotic_report(asym_radii, common.tol, threads_from_env());
      err << "extrapolated limit " << format_number(r.extrapolated_limit) << " supports "
          << r.supported << "\n";
      return format_or(common, "json") == "json" ? to_json(r) : asymptotic_csv(r);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidArguments;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidArguments;
  }

  try {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!common.out_path.empty()) {
      file.open(common.out_path, std::ios::binary);
      if (!file) throw InvalidArgument("cannot open --out " + common.out_path);
      sink = &file;
    }
    *sink << action(*sink);
    sink->flush();
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidArguments;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  return kExitOk;
}

}  // namespace brw::cli
