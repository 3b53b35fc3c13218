#include "rmtq/cli.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rmtq/experiments.hpp"
#include "rmtq/linalg.hpp"

namespace rmtq {

namespace {

double parse_number(const std::string& token) {
  double value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("cannot parse '" + token + "' as a number");
  return value;
}

// "8d,20d" are multiples of d = d1 d2; plain numbers are taken as is.
std::vector<double> parse_s_grid(const std::string& text, int d) {
  std::vector<double> grid;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string token = text.substr(start, comma - start);
    start = comma + 1;
    if (token.empty()) continue;
    if (token.back() == 'd') {
      token.pop_back();
      grid.push_back(parse_number(token) * d);
    } else {
      grid.push_back(parse_number(token));
    }
  }
  if (grid.empty()) throw ConfigError("--s-grid is empty");
  return grid;
}

void add_common(CLI::App* cmd, ExperimentConfig& c, std::string& format) {
  cmd->add_option("--trials", c.trials, "Monte Carlo trials");
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", c.out, "Write the report here instead of stdout");
  cmd->add_option("--max-entries", c.max_entries, "Cap on d*s matrix entries");
  cmd->add_option("--threads", c.threads, "Worker threads (0: RMTQ_THREADS or all cores)");
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wishart moments, induced states and absolute PPT thresholds", "rmtq"};
  app.require_subcommand(1);

  ExperimentConfig c;
  std::string format = "json";
  std::string s_grid;

  auto* moments = app.add_subcommand("moments", "Exact centered Wishart moments against Monte Carlo");
  add_common(moments, c, format);
  moments->add_option("--d", c.d)->required();
  moments->add_option("--s", c.s)->required();
  moments->add_option("--p", c.p_list, "Moment orders, comma separated")->delimiter(',')->required();

  auto* extremal = app.add_subcommand("extremal", "Extreme eigenvalues of the centered Wishart matrix");
  add_common(extremal, c, format);
  extremal->add_option("--d", c.d)->required();
  extremal->add_option("--s", c.s)->required();
  extremal->add_option("--eps", c.eps, "Half-width of the windows around -2 and 2");

  auto* scan = app.add_subcommand("appt-scan", "Absolute PPT frequency of induced states over an s-grid");
  add_common(scan, c, format);
  scan->add_option("--d1", c.d1)->required();
  scan->add_option("--d2", c.d2)->required();
  scan->add_option("--s-grid", s_grid, "Environment dimensions, e.g. 8d,20d or 2048,5120")->required();
  scan->add_option("--bisection-steps", c.bisection_steps);

  auto* containment = app.add_subcommand("containment", "Spectrum containment of induced states");
  add_common(containment, c, format);
  containment->add_option("--d", c.d)->required();
  containment->add_option("--s", c.s)->required();
  containment->add_option("--eps", c.eps);

  auto* constants = app.add_subcommand("constants", "C_tau table, fixed-p thresholds and s0");
  constants->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  constants->add_option("--out", c.out);
  constants->add_option("--d1", c.d1);
  constants->add_option("--d2", c.d2);
  constants->add_option("--tau-grid", c.tau_grid)->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  c.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;

  try {
    ExperimentReport report;
    if (*moments) {
      report = run_moments(c);
    } else if (*extremal) {
      report = run_extremal(c);
    } else if (*scan) {
      c.s_grid = parse_s_grid(s_grid, c.d1 * c.d2);
      report = run_appt_scan(c);
    } else if (*containment) {
      report = run_spectrum_containment(c);
    } else {
      if ((c.d1 != 0) != (c.d2 != 0)) throw ConfigError("--d1 and --d2 go together");
      report = run_constants(c);
    }
    const std::string text = c.format == OutputFormat::Csv ? report.to_csv() : report.to_json().dump(2) + "\n";
    if (c.out.empty()) {
      out << text;
    } else {
      std::ofstream file(c.out);
      if (!file) throw ConfigError("cannot open " + c.out + " for writing");
      file << text;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rmtq
