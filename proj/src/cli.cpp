#include "kms/cli.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <set>

#include <CLI11.hpp>

#include "kms/algebra_text.hpp"
#include "kms/error.hpp"
#include "kms/graph_io.hpp"
#include "kms/report_json.hpp"
#include "kms/report_table.hpp"
#include "kms/solver.hpp"
#include "kms/verify.hpp"

namespace kms::cli {

namespace {

double parse_real(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw InputError("invalid " + what + " '" + text + "'");
  return value;
}

struct Common {
  std::string graph_path;
  std::string format = "json";
  std::optional<double> tol;
  bool require_weights_above_one = false;
  double weight_floor = 1e-9;
};

void add_common(CLI::App* cmd, Common& c, bool graph_required = true) {
  auto* g = cmd->add_option("graph", c.graph_path, "graph file (JSON)");
  if (graph_required) g->required();
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  cmd->add_option("--tol", c.tol, "numerical tolerance")->check(CLI::PositiveNumber);
  cmd->add_flag("--require-weights-above-one", c.require_weights_above_one,
                "reject graphs with a weight c(e) <= 1");
  cmd->add_option("--weight-floor", c.weight_floor, "every weight must exceed this constant")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

WeightedGraph load(const Common& c) {
  return load_graph(c.graph_path, GraphOptions{c.weight_floor, c.require_weights_above_one});
}

json with_vertices(json j, const WeightedGraph& g) {
  json names = json::array();
  for (VertexId v : g.vertices()) names.push_back(g.vertex_name(v));
  j["vertices"] = names;
  return j;
}

void emit(std::ostream& out, const Common& c, const json& j, const std::string& text) {
  if (c.format == "json") out << j.dump(2) << '\n';
  else out << text;
}

std::vector<std::string> mentioned(const std::string& text, const std::string& opener) {
  std::vector<std::string> out;
  for (auto pos = text.find(opener); pos != std::string::npos; pos = text.find(opener, pos + 1)) {
    if (pos > 0 && (std::isalnum(static_cast<unsigned char>(text[pos - 1])) || text[pos - 1] == '_'))
      continue;
    const auto close = text.find(']', pos);
    if (close == std::string::npos) break;
    std::string body = text.substr(pos + opener.size(), close - pos - opener.size());
    std::string item;
    for (char ch : body) {
      if (std::isspace(static_cast<unsigned char>(ch))) continue;
      if (ch == '.') {
        out.push_back(item);
        item.clear();
      } else {
        item += ch;
      }
    }
    out.push_back(item);
  }
  return out;
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
  return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string::npos ? first : spec.find(':', first + 1);
  if (second == std::string::npos || spec.find(':', second + 1) != std::string::npos)
    throw InputError("grid must have the form a:b:step, got '" + spec + "'");
  const double a = parse_real(spec.substr(0, first), "grid start");
  const double b = parse_real(spec.substr(first + 1, second - first - 1), "grid end");
  const double step = parse_real(spec.substr(second + 1), "grid step");
  if (!(a > 0.0)) throw InputError("grid values must be positive (beta > 0)");
  if (!(b >= a)) throw InputError("grid end must not precede its start");
  if (!(step > 0.0)) throw InputError("grid step must be positive");
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 100000) throw InputError("grid has more than 100000 points");
  std::vector<double> grid;
  for (std::size_t i = 0; i < count; ++i) {
    // Snap to 12 decimals so 0.1 + 2 * 0.1 prints as 0.3.
    grid.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return grid;
}

WeightedGraph graph_for_expressions(const std::vector<std::string>& expressions) {
  std::set<std::string> vertex_names;
  std::set<std::string> edge_ids;
  for (const auto& raw : expressions) {
    const std::string text = strip_spaces(raw);
    for (auto& v : mentioned(text, "p[")) vertex_names.insert(v);
    for (auto& e : mentioned(text, "s[")) edge_ids.insert(e);
    for (auto& e : mentioned(text, "s*[")) edge_ids.insert(e);
  }
  if (vertex_names.size() > 1)
    throw InputError("without --graph all p[..] terms must name the same single vertex");
  const std::string v = vertex_names.empty() ? "v" : *vertex_names.begin();
  GraphBuilder b;
  b.add_vertex(v);
  for (const auto& e : edge_ids) {
    if (e.empty()) throw InputError("empty edge id in monomial expression");
    b.add_edge(e, v, v, 2.0);
  }
  return b.build();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"KMS and ground states of weighted graph algebras", "kmsgraph"};
  app.require_subcommand(1);

  Common solve_c, crit_c, scan_c, ground_c, verify_c, mul_c;
  double beta = 1.0;
  std::size_t cap = 15;
  bool expect_feasible = false;
  std::string grid_spec;
  std::uint64_t seed = 7;
  std::size_t trials = 500;
  std::size_t max_length = 2;
  std::size_t level = 2;
  std::vector<double> tau_values;
  std::string lhs, rhs;

  auto* solve_cmd = app.add_subcommand("solve", "KMS traces at one beta");
  add_common(solve_cmd, solve_c);
  solve_cmd->add_option("--beta", beta, "inverse temperature")->required()->check(CLI::PositiveNumber);
  solve_cmd->add_option("--cap", cap, "max vertices for extreme-point enumeration")
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}))
      ->capture_default_str();
  solve_cmd->add_flag("--expect-feasible", expect_feasible, "exit 2 when no KMS trace exists");

  auto* crit_cmd = app.add_subcommand("critical-beta", "least beta with unit spectral radius");
  add_common(crit_cmd, crit_c);

  auto* scan_cmd = app.add_subcommand("scan", "solve along a beta grid");
  add_common(scan_cmd, scan_c);
  scan_cmd->add_option("--grid", grid_spec, "a:b:step")->required();
  scan_cmd->add_option("--cap", cap, "max vertices for extreme-point enumeration")
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}))
      ->capture_default_str();
  scan_cmd->add_flag("--expect-feasible", expect_feasible, "exit 2 when some grid point is infeasible");

  auto* ground_cmd = app.add_subcommand("ground", "ground-state simplex");
  add_common(ground_cmd, ground_c);

  auto* verify_cmd = app.add_subcommand("verify", "numerical KMS certificates");
  add_common(verify_cmd, verify_c);
  verify_cmd->add_option("--beta", beta, "inverse temperature")->required()->check(CLI::PositiveNumber);
  verify_cmd->add_option("--tau", tau_values, "vertex trace in vertex order (default: solve witness)")
      ->delimiter(',');
  verify_cmd->add_option("--seed", seed, "sampler seed")->capture_default_str();
  verify_cmd->add_option("--trials", trials, "sampled pairs and positivity trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify_cmd->add_option("--max-length", max_length, "max path length for sampled monomials")
      ->capture_default_str();
  verify_cmd->add_option("--level", level, "max path length for positivity samples")
      ->capture_default_str();
  verify_cmd->add_flag("--expect-feasible", expect_feasible, "exit 2 when no KMS trace exists");

  auto* mul_cmd = app.add_subcommand("mul", "multiply two monomial expressions");
  add_common(mul_cmd, mul_c, false);
  mul_cmd->remove_option(mul_cmd->get_option("graph"));
  mul_cmd->add_option("lhs", lhs, "left factor")->required();
  mul_cmd->add_option("rhs", rhs, "right factor")->required();
  mul_cmd->add_option("--graph", mul_c.graph_path, "graph file (default: one vertex, edges as loops)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*solve_cmd) {
      const auto g = load(solve_c);
      SolveOptions opts;
      opts.enumeration_cap = cap;
      if (solve_c.tol) opts.dedup_tol = *solve_c.tol;
      const auto report = solve(g, beta, opts);
      emit(out, solve_c, with_vertices(report, g), table(g, report));
      if (expect_feasible && !report.feasible) {
        err << "no KMS trace exists at beta " << format_real(beta) << '\n';
        return kExitInfeasible;
      }
    } else if (*crit_cmd) {
      const auto g = load(crit_c);
      CriticalBetaReport report;
      report.tol = crit_c.tol.value_or(1e-9);
      report.beta = critical_beta(g, report.tol);
      emit(out, crit_c, report, table(report));
    } else if (*scan_cmd) {
      const auto g = load(scan_c);
      const auto grid = parse_grid(grid_spec);
      SolveOptions opts;
      opts.enumeration_cap = cap;
      if (scan_c.tol) opts.dedup_tol = *scan_c.tol;
      const auto report = beta_scan(g, grid, opts, true);
      emit(out, scan_c, report, table(report));
      if (expect_feasible)
        for (const auto& p : report.points)
          if (!p.feasible) {
            err << "no KMS trace exists at beta " << format_real(p.beta) << '\n';
            return kExitInfeasible;
          }
    } else if (*ground_cmd) {
      const auto g = load(ground_c);
      const auto report = ground_simplex(g);
      emit(out, ground_c, with_vertices(report, g), table(g, report));
    } else if (*verify_cmd) {
      const auto g = load(verify_c);
      VerifyReport report;
      report.beta = beta;
      if (!tau_values.empty()) {
        if (tau_values.size() != g.vertex_count())
          throw InputError("--tau needs one value per vertex (" + std::to_string(g.vertex_count()) + ")");
        report.tau = Trace(tau_values);
      } else {
        const auto solved = solve(g, beta, SolveOptions{.enumeration_cap = 0});
        if (!solved.feasible) {
          err << "no KMS trace exists at beta " << format_real(beta) << "; pass --tau to verify a given trace\n";
          return expect_feasible ? kExitInfeasible : kExitInputError;
        }
        report.tau = *solved.witness;
      }
      report.coverage = case_coverage(g, report.tau, beta, SamplerConfig{max_length, trials, seed});
      report.positivity = positivity_sample(g, report.tau, beta, level, trials, seed);
      report.k1_violations = k1_violation_detect(g, report.tau, beta);
      emit(out, verify_c, with_vertices(report, g), table(g, report));
    } else if (*mul_cmd) {
      const auto g = mul_c.graph_path.empty()
                         ? graph_for_expressions({lhs, rhs})
                         : load(mul_c);
      MulReport report;
      const auto x = parse_element(g, lhs);
      const auto y = parse_element(g, rhs);
      report.lhs = render(g, x);
      report.rhs = render(g, y);
      report.product = render(g, x * y);
      emit(out, mul_c, report, table(report));
    }
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitOk;
}

}  // namespace kms::cli
