#include "kms/report_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace kms {

std::string TextTable::str() const {
  std::vector<std::size_t> width(header_.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  };
  widen(header_);
  for (const auto& r : rows_) widen(r);

  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& row) {
    std::string text;
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string cell = i < row.size() ? row[i] : "";
      text += cell;
      if (i + 1 < width.size()) text += std::string(width[i] - cell.size() + 2, ' ');
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out << text << '\n';
  };
  line(header_);
  std::vector<std::string> rule;
  for (auto w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& r : rows_) line(r);
  return out.str();
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

namespace {

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void trace_rows(const WeightedGraph& g, TextTable& t, const std::string& label, const Trace& tau) {
  for (VertexId v : g.vertices()) t.add_row({label, g.vertex_name(v), format_real(tau[v])});
}

}  // namespace

std::string table(const WeightedGraph& g, const SolveReport& r) {
  std::ostringstream out;
  out << "beta " << format_real(r.beta) << ": " << (r.feasible ? "feasible" : "infeasible");
  if (r.feasible) {
    if (r.dimension >= 0) out << ", dimension " << r.dimension << (r.unique() ? " (unique)" : "");
    else out << ", dimension not enumerated";
  }
  out << '\n';
  if (r.enumeration_error) out << "note: " << *r.enumeration_error << '\n';
  if (r.witness) {
    TextTable t({"trace", "vertex", "tau"});
    trace_rows(g, t, "witness", *r.witness);
    for (std::size_t i = 0; i < r.extreme_points.size(); ++i)
      trace_rows(g, t, "extreme " + std::to_string(i), r.extreme_points[i]);
    out << t.str();
  }
  return out.str();
}

std::string table(const ScanReport& r) {
  TextTable t({"beta", "feasible", "dimension", "extreme points"});
  for (const auto& p : r.points)
    t.add_row({format_real(p.beta), yes_no(p.feasible), std::to_string(p.dimension),
               std::to_string(p.extreme_count)});
  std::ostringstream out;
  out << t.str() << "monotone: " << yes_no(r.monotone) << '\n'
      << "threshold: " << (r.threshold ? format_real(*r.threshold) : "none") << '\n';
  return out.str();
}

std::string table(const WeightedGraph& g, const GroundReport& r) {
  TextTable t({"singular vertex"});
  for (VertexId v : r.singular_vertices) t.add_row({g.vertex_name(v)});
  std::ostringstream out;
  out << t.str() << "simplex dimension: " << (r.dimension ? std::to_string(*r.dimension) : "empty")
      << '\n';
  return out.str();
}

std::string table(const CriticalBetaReport& r) {
  return "critical beta: " + (r.beta ? format_real(*r.beta) : std::string("none")) +
         " (tol " + format_real(r.tol) + ")\n";
}

std::string table(const WeightedGraph& g, const VerifyReport& r) {
  std::ostringstream out;
  out << "beta " << format_real(r.beta) << ", seed " << r.coverage.seed << ", trials "
      << r.coverage.trials << (r.coverage.k1_warning ? " (warning: trace fails K1)" : "") << '\n';
  TextTable cases({"case", "count", "max residual"});
  for (std::size_t i = 0; i < 9; ++i)
    cases.add_row({CoverageReport::label(i), std::to_string(r.coverage.counts[i]),
                   format_real(r.coverage.max_residual[i])});
  out << cases.str();
  out << "positivity: min " << format_real(r.positivity.min_value) << ", max |imag| "
      << format_real(r.positivity.max_imag) << " over " << r.positivity.trials << " trials\n";
  if (r.k1_violations.empty()) {
    out << "K1 violations: none\n";
  } else {
    TextTable k1({"K1 violation", "residual"});
    for (const auto& v : r.k1_violations) k1.add_row({g.vertex_name(v.vertex), format_real(v.residual)});
    out << k1.str();
  }
  return out.str();
}

std::string table(const MulReport& r) { return r.product + '\n'; }

}  // namespace kms
