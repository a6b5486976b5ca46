#include "kms/algebra_text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

#include "kms/error.hpp"

namespace kms {

namespace {

constexpr std::string_view kDot = "\xC2\xB7";  // U+00B7 middle dot

std::string shortest(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string render_coefficient(Complex c) {
  if (c.imag() == 0.0) return shortest(c.real());
  std::string s = "(" + shortest(c.real());
  s += std::signbit(c.imag()) ? "-" : "+";
  s += shortest(std::abs(c.imag())) + "i)";
  return s;
}

class Parser {
 public:
  Parser(const WeightedGraph& g, std::string_view text) : g_(g), text_(text) {}

  AlgebraElement parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    AlgebraElement out;
    double sign = 1.0;
    if (peek() == '-') {
      ++pos_;
      sign = -1.0;
    }
    out += term(sign);
    for (;;) {
      skip_ws();
      if (at_end()) break;
      if (peek() == '+') {
        ++pos_;
        out += term(1.0);
      } else if (peek() == '-') {
        ++pos_;
        out += term(-1.0);
      } else {
        fail("expected '+' or '-'");
      }
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("column " + std::to_string(pos_ + 1) + ": " + what);
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

  double number() {
    skip_ws();
    const std::size_t start = pos_;
    if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) ++pos_;
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      ++pos_;
      if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    const auto token = text_.substr(start, pos_ - start);
    double v = 0.0;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || p != token.data() + token.size()) {
      pos_ = start;
      fail("malformed number");
    }
    return v;
  }

  bool at_number() const {
    return !at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.');
  }

  Complex scalar() {
    if (peek() != '(') return number();
    ++pos_;
    const double first = number();
    skip_ws();
    if (at_end()) fail("unterminated scalar");
    Complex value;
    if (peek() == ')') {
      value = first;
    } else if (peek() == 'i') {
      ++pos_;
      value = {0.0, first};
    } else if (peek() == '+' || peek() == '-') {
      const double sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
      const double im = number();
      skip_ws();
      if (at_end() || peek() != 'i') fail("expected 'i' in complex scalar");
      ++pos_;
      value = {first, sign * im};
    } else {
      fail("malformed complex scalar");
    }
    skip_ws();
    if (at_end() || peek() != ')') fail("expected ')'");
    ++pos_;
    return value;
  }

  std::vector<std::string_view> bracket_ids() {
    if (at_end() || peek() != '[') fail("expected '['");
    ++pos_;
    const std::size_t close = text_.find(']', pos_);
    if (close == std::string_view::npos) fail("expected ']'");
    std::vector<std::string_view> ids;
    std::string_view body = text_.substr(pos_, close - pos_);
    std::size_t start = 0;
    for (;;) {
      const auto dot = body.find('.', start);
      auto id = body.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
      while (!id.empty() && std::isspace(static_cast<unsigned char>(id.front()))) id.remove_prefix(1);
      while (!id.empty() && std::isspace(static_cast<unsigned char>(id.back()))) id.remove_suffix(1);
      if (id.empty()) fail("empty identifier");
      ids.push_back(id);
      if (dot == std::string_view::npos) break;
      start = dot + 1;
    }
    pos_ = close + 1;
    return ids;
  }

  Path path_of(const std::vector<std::string_view>& ids) {
    std::vector<EdgeRef> refs;
    for (auto id : ids) {
      try {
        refs.push_back(g_.resolve_edge(id));
      } catch (const InputError& e) {
        fail(e.what());
      }
    }
    try {
      return g_.path(std::move(refs));
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  std::optional<AlgebraElement> factor() {
    skip_ws();
    if (at_end()) return std::nullopt;
    if (starts_with("s*")) {
      pos_ += 2;
      skip_ws();
      return AlgebraElement(Monomial::adjoint_isometry(path_of(bracket_ids())));
    }
    if (starts_with("s")) {
      ++pos_;
      skip_ws();
      return AlgebraElement(Monomial::isometry(path_of(bracket_ids())));
    }
    if (starts_with("p")) {
      ++pos_;
      skip_ws();
      auto ids = bracket_ids();
      if (ids.size() != 1) fail("p[...] takes a single vertex id");
      auto v = g_.find_vertex(ids.front());
      if (!v) fail("unknown vertex '" + std::string(ids.front()) + "'");
      return AlgebraElement(Monomial::projection(*v));
    }
    return std::nullopt;
  }

  AlgebraElement term(double sign) {
    skip_ws();
    if (at_end()) fail("expected a term");
    Complex coeff = sign;
    bool has_scalar = false;
    if (at_number() || peek() == '(') {
      coeff *= scalar();
      has_scalar = true;
      skip_ws();
      if (starts_with(kDot)) {
        pos_ += kDot.size();
      } else if (!at_end() && peek() == '*') {
        ++pos_;
      }
    }
    std::optional<AlgebraElement> product;
    while (auto f = factor()) product = product ? elem_mul(*product, *f) : std::move(*f);
    if (!product) {
      if (has_scalar && coeff == Complex{}) return {};
      fail(has_scalar ? "a nonzero scalar needs a monomial (no unit is assumed)"
                      : "expected s[..], s*[..] or p[..]");
    }
    return coeff * std::move(*product);
  }

  const WeightedGraph& g_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string render(const WeightedGraph& g, const Monomial& m) {
  if (m.mu().is_vertex() && m.nu().is_vertex()) return "p[" + g.vertex_name(m.source()) + "]";
  std::string s;
  if (!m.mu().is_vertex()) s += "s[" + render_path(g, m.mu()) + "]";
  if (!m.nu().is_vertex()) {
    if (!s.empty()) s += ' ';
    s += "s*[" + render_path(g, m.nu()) + "]";
  }
  return s;
}

std::string render(const WeightedGraph& g, const AlgebraElement& x) {
  if (x.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : x.terms()) {
    Complex coeff = c;
    if (coeff.imag() == 0.0 && std::signbit(coeff.real())) {
      out += first ? "-" : " - ";
      coeff = -coeff;
    } else if (!first) {
      out += " + ";
    }
    if (coeff != Complex{1.0, 0.0}) {
      out += render_coefficient(coeff);
      out += " ";
      out += kDot;
      out += " ";
    }
    out += render(g, m);
    first = false;
  }
  return out;
}

AlgebraElement parse_element(const WeightedGraph& g, std::string_view text) {
  return Parser(g, text).parse();
}

}  // namespace kms
