#include "nsolit/metric.hpp"

#include <Eigen/Eigenvalues>
#include <charconv>
#include <fstream>
#include <sstream>

namespace nsolit::expr {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

// Cursor over one statement; offsets are absolute in the file text.
class Cursor {
 public:
  Cursor(std::string_view text, std::size_t begin, std::size_t end) : s_(text), pos_(begin), end_(end) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(ParseError::Kind::Syntax, pos_, msg);
  }
  void ws() {
    while (pos_ < end_ && is_space(s_[pos_])) ++pos_;
  }
  bool done() {
    ws();
    return pos_ >= end_;
  }
  bool accept(std::string_view tok) {
    ws();
    if (s_.substr(pos_, tok.size()) == tok && pos_ + tok.size() <= end_) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }
  std::string ident() {
    ws();
    const std::size_t start = pos_;
    while (pos_ < end_ && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (pos_ == start || std::isdigit(static_cast<unsigned char>(s_[start]))) {
      pos_ = start;
      fail("expected identifier");
    }
    return std::string(s_.substr(start, pos_ - start));
  }
  long long integer() {
    ws();
    long long v = 0;
    auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + end_, v);
    if (ec != std::errc()) fail("expected integer");
    pos_ = static_cast<std::size_t>(p - s_.data());
    return v;
  }
  double real() {
    ws();
    double v = 0;
    auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + end_, v);
    if (ec != std::errc()) fail("expected number");
    pos_ = static_cast<std::size_t>(p - s_.data());
    return v;
  }
  std::size_t pos() const { return pos_; }
  std::size_t end() const { return end_; }

 private:
  std::string_view s_;
  std::size_t pos_;
  std::size_t end_;
};

std::string signature_at_centre(const MetricSpec& m) {
  Eigen::MatrixXd g(m.n, m.n);
  std::vector<double> x;
  for (const auto& iv : m.box) x.push_back(0.5 * (iv.lo + iv.hi));
  std::vector<Expr> flat;
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) flat.push_back(m.g[i][j]);
  try {
    const auto v = Compiled(flat, m.coords).eval(x);
    for (std::size_t i = 0; i < m.n; ++i)
      for (std::size_t j = 0; j < m.n; ++j) g(long(i), long(j)) = v[i * m.n + j];
  } catch (const DomainError&) {
    return "(?)";
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  std::string s = "(";
  for (long i = 0; i < long(m.n); ++i) {
    if (i) s += ",";
    const double ev = es.eigenvalues()(i);
    s += ev > 0 ? "+" : (ev < 0 ? "-" : "0");
  }
  return s + ")";
}

}  // namespace

MetricSpec make_metric(std::vector<std::string> coords, Matrix g, std::vector<Interval> box) {
  MetricSpec m;
  m.n = coords.size();
  if (m.n < 2) throw InvalidArgument("metric dimension must be at least 2");
  if (g.size() != m.n) throw DimensionMismatch("metric matrix size does not match coordinates");
  for (std::size_t i = 0; i < m.n; ++i) {
    if (g[i].size() != m.n) throw DimensionMismatch("metric matrix is not square");
    for (std::size_t j = 0; j < i; ++j) g[i][j] = g[j][i];
  }
  m.coords = std::move(coords);
  m.g = std::move(g);
  m.box = box.empty() ? std::vector<Interval>(m.n) : std::move(box);
  if (m.box.size() != m.n) throw DimensionMismatch("sample box size does not match coordinates");
  m.signature = signature_at_centre(m);
  return m;
}

MetricSpec parse_metric(std::string_view text) {
  // split into ';'-terminated statements, stripping '#' comments
  std::string clean(text);
  for (std::size_t i = 0; i < clean.size(); ++i)
    if (clean[i] == '#')
      while (i < clean.size() && clean[i] != '\n') clean[i++] = ' ';
  const std::string_view s = clean;

  std::vector<std::pair<std::size_t, std::size_t>> stmts;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == ';') {
      stmts.emplace_back(start, i);
      start = i + 1;
    }
  {
    Cursor tail(s, start, s.size());
    if (!tail.done()) {
      Cursor c(s, s.size(), s.size());
      c.fail("expected ';'");
    }
  }
  if (stmts.size() < 2) {
    Cursor c(s, stmts.empty() ? s.size() : stmts.back().second, s.size());
    c.fail("expected header 'dim n; coords ...;'");
  }

  Cursor h1(s, stmts[0].first, stmts[0].second);
  h1.expect("dim");
  const std::size_t dim_pos = h1.pos();
  const long long n = h1.integer();
  if (n < 2) throw ParseError(ParseError::Kind::Syntax, dim_pos, "dimension must be at least 2");
  if (!h1.done()) h1.fail("unexpected text after dimension");

  Cursor h2(s, stmts[1].first, stmts[1].second);
  h2.expect("coords");
  std::vector<std::string> coords{h2.ident()};
  while (h2.accept(",")) coords.push_back(h2.ident());
  if (!h2.done()) h2.fail("expected ',' or ';'");
  if (coords.size() != std::size_t(n)) h2.fail("coordinate count does not match dim");
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (coords[i] == coords[j]) h2.fail("duplicate coordinate '" + coords[i] + "'");

  Matrix g(static_cast<std::size_t>(n), std::vector<Expr>(std::size_t(n), Expr(0.0)));
  std::vector<std::vector<bool>> seen(static_cast<std::size_t>(n), std::vector<bool>(std::size_t(n), false));
  std::vector<Interval> box(static_cast<std::size_t>(n));

  for (std::size_t k = 2; k < stmts.size(); ++k) {
    Cursor c(s, stmts[k].first, stmts[k].second);
    if (c.done()) continue;
    if (c.accept("box")) {
      const std::string name = c.ident();
      std::size_t idx = 0;
      while (idx < coords.size() && coords[idx] != name) ++idx;
      if (idx == coords.size()) c.fail("unknown coordinate '" + name + "'");
      c.expect("in");
      c.expect("[");
      const double lo = c.real();
      c.expect(",");
      const double hi = c.real();
      c.expect("]");
      if (!c.done()) c.fail("unexpected text after box");
      if (!(lo < hi)) c.fail("empty box");
      box[idx] = {lo, hi};
      continue;
    }
    c.expect("g");
    c.expect("[");
    const std::size_t ipos = c.pos();
    const long long i = c.integer();
    c.expect("]");
    c.expect("[");
    const long long j = c.integer();
    c.expect("]");
    if (i < 1 || j < 1 || i > n || j > n)
      throw ParseError(ParseError::Kind::Syntax, ipos, "index out of range");
    if (i > j) throw ParseError(ParseError::Kind::Syntax, ipos, "only g[i][j] with i <= j may be given");
    if (seen[i - 1][j - 1]) throw ParseError(ParseError::Kind::Syntax, ipos, "duplicate entry");
    seen[i - 1][j - 1] = true;
    c.expect("=");
    const std::size_t epos = c.pos();
    try {
      g[i - 1][j - 1] = parse_expr(s.substr(epos, c.end() - epos), coords);
    } catch (const ParseError& e) {
      throw ParseError(e.kind, epos + e.offset, std::string(e.what()).substr(0, std::string(e.what()).rfind(" at offset")));
    }
  }
  return make_metric(std::move(coords), std::move(g), std::move(box));
}

MetricSpec load_metric(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open metric file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_metric(ss.str());
}

}  // namespace nsolit::expr
