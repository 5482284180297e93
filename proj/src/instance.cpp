#include "mel/instance.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "mel/error.hpp"
#include "mel/subset.hpp"

namespace mel {

std::uint32_t Instance::d() const {
  std::uint32_t d = 0;
  for (const auto& f : polys) d = std::max(d, f.total_degree().value_or(0));
  return d;
}

namespace {

// Cursor over one line, tracking the 1-based column for error messages.
class LineScanner {
 public:
  LineScanner(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  void skip_space() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }
  char peek() {
    skip_space();
    return pos_ < line_.size() ? line_[pos_] : '\0';
  }
  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }
  std::uint64_t integer(const char* what) {
    skip_space();
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(line_.data() + pos_, line_.data() + line_.size(), value);
    if (ec == std::errc::result_out_of_range) fail(std::string(what) + " is too large");
    if (ec != std::errc{}) fail(std::string("expected ") + what);
    pos_ = static_cast<std::size_t>(ptr - line_.data());
    return value;
  }
  std::string_view word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
    return line_.substr(start, pos_ - start);
  }
  std::size_t column() const { return pos_ + 1; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_no_, pos_ + 1, what); }
  [[noreturn]] void fail_at(std::size_t column, const std::string& what) const {
    throw ParseError(line_no_, column, what);
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

struct Header {
  std::optional<gf::FieldRef> field;
  std::optional<std::size_t> s;
  std::optional<std::uint32_t> delta;
};

gf::Code parse_coefficient(LineScanner& sc, const gf::Field& F) {
  const std::uint32_t p = F.characteristic();
  if (sc.consume('[')) {
    const std::size_t col = sc.column();
    std::vector<std::uint32_t> v;
    do {
      v.push_back(static_cast<std::uint32_t>(sc.integer("coefficient entry") % p));
    } while (sc.consume(','));
    sc.expect(']');
    if (v.size() != F.degree())
      sc.fail_at(col, "coefficient vector has " + std::to_string(v.size()) + " entries, field needs " +
                          std::to_string(F.degree()));
    return F.from_coeffs(v);
  }
  return static_cast<gf::Code>(sc.integer("coefficient") % p);
}

mpoly::MPoly parse_term(LineScanner& sc, const gf::FieldRef& field, std::size_t s) {
  const gf::Field& F = *field;
  gf::Code coeff = 1;
  mpoly::Monomial mono{std::vector<std::uint32_t>(s, 0)};
  do {
    const char c = sc.peek();
    if (c == 'X' || c == 'x') {
      sc.consume(c);
      const std::size_t col = sc.column();
      const std::uint64_t idx = sc.integer("variable index");
      if (idx < 1 || idx > s)
        sc.fail_at(col - 1, "unknown variable X" + std::to_string(idx) + " (vars " + std::to_string(s) + ")");
      std::uint64_t e = 1;
      if (sc.consume('^')) e = sc.integer("exponent");
      if (e > std::numeric_limits<std::uint32_t>::max() / 2) sc.fail("exponent is too large");
      mono.exps[idx - 1] += static_cast<std::uint32_t>(e);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '[') {
      coeff = F.mul(coeff, parse_coefficient(sc, F));
    } else {
      sc.fail("expected a coefficient or a variable X<i>");
    }
  } while (sc.consume('*'));
  mpoly::MPoly t(field, s);
  t.add_term(mono, coeff);
  return t;
}

mpoly::MPoly parse_poly(LineScanner& sc, const gf::FieldRef& field, std::size_t s) {
  mpoly::MPoly f(field, s);
  bool negate = sc.consume('-');
  for (;;) {
    const mpoly::MPoly t = parse_term(sc, field, s);
    f = negate ? f - t : f + t;
    if (sc.at_end()) break;
    if (sc.consume('+'))
      negate = false;
    else if (sc.consume('-'))
      negate = true;
    else
      sc.fail("expected '+' or end of line");
  }
  return f;
}

std::uint64_t saturating_power(std::uint64_t base, std::uint64_t exp) {
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

Instance parse_instance(std::string_view text, const ParseOptions& options, std::string name) {
  Header header;
  Instance inst;
  inst.name = std::move(name);
  std::size_t line_no = 0;
  std::size_t last_line = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    last_line = line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    LineScanner sc(line, line_no);
    if (sc.at_end()) continue;

    const std::size_t keyword_col = sc.column();
    const std::string_view keyword = sc.word();
    if (keyword == "field") {
      if (header.field) sc.fail_at(keyword_col, "duplicate field line");
      std::optional<std::uint64_t> p, k;
      while (!sc.at_end()) {
        const std::size_t col = sc.column();
        const char key = sc.peek();
        sc.consume(key);
        sc.expect('=');
        const std::uint64_t v = sc.integer("integer");
        if (key == 'p' && !p)
          p = v;
        else if (key == 'k' && !k)
          k = v;
        else
          sc.fail_at(col, "expected p=<prime> and k=<int>");
      }
      if (!p || !k) sc.fail_at(keyword_col, "field line needs p=<prime> and k=<int>");
      if (*p > std::numeric_limits<std::uint32_t>::max() || !gf::is_prime(*p))
        sc.fail_at(keyword_col, "p=" + std::to_string(*p) + " is not prime");
      if (*k < 1 || *k > 64) sc.fail_at(keyword_col, "k must be between 1 and 64");
      header.field = gf::get_field(static_cast<std::uint32_t>(*p), static_cast<std::uint32_t>(*k),
                                   options.field_guard);
    } else if (keyword == "vars") {
      if (header.s) sc.fail_at(keyword_col, "duplicate vars line");
      const std::uint64_t s = sc.integer("variable count");
      if (s < 1 || s > 64) sc.fail("variable count must be between 1 and 64");
      header.s = static_cast<std::size_t>(s);
      if (!sc.at_end()) sc.fail("unexpected text after variable count");
    } else if (keyword == "delta") {
      if (header.delta) sc.fail_at(keyword_col, "duplicate delta line");
      const std::uint64_t dl = sc.integer("delta");
      if (dl < 1 || dl > std::numeric_limits<std::uint32_t>::max()) sc.fail("delta must be a positive integer");
      header.delta = static_cast<std::uint32_t>(dl);
      if (!sc.at_end()) sc.fail("unexpected text after delta");
    } else if (keyword == "poly") {
      if (!header.field) sc.fail_at(keyword_col, "poly before field line");
      if (!header.s) sc.fail_at(keyword_col, "poly before vars line");
      const std::size_t col = sc.column();
      mpoly::MPoly f = parse_poly(sc, *header.field, *header.s);
      if (!options.allow_loops && f.total_degree().value_or(0) == 0)
        sc.fail_at(col, f.is_zero() ? "zero polynomial (enable loops to allow it)"
                                    : "constant polynomial (enable loops to allow it)");
      inst.polys.push_back(std::move(f));
      if (inst.polys.size() > kMaxGroundSet)
        sc.fail_at(keyword_col, "more than " + std::to_string(kMaxGroundSet) + " ground-set elements");
    } else {
      sc.fail_at(keyword_col, "unknown keyword '" + std::string(keyword) + "'");
    }
  }
  if (!header.field) throw ParseError(last_line + 1, 1, "missing field line");
  if (!header.s) throw ParseError(last_line + 1, 1, "missing vars line");
  if (inst.polys.empty()) throw ParseError(last_line + 1, 1, "no poly lines");
  inst.base = *header.field;
  inst.s = *header.s;
  inst.declared_delta = header.delta;

  const std::uint64_t grid = saturating_power(inst.q0(), inst.s);
  if (grid > options.grid_guard && !options.force)
    throw GuardError("source grid q0^s = " + std::to_string(inst.q0()) + "^" + std::to_string(inst.s) +
                     " exceeds the grid guard of " + std::to_string(options.grid_guard) + " (use --force)");
  return inst;
}

Instance load_instance(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read instance file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str(), options, path.stem().string());
}

std::string render_instance(const Instance& instance) {
  std::ostringstream out;
  out << "field p=" << instance.base->characteristic() << " k=" << instance.base->degree() << '\n';
  out << "vars " << instance.s << '\n';
  if (instance.declared_delta) out << "delta " << *instance.declared_delta << '\n';
  for (const auto& f : instance.polys) out << "poly " << mpoly::render(f) << '\n';
  return out.str();
}

std::string to_string(DeltaSource source) {
  switch (source) {
    case DeltaSource::declared:
      return "declared";
    case DeltaSource::hypersurface:
      return "hypersurface";
    case DeltaSource::upper_bound:
      return "upper bound";
  }
  return "?";
}

Delta delta_of(const Instance& instance, std::uint32_t m, std::optional<std::uint32_t> hypersurface_delta) {
  const std::uint64_t d = std::max<std::uint32_t>(instance.d(), 1);
  const std::uint64_t bound = saturating_power(d, m);
  const bool hypersurface = instance.n() == static_cast<std::size_t>(m) + 1 && hypersurface_delta.has_value();
  if (instance.declared_delta) {
    const std::uint32_t declared = *instance.declared_delta;
    if (declared > bound)
      throw DomainError("declared delta " + std::to_string(declared) + " exceeds the degree bound d^m = " +
                        std::to_string(bound));
    if (hypersurface && *hypersurface_delta != declared)
      throw DomainError("declared delta " + std::to_string(declared) + " contradicts the hypersurface degree " +
                        std::to_string(*hypersurface_delta));
    return {declared, DeltaSource::declared};
  }
  if (hypersurface) return {*hypersurface_delta, DeltaSource::hypersurface};
  if (bound > std::numeric_limits<std::uint32_t>::max()) throw GuardError("degree bound d^m overflows");
  return {static_cast<std::uint32_t>(bound), DeltaSource::upper_bound};
}

}  // namespace mel
