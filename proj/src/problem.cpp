#include "wbmld/problem.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "wbmld/errors.hpp"
#include "wbmld/parse.hpp"

namespace wbmld {

namespace {

struct Piece {
  std::string text;
  int column = 1;  // 1-based column of text[0]
};

Piece trimmed(std::string_view s, int column) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return {std::string(s.substr(b, e - b)), column + static_cast<int>(b)};
}

std::vector<Piece> split_commas(const Piece& p, int line) {
  std::vector<Piece> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= p.text.size(); ++i) {
    char ch = i < p.text.size() ? p.text[i] : ',';
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth < 0) throw ParseError("unbalanced parentheses", line, p.column + static_cast<int>(i));
    if (ch == ',' && depth == 0) {
      out.push_back(trimmed(std::string_view(p.text).substr(start, i - start), p.column + static_cast<int>(start)));
      start = i + 1;
    }
  }
  return out;
}

Polynomial parse_at(const Piece& p, int nvars, int line) {
  if (p.text.empty()) throw ParseError("empty generator", line, p.column);
  try {
    return parse_polynomial(p.text, nvars);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), line, p.column + std::max(0, e.column() - 1));
  }
}

int parse_int(const Piece& p, int line, const char* what) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(p.text.data(), p.text.data() + p.text.size(), v);
  if (ec != std::errc{} || ptr != p.text.data() + p.text.size() || p.text.empty())
    throw ParseError(std::string("expected an integer for ") + what, line, p.column);
  return static_cast<int>(v);
}

struct RawFactor {
  Piece generators;
  Piece exponent;
  int line;
};

}  // namespace

ProblemFile ProblemFile::parse(std::string_view text) {
  ProblemFile pf;
  std::vector<RawFactor> raw;
  bool have_dim = false;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_number;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    Piece p = trimmed(line, 1);
    if (!p.text.empty()) {
      if (p.text.rfind("factor:", 0) == 0) {
        Piece body = trimmed(std::string_view(p.text).substr(7), p.column + 7);
        int depth = 0;
        std::size_t caret = std::string::npos;
        for (std::size_t i = 0; i < body.text.size(); ++i) {
          char ch = body.text[i];
          if (ch == '(') ++depth;
          if (ch == ')') --depth;
          if (ch == '^' && depth == 0 && i > 0 && std::isspace(static_cast<unsigned char>(body.text[i - 1]))) caret = i;
        }
        RawFactor rf{body, Piece{"1", body.column}, line_number};
        if (caret != std::string::npos) {
          rf.generators = trimmed(std::string_view(body.text).substr(0, caret), body.column);
          rf.exponent = trimmed(std::string_view(body.text).substr(caret + 1), body.column + static_cast<int>(caret) + 1);
        }
        raw.push_back(rf);
      } else if (p.text.rfind("option", 0) == 0 && p.text.size() > 6 && std::isspace(static_cast<unsigned char>(p.text[6]))) {
        Piece kv = trimmed(std::string_view(p.text).substr(6), p.column + 6);
        auto eq = kv.text.find('=');
        if (eq == std::string::npos) throw ParseError("expected option key=value", line_number, kv.column);
        Piece key = trimmed(std::string_view(kv.text).substr(0, eq), kv.column);
        Piece value = trimmed(std::string_view(kv.text).substr(eq + 1), kv.column + static_cast<int>(eq) + 1);
        if (key.text == "weight_bound") {
          pf.weight_bound = parse_int(value, line_number, "weight_bound");
          if (pf.weight_bound < 1) throw ParseError("weight_bound must be positive", line_number, value.column);
        } else if (key.text == "catalog_depth") {
          pf.catalog_depth = parse_int(value, line_number, "catalog_depth");
          if (pf.catalog_depth < 0) throw ParseError("catalog_depth must be nonnegative", line_number, value.column);
        } else if (key.text == "seed") {
          std::uint64_t v = 0;
          auto [ptr, ec] = std::from_chars(value.text.data(), value.text.data() + value.text.size(), v);
          if (ec != std::errc{} || ptr != value.text.data() + value.text.size() || value.text.empty())
            throw ParseError("expected an unsigned integer for seed", line_number, value.column);
          pf.seed = v;
        } else {
          throw ParseError("unknown option '" + key.text + "'", line_number, key.column);
        }
      } else if (p.text.rfind("dim", 0) == 0) {
        auto eq = p.text.find('=');
        if (eq == std::string::npos || !trimmed(std::string_view(p.text).substr(3, eq - 3), 0).text.empty())
          throw ParseError("expected dim=N", line_number, p.column);
        Piece value = trimmed(std::string_view(p.text).substr(eq + 1), p.column + static_cast<int>(eq) + 1);
        if (have_dim) throw ParseError("dimension given twice", line_number, p.column);
        pf.dimension = parse_int(value, line_number, "dim");
        if (pf.dimension < 2 || pf.dimension > 3) throw ParseError("dimension must be 2 or 3", line_number, value.column);
        have_dim = true;
      } else {
        throw ParseError("unrecognized line", line_number, p.column);
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  for (const auto& rf : raw) {
    ProblemFactor f;
    for (const auto& g : split_commas(rf.generators, rf.line)) f.generators.push_back(parse_at(g, pf.dimension, rf.line));
    try {
      f.exponent = Rational::parse(rf.exponent.text);
    } catch (const Error&) {
      throw ParseError("invalid exponent '" + rf.exponent.text + "'", rf.line, rf.exponent.column);
    }
    if (f.exponent <= 0) throw ParseError("exponent must be positive", rf.line, rf.exponent.column);
    bool all_zero = true;
    for (const auto& g : f.generators) all_zero = all_zero && g.is_zero();
    if (all_zero) throw ParseError("factor has only zero generators", rf.line, rf.generators.column);
    pf.factors.push_back(std::move(f));
  }
  return pf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProblemFile ProblemFile::read(const std::string& path) { return parse(read_text_file(path)); }

std::string ProblemFile::serialize() const {
  std::string s = "dim=" + std::to_string(dimension) + "\n";
  for (const auto& f : factors) {
    s += "factor: ";
    for (std::size_t i = 0; i < f.generators.size(); ++i) s += (i ? ", " : "") + f.generators[i].str();
    s += " ^ " + f.exponent.str() + "\n";
  }
  s += "option weight_bound=" + std::to_string(weight_bound) + "\n";
  s += "option catalog_depth=" + std::to_string(catalog_depth) + "\n";
  s += "option seed=" + std::to_string(seed) + "\n";
  return s;
}

RealIdeal ProblemFile::ideal() const {
  RealIdeal a(dimension);
  for (const auto& f : factors) a.add_factor(f.generators, f.exponent);
  return a;
}

}  // namespace wbmld
