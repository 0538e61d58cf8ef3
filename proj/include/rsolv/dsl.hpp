#pragma once

// The spec-file language: one statement per line.
//
//   group S3 = perm 3 { (1 2); (1 2 3) }
//   group C3 = cyclic 3
//   group Z2 = free-abelian 2
//   group A  = abelian [2,0]
//   embed e : C3 -> S3 { g1 -> (1 2 3) }
//   amalgam G = S3, S3 over C3 via e, e
//   word w in G = 0:(1 2) * 1:(1 2 3)^-1
//
// Element expressions are juxtaposed products of g<i> (the i-th declared
// generator), cycles, vector literals [a,b], the identity `1` and
// parenthesised groups, each optionally raised to ^k. A run of cycles such as
// (1 3)(2 4) is one permutation, so ^k applies to all of it and only the
// product has to lie in the group. `#` starts a comment.

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rsolv/amalgam.hpp"
#include "rsolv/error.hpp"
#include "rsolv/small_groups.hpp"

namespace rsolv::dsl {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string expected, std::string found = {})
      : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                         ": expected " + expected + (found.empty() ? "" : ", found " + found)),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  std::string const& expected() const noexcept { return expected_; }

 private:
  std::size_t line_, column_;
  std::string expected_;
};

// ---- syntax tree ----

using Cycle = std::vector<std::uint32_t>;

struct Term {
  enum class Kind { generator, identity, cycle, vector, group };
  Kind kind = Kind::identity;
  std::size_t generator = 0;       // 1-based
  std::vector<Cycle> cycles;  // adjacent cycles form one permutation
  std::vector<std::int64_t> vec;
  std::vector<Term> group;
  std::int64_t exponent = 1;

  friend bool operator==(Term const&, Term const&) = default;
};

using ElemExpr = std::vector<Term>;

struct GroupDecl {
  enum class Kind { perm, cyclic, free_abelian, abelian };
  std::string name;
  Kind kind = Kind::perm;
  std::size_t size = 0;                       // degree, n or rank
  std::vector<std::vector<Cycle>> generators;  // perm
  std::vector<std::int64_t> invariants;        // abelian

  friend bool operator==(GroupDecl const&, GroupDecl const&) = default;
};

struct EmbedDecl {
  std::string name, source, target;
  std::vector<std::pair<std::size_t, ElemExpr>> images;

  friend bool operator==(EmbedDecl const&, EmbedDecl const&) = default;
};

struct AmalgamDecl {
  std::string name;
  std::vector<std::string> factors;
  std::string over;
  std::vector<std::string> via;

  friend bool operator==(AmalgamDecl const&, AmalgamDecl const&) = default;
};

struct SyllableExpr {
  std::string factor;  // a factor name, or a 0-based position written in digits
  ElemExpr element;

  friend bool operator==(SyllableExpr const&, SyllableExpr const&) = default;
};

struct WordDecl {
  std::string name, amalgam;
  std::vector<SyllableExpr> syllables;

  friend bool operator==(WordDecl const&, WordDecl const&) = default;
};

using Statement = std::variant<GroupDecl, EmbedDecl, AmalgamDecl, WordDecl>;

struct SpecFile {
  std::vector<Statement> statements;
  std::vector<std::size_t> lines;  // source line per statement; not part of equality

  friend bool operator==(SpecFile const& a, SpecFile const& b) { return a.statements == b.statements; }
};

inline std::string const& statement_name(Statement const& s) {
  return std::visit([](auto const& d) -> std::string const& { return d.name; }, s);
}

// ---- lexer ----

namespace detail {

enum class Tok { ident, number, punct, newline, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, col;
};

inline bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    i += n;
    col += n;
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    if (c == '\n') {
      out.push_back({Tok::newline, "\n", line, col});
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    if (is_alpha(c)) {
      std::size_t j = i;
      while (j < s.size() && (is_alpha(s[j]) || is_digit(s[j]) ||
                              (s[j] == '-' && j + 1 < s.size() && is_alpha(s[j + 1]))))
        ++j;
      out.push_back({Tok::ident, std::string(s.substr(i, j - i)), line, col});
      advance(j - i);
      continue;
    }
    if (is_digit(c)) {
      std::size_t j = i;
      while (j < s.size() && is_digit(s[j])) ++j;
      out.push_back({Tok::number, std::string(s.substr(i, j - i)), line, col});
      advance(j - i);
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({Tok::punct, "->", line, col});
      advance(2);
      continue;
    }
    if (std::string_view("={}()[];,:*^-").find(c) != std::string_view::npos) {
      out.push_back({Tok::punct, std::string(1, c), line, col});
      advance(1);
      continue;
    }
    throw ParseError(line, col, "a token", "'" + std::string(1, c) + "'");
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

inline std::string describe(Token const& t) {
  switch (t.kind) {
    case Tok::newline: return "end of line";
    case Tok::end: return "end of input";
    default: return "'" + t.text + "'";
  }
}

inline std::optional<std::size_t> generator_symbol(std::string const& s) {
  if (s.size() < 2 || s[0] != 'g') return std::nullopt;
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || v == 0) return std::nullopt;
  return v;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  SpecFile parse() {
    SpecFile f;
    while (true) {
      while (peek().kind == Tok::newline) ++pos_;
      if (peek().kind == Tok::end) return f;
      std::size_t line = peek().line;
      f.statements.push_back(statement());
      f.lines.push_back(line);
      if (peek().kind != Tok::newline && peek().kind != Tok::end) error("end of statement");
    }
  }

 private:
  Token const& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  [[noreturn]] void error(std::string expected) const {
    throw ParseError(peek().line, peek().col, std::move(expected), describe(peek()));
  }
  bool is_punct(char const* p, std::size_t k = 0) const { return peek(k).kind == Tok::punct && peek(k).text == p; }
  bool accept(char const* p) {
    if (!is_punct(p)) return false;
    ++pos_;
    return true;
  }
  void expect(char const* p) {
    if (!accept(p)) error(std::string("'") + p + "'");
  }
  std::string ident(char const* what = "a name") {
    if (peek().kind != Tok::ident) error(what);
    return toks_[pos_++].text;
  }
  void keyword(char const* kw) {
    if (peek().kind != Tok::ident || peek().text != kw) error(std::string("'") + kw + "'");
    ++pos_;
  }
  std::int64_t number(char const* what = "a number") {
    if (peek().kind != Tok::number) error(what);
    auto const& t = toks_[pos_];
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{}) error("a number that fits in 64 bits");
    ++pos_;
    return v;
  }
  std::int64_t signed_number() {
    bool neg = accept("-");
    auto v = number();
    return neg ? -v : v;
  }

  Statement statement() {
    if (peek().kind == Tok::ident) {
      auto const& kw = peek().text;
      if (kw == "group") return group();
      if (kw == "embed") return embed();
      if (kw == "amalgam") return amalgam();
      if (kw == "word") return word();
    }
    error("'group', 'embed', 'amalgam' or 'word'");
  }

  Cycle cycle() {
    expect("(");
    Cycle c;
    while (!is_punct(")")) {
      auto v = number("a point or ')'");
      if (v <= 0 || v > static_cast<std::int64_t>(UINT32_MAX)) {
        --pos_;
        error("a positive point");
      }
      c.push_back(static_cast<std::uint32_t>(v));
      accept(",");
    }
    expect(")");
    return c;
  }

  GroupDecl group() {
    keyword("group");
    GroupDecl d;
    d.name = ident();
    expect("=");
    auto kind = ident("'perm', 'cyclic', 'free-abelian' or 'abelian'");
    if (kind == "perm") {
      d.kind = GroupDecl::Kind::perm;
      d.size = static_cast<std::size_t>(number("a degree"));
      expect("{");
      while (!is_punct("}")) {
        std::vector<Cycle> g;
        if (!is_punct("(")) error("a cycle");
        while (is_punct("(")) g.push_back(cycle());
        d.generators.push_back(std::move(g));
        if (!accept(";") && !is_punct("}")) error("';' or '}'");
      }
      expect("}");
    } else if (kind == "cyclic") {
      d.kind = GroupDecl::Kind::cyclic;
      d.size = static_cast<std::size_t>(number("an order"));
    } else if (kind == "free-abelian") {
      d.kind = GroupDecl::Kind::free_abelian;
      d.size = static_cast<std::size_t>(number("a rank"));
    } else if (kind == "abelian") {
      d.kind = GroupDecl::Kind::abelian;
      expect("[");
      while (!is_punct("]")) {
        d.invariants.push_back(number("an invariant"));
        if (!accept(",") && !is_punct("]")) error("',' or ']'");
      }
      expect("]");
    } else {
      --pos_;
      error("'perm', 'cyclic', 'free-abelian' or 'abelian'");
    }
    return d;
  }

  Term atom() {
    Term t;
    if (peek().kind == Tok::ident) {
      auto g = generator_symbol(peek().text);
      if (!g) error("a generator symbol g<i>");
      ++pos_;
      t.kind = Term::Kind::generator;
      t.generator = *g;
    } else if (peek().kind == Tok::number) {
      if (peek().text != "1") error("'1' or a generator symbol");
      ++pos_;
      t.kind = Term::Kind::identity;
    } else if (is_punct("(")) {
      if (peek(1).kind == Tok::number || is_punct(")", 1)) {
        t.kind = Term::Kind::cycle;
        while (is_punct("(") && (peek(1).kind == Tok::number || is_punct(")", 1))) t.cycles.push_back(cycle());
      } else {
        ++pos_;
        t.kind = Term::Kind::group;
        t.group = expr();
        expect(")");
      }
    } else if (is_punct("[")) {
      ++pos_;
      t.kind = Term::Kind::vector;
      while (!is_punct("]")) {
        t.vec.push_back(signed_number());
        if (!accept(",") && !is_punct("]")) error("',' or ']'");
      }
      expect("]");
    } else {
      error("an element expression");
    }
    if (accept("^")) t.exponent = signed_number();
    return t;
  }

  bool starts_term() const {
    return peek().kind == Tok::ident || peek().kind == Tok::number || is_punct("(") || is_punct("[");
  }

  ElemExpr expr() {
    ElemExpr e;
    if (!starts_term()) error("an element expression");
    while (starts_term()) e.push_back(atom());
    return e;
  }

  EmbedDecl embed() {
    keyword("embed");
    EmbedDecl d;
    d.name = ident();
    expect(":");
    d.source = ident("a group name");
    expect("->");
    d.target = ident("a group name");
    expect("{");
    while (!is_punct("}")) {
      if (peek().kind != Tok::ident || !generator_symbol(peek().text)) error("a generator symbol g<i>");
      auto g = *generator_symbol(toks_[pos_++].text);
      expect("->");
      d.images.emplace_back(g, expr());
      if (!accept(";") && !is_punct("}")) error("';' or '}'");
    }
    expect("}");
    return d;
  }

  AmalgamDecl amalgam() {
    keyword("amalgam");
    AmalgamDecl d;
    d.name = ident();
    expect("=");
    d.factors.push_back(ident("a group name"));
    while (accept(",")) d.factors.push_back(ident("a group name"));
    keyword("over");
    d.over = ident("a group name");
    keyword("via");
    d.via.push_back(ident("an embedding name"));
    while (accept(",")) d.via.push_back(ident("an embedding name"));
    return d;
  }

  SyllableExpr syllable() {
    SyllableExpr s;
    if (peek().kind == Tok::number) {
      s.factor = toks_[pos_++].text;
    } else {
      s.factor = ident("a factor name or position");
    }
    expect(":");
    s.element = expr();
    return s;
  }

  WordDecl word() {
    keyword("word");
    WordDecl d;
    d.name = ident();
    keyword("in");
    d.amalgam = ident("an amalgam name");
    expect("=");
    d.syllables.push_back(syllable());
    while (accept("*")) d.syllables.push_back(syllable());
    return d;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline SpecFile parse(std::string_view text) { return detail::Parser(text).parse(); }

// ---- printer ----

inline std::string print(ElemExpr const& e);

inline std::string print_cycle(Cycle const& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + std::to_string(c[i]);
  return s + ")";
}

inline std::string print(Term const& t) {
  std::string s;
  switch (t.kind) {
    case Term::Kind::generator: s = "g" + std::to_string(t.generator); break;
    case Term::Kind::identity: s = "1"; break;
    case Term::Kind::cycle:
      for (auto const& c : t.cycles) s += print_cycle(c);
      break;
    case Term::Kind::vector:
      s = "[";
      for (std::size_t i = 0; i < t.vec.size(); ++i) s += (i ? "," : "") + std::to_string(t.vec[i]);
      s += "]";
      break;
    case Term::Kind::group: s = "(" + print(t.group) + ")"; break;
  }
  if (t.exponent != 1) s += "^" + std::to_string(t.exponent);
  return s;
}

inline std::string print(ElemExpr const& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? " " : "") + print(e[i]);
  return s;
}

inline std::string print(Statement const& st) {
  struct V {
    std::string operator()(GroupDecl const& d) const {
      std::string s = "group " + d.name + " = ";
      switch (d.kind) {
        case GroupDecl::Kind::perm: {
          s += "perm " + std::to_string(d.size) + " {";
          for (std::size_t i = 0; i < d.generators.size(); ++i) {
            s += i ? "; " : " ";
            for (auto const& c : d.generators[i]) s += print_cycle(c);
          }
          return s + " }";
        }
        case GroupDecl::Kind::cyclic: return s + "cyclic " + std::to_string(d.size);
        case GroupDecl::Kind::free_abelian: return s + "free-abelian " + std::to_string(d.size);
        case GroupDecl::Kind::abelian: {
          s += "abelian [";
          for (std::size_t i = 0; i < d.invariants.size(); ++i) s += (i ? "," : "") + std::to_string(d.invariants[i]);
          return s + "]";
        }
      }
      return s;
    }
    std::string operator()(EmbedDecl const& d) const {
      std::string s = "embed " + d.name + " : " + d.source + " -> " + d.target + " {";
      for (std::size_t i = 0; i < d.images.size(); ++i)
        s += (i ? "; g" : " g") + std::to_string(d.images[i].first) + " -> " + print(d.images[i].second);
      return s + " }";
    }
    std::string operator()(AmalgamDecl const& d) const {
      std::string s = "amalgam " + d.name + " = ";
      for (std::size_t i = 0; i < d.factors.size(); ++i) s += (i ? ", " : "") + d.factors[i];
      s += " over " + d.over + " via ";
      for (std::size_t i = 0; i < d.via.size(); ++i) s += (i ? ", " : "") + d.via[i];
      return s;
    }
    std::string operator()(WordDecl const& d) const {
      std::string s = "word " + d.name + " in " + d.amalgam + " =";
      for (std::size_t i = 0; i < d.syllables.size(); ++i)
        s += (i ? " * " : " ") + d.syllables[i].factor + ":" + print(d.syllables[i].element);
      return s;
    }
  };
  return std::visit(V{}, st);
}

inline std::string print(SpecFile const& f) {
  std::string s;
  for (auto const& st : f.statements) s += print(st) + "\n";
  return s;
}

// ---- resolution ----

struct ResolvedGroup {
  GroupRep rep;
  std::vector<Element> symbols;  // value of g1, g2, ...
};

struct ResolvedEmbed {
  std::string source, target;
  RepHom hom;
};

struct ResolvedAmalgam {
  AmalgamPtr spec;
  std::vector<std::string> factors;
  std::string over;
};

struct ResolvedWord {
  std::string amalgam;
  AmalgamWord word;
};

struct Model {
  std::map<std::string, ResolvedGroup> groups;
  std::map<std::string, ResolvedEmbed> embeds;
  std::map<std::string, ResolvedAmalgam> amalgams;
  std::map<std::string, ResolvedWord> words;
  std::vector<std::string> order;  // declaration order

  ResolvedGroup const& group(std::string const& n) const { return lookup(groups, n, "group"); }
  ResolvedAmalgam const& amalgam(std::string const& n) const { return lookup(amalgams, n, "amalgam"); }
  ResolvedWord const& word(std::string const& n) const { return lookup(words, n, "word"); }

  // The only amalgam, or the named one.
  ResolvedAmalgam const& amalgam_or_single(std::string const& n) const {
    if (!n.empty()) return amalgam(n);
    if (amalgams.size() != 1) {
      fail(ErrorKind::ResolutionError, "the spec declares " + std::to_string(amalgams.size()) +
                                           " amalgams; name one explicitly");
    }
    return amalgams.begin()->second;
  }

 private:
  template <class M>
  static typename M::mapped_type const& lookup(M const& m, std::string const& n, char const* what) {
    auto it = m.find(n);
    if (it == m.end()) fail(ErrorKind::ResolutionError, std::string("no ") + what + " named '" + n + "'");
    return it->second;
  }
};

namespace detail {

inline Element evaluate(ResolvedGroup const& G, ElemExpr const& e, std::string const& where);

inline Element evaluate_term(ResolvedGroup const& G, Term const& t, std::string const& where) {
  GroupRep const& R = G.rep;
  Element x;
  switch (t.kind) {
    case Term::Kind::generator:
      if (t.generator > G.symbols.size()) {
        fail(ErrorKind::ResolutionError, where + ": g" + std::to_string(t.generator) + " is not a generator");
      }
      x = G.symbols[t.generator - 1];
      break;
    case Term::Kind::identity: x = R.identity(); break;
    case Term::Kind::cycle: {
      if (!R.is_finite_group() || !R.finite()->has_permutations()) {
        fail(ErrorKind::ResolutionError, where + ": cycle notation needs a permutation group");
      }
      auto const& F = *R.finite();
      for (auto const& c : t.cycles)
        for (auto p : c)
          if (p > F.degree()) {
            fail(ErrorKind::ElementOutOfRange,
                 where + ": point " + std::to_string(p) + " exceeds degree " + std::to_string(F.degree()));
          }
      auto idx = F.find_permutation(perm::from_cycles(F.degree(), t.cycles));
      if (!idx) {
        std::string text;
        for (auto const& c : t.cycles) text += print_cycle(c);
        fail(ErrorKind::ElementOutOfRange, where + ": " + text + " is not in the group");
      }
      x = GroupRep::of(*idx);
      break;
    }
    case Term::Kind::vector:
      if (!R.is_abelian_group()) fail(ErrorKind::ResolutionError, where + ": vector literal needs an abelian group");
      if (t.vec.size() != R.abelian().width()) {
        fail(ErrorKind::ElementOutOfRange, where + ": vector has " + std::to_string(t.vec.size()) +
                                               " coordinates, group has " + std::to_string(R.abelian().width()));
      }
      x = R.abelian().normalize(t.vec);
      break;
    case Term::Kind::group: x = evaluate(G, t.group, where); break;
  }
  return t.exponent == 1 ? x : R.power(x, t.exponent);
}

inline Element evaluate(ResolvedGroup const& G, ElemExpr const& e, std::string const& where) {
  Element x = G.rep.identity();
  for (auto const& t : e) x = G.rep.mul(x, evaluate_term(G, t, where));
  return x;
}

inline ResolvedGroup build_group(GroupDecl const& d, Limits const& limits) {
  using K = GroupDecl::Kind;
  switch (d.kind) {
    case K::perm: {
      if (d.size == 0) fail(ErrorKind::NotAPermutation, d.name + ": degree must be positive");
      std::vector<Permutation> gens;
      for (auto const& g : d.generators) {
        for (auto const& c : g)
          for (auto p : c)
            if (p > d.size) {
              fail(ErrorKind::NotAPermutation, d.name + ": point " + std::to_string(p) + " exceeds degree");
            }
        gens.push_back(perm::from_cycles(d.size, g));
      }
      auto G = group_from_permutations(d.size, gens, limits);
      ResolvedGroup r{G, {}};
      for (auto g : G->generators()) r.symbols.push_back(GroupRep::of(g));
      return r;
    }
    case K::cyclic: {
      auto G = groups::cyclic(d.size, limits);
      ResolvedGroup r{G, {}};
      r.symbols.push_back(d.size > 1 ? GroupRep::of(G->generators()[0]) : GroupRep::of(0));
      return r;
    }
    case K::free_abelian: {
      FGAbelian A(d.size, {});
      ResolvedGroup r{A, {}};
      for (std::size_t i = 0; i < d.size; ++i) r.symbols.push_back(A.basis(i));
      return r;
    }
    case K::abelian: {
      bool finite = std::all_of(d.invariants.begin(), d.invariants.end(), [](auto v) { return v > 0; });
      if (finite) {
        // disjoint cycles, one block of points per invariant
        std::size_t degree = 0;
        for (auto v : d.invariants) degree += static_cast<std::size_t>(v);
        if (degree > limits.max_order) fail(ErrorKind::ClosureCapExceeded, d.name + ": too many points");
        std::vector<Permutation> gens;
        std::vector<std::optional<std::size_t>> which;
        std::uint32_t next = 1;
        for (auto v : d.invariants) {
          Cycle c;
          for (std::int64_t k = 0; k < v; ++k) c.push_back(next++);
          if (v > 1) {
            which.push_back(gens.size());
            gens.push_back(perm::from_cycles(std::max<std::size_t>(degree, 1), {c}));
          } else {
            which.push_back(std::nullopt);
          }
        }
        auto G = group_from_permutations(std::max<std::size_t>(degree, 1), gens, limits);
        ResolvedGroup r{G, {}};
        for (auto const& w : which) r.symbols.push_back(GroupRep::of(w ? G->generators()[*w] : 0));
        return r;
      }
      std::vector<IntVector> rels;
      for (std::size_t i = 0; i < d.invariants.size(); ++i)
        if (d.invariants[i] != 0) {
          IntVector row(d.invariants.size(), 0);
          row[i] = d.invariants[i];
          rels.push_back(row);
        }
      auto p = present_abelian(d.invariants.size(), rels);
      return ResolvedGroup{p.group, p.generator_images};
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown group kind");
}

// A homomorphism given by the images of the source's symbols g1, g2, ...
inline RepHom hom_from_symbols(ResolvedGroup const& src, GroupRep const& target, std::vector<Element> const& imgs,
                               std::string const& where) {
  GroupRep const& S = src.rep;
  std::vector<Element> gen_imgs;
  if (S.is_finite_group()) {
    FiniteGroup const& F = *S.finite();
    std::vector<std::optional<Element>> table(F.order());
    table[F.identity()] = target.identity();
    std::vector<Index> queue{F.identity()};
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (std::size_t k = 0; k < imgs.size(); ++k) {
        Index y = F.mul(queue[i], GroupRep::index(src.symbols[k]));
        if (!table[y]) {
          table[y] = target.mul(*table[queue[i]], imgs[k]);
          queue.push_back(y);
        }
      }
    for (auto g : F.generators()) gen_imgs.push_back(table[g] ? *table[g] : target.identity());
  } else {
    FGAbelian const& A = S.abelian();
    IntMatrix M(A.width(), imgs.size() + A.torsion.size());
    for (std::size_t k = 0; k < imgs.size(); ++k)
      for (std::size_t i = 0; i < A.width(); ++i) M(i, k) = src.symbols[k][i];
    for (std::size_t t = 0; t < A.torsion.size(); ++t) M(A.free_rank + t, imgs.size() + t) = A.torsion[t];
    for (std::size_t j = 0; j < A.width(); ++j) {
      std::vector<BigInt> e(A.width(), 0);
      e[j] = 1;
      auto x = solve_integer(M, e);
      if (!x) fail(ErrorKind::ResolutionError, where + ": generators do not span the source group");
      Element y = target.identity();
      for (std::size_t k = 0; k < imgs.size(); ++k)
        if ((*x)[k] != 0) y = target.mul(y, target.power(imgs[k], to_int64((*x)[k])));
      gen_imgs.push_back(y);
    }
  }
  auto h = RepHom::from_generator_images(S, target, gen_imgs);
  for (std::size_t k = 0; k < imgs.size(); ++k)
    if (h(src.symbols[k]) != imgs[k]) {
      fail(ErrorKind::NotAHomomorphism, where + ": the images of the generators do not define a homomorphism");
    }
  return h;
}

}  // namespace detail

inline Model resolve(SpecFile const& f, Limits const& limits = {}) {
  Model m;
  std::map<std::string, std::size_t> seen;
  for (std::size_t si = 0; si < f.statements.size(); ++si) {
    auto const& st = f.statements[si];
    std::string where = "line " + std::to_string(si < f.lines.size() ? f.lines[si] : si + 1);
    auto const& name = statement_name(st);
    if (seen.count(name)) fail(ErrorKind::ResolutionError, where + ": '" + name + "' is already declared");
    seen[name] = si;
    m.order.push_back(name);
    if (auto const* g = std::get_if<GroupDecl>(&st)) {
      m.groups.emplace(name, detail::build_group(*g, limits));
    } else if (auto const* e = std::get_if<EmbedDecl>(&st)) {
      auto const& C = m.group(e->source);
      auto const& G = m.group(e->target);
      std::vector<std::optional<Element>> imgs(C.symbols.size());
      for (auto const& [g, ex] : e->images) {
        if (g > imgs.size()) {
          fail(ErrorKind::ResolutionError, where + ": " + e->source + " has no generator g" + std::to_string(g));
        }
        if (imgs[g - 1]) fail(ErrorKind::ResolutionError, where + ": g" + std::to_string(g) + " mapped twice");
        imgs[g - 1] = detail::evaluate(G, ex, where);
      }
      std::vector<Element> vals;
      for (std::size_t k = 0; k < imgs.size(); ++k) {
        if (!imgs[k]) fail(ErrorKind::ResolutionError, where + ": no image for g" + std::to_string(k + 1));
        vals.push_back(*imgs[k]);
      }
      // an embedding keeps element orders
      if (C.rep.is_finite_group() && G.rep.is_finite_group()) {
        for (std::size_t k = 0; k < vals.size(); ++k) {
          auto a = C.rep.finite()->element_order(GroupRep::index(C.symbols[k]));
          auto b = G.rep.finite()->element_order(GroupRep::index(vals[k]));
          if (a != b) {
            fail(ErrorKind::NotInjective, where + ": g" + std::to_string(k + 1) + " has order " + std::to_string(a) +
                                              " but its image has order " + std::to_string(b));
          }
        }
      }
      m.embeds.emplace(name, ResolvedEmbed{e->source, e->target, detail::hom_from_symbols(C, G.rep, vals, where)});
    } else if (auto const* a = std::get_if<AmalgamDecl>(&st)) {
      if (a->via.size() != a->factors.size()) {
        fail(ErrorKind::IncompatibleAmalgam, where + ": " + std::to_string(a->factors.size()) + " factors but " +
                                                 std::to_string(a->via.size()) + " embeddings");
      }
      std::vector<GroupRep> fs;
      std::vector<RepHom> es;
      for (std::size_t i = 0; i < a->factors.size(); ++i) {
        fs.push_back(m.group(a->factors[i]).rep);
        auto it = m.embeds.find(a->via[i]);
        if (it == m.embeds.end()) fail(ErrorKind::ResolutionError, "no embedding named '" + a->via[i] + "'");
        if (it->second.source != a->over || it->second.target != a->factors[i]) {
          fail(ErrorKind::IncompatibleAmalgam, where + ": " + a->via[i] + " maps " + it->second.source + " -> " +
                                                   it->second.target + ", need " + a->over + " -> " + a->factors[i]);
        }
        es.push_back(it->second.hom);
      }
      auto spec = validate_spec(fs, m.group(a->over).rep, es, limits);
      m.amalgams.emplace(name, ResolvedAmalgam{spec, a->factors, a->over});
    } else if (auto const* w = std::get_if<WordDecl>(&st)) {
      auto const& A = m.amalgam(w->amalgam);
      AmalgamWord word;
      for (auto const& s : w->syllables) {
        std::size_t idx = 0;
        if (detail::is_digit(s.factor[0])) {
          idx = std::stoul(s.factor);
          if (idx >= A.factors.size()) {
            fail(ErrorKind::ElementOutOfRange, where + ": factor position " + s.factor + " out of range");
          }
        } else {
          std::vector<std::size_t> hits;
          for (std::size_t i = 0; i < A.factors.size(); ++i)
            if (A.factors[i] == s.factor) hits.push_back(i);
          if (hits.empty()) fail(ErrorKind::ResolutionError, where + ": '" + s.factor + "' is not a factor");
          if (hits.size() > 1) {
            fail(ErrorKind::ResolutionError, where + ": '" + s.factor + "' names several factors; use a position");
          }
          idx = hits[0];
        }
        word.syllables.push_back({idx, detail::evaluate(m.group(A.factors[idx]), s.element, where)});
      }
      m.words.emplace(name, ResolvedWord{w->amalgam, word});
    }
  }
  return m;
}

}  // namespace rsolv::dsl
