#include "csc/surface.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "csc/print.hpp"
#include "csc/subst.hpp"

namespace csc {

std::string Diagnostic::render(const std::string& path) const {
  std::ostringstream out;
  out << path;
  if (span.known()) out << ":" << span.line << ":" << span.column;
  out << ": " << (severity == Severity::Error ? "error" : "warning") << "[" << code << "]: " << message;
  return out.str();
}

ParseError::ParseError(Diagnostic d) : std::runtime_error(d.message), diag_(std::move(d)) {}

std::string pretty(const Term& t) { return print_term(t); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error("cannot read " + path);
  return ss.str();
}

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBrack,
  RBrack,
  LBrace,
  RBrace,
  Comma,
  Colon,
  Assign,  // :=
  SubOp,   // <:
  Arrow,   // =>
  Eq,
  Caret,
  ParBar,  // ||
  Plus,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"let",  "letpar", "in",     "var", "sep", "fn",  "tfn",
                                          "unbox", "box",   "reader", "read", "forall", "Top", "Nat",
                                          "Ref",  "Rdr",    "Box",    "cap", "rdr"};
  return k;
}

[[noreturn]] void fail(const std::string& code, const std::string& msg, Span span) {
  throw ParseError(Diagnostic{Severity::Error, code, msg, span});
}

bool reserved_ident(const std::string& s) { return s[0] == '_' || s.find('%') != std::string::npos; }

std::vector<Token> lex(const std::string& src, bool allow_reserved) {
  std::vector<Token> out;
  std::uint32_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto ident_char = [&](char c) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') return true;
    return allow_reserved && (c == '%' || c == '.');
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n' || c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Span sp{line, col, 1};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || (allow_reserved && c == '%')) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string text = src.substr(i, j - i);
      if (!allow_reserved && reserved_ident(text)) {
        fail("ReservedName", "identifier '" + text + "' is reserved for generated names", {line, col, uint32_t(j - i)});
      }
      sp.length = static_cast<std::uint32_t>(j - i);
      advance(j - i);
      out.push_back({Tok::Ident, std::move(text), sp});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && ident_char(src[j]) && !std::isdigit(static_cast<unsigned char>(src[j]))) {
        fail("LexError", "malformed number", sp);
      }
      sp.length = static_cast<std::uint32_t>(j - i);
      std::string text = src.substr(i, j - i);
      advance(j - i);
      out.push_back({Tok::Number, std::move(text), sp});
      continue;
    }
    auto two = [&](char a, char b) { return c == a && i + 1 < src.size() && src[i + 1] == b; };
    Tok kind;
    std::size_t len = 1;
    if (two(':', '=')) {
      kind = Tok::Assign;
      len = 2;
    } else if (two('<', ':')) {
      kind = Tok::SubOp;
      len = 2;
    } else if (two('=', '>')) {
      kind = Tok::Arrow;
      len = 2;
    } else if (two('|', '|')) {
      kind = Tok::ParBar;
      len = 2;
    } else {
      switch (c) {
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '[': kind = Tok::LBrack; break;
        case ']': kind = Tok::RBrack; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case ',': kind = Tok::Comma; break;
        case ':': kind = Tok::Colon; break;
        case '=': kind = Tok::Eq; break;
        case '^': kind = Tok::Caret; break;
        case '+': kind = Tok::Plus; break;
        default:
          fail("LexError", std::string("unexpected character '") + c + "'", sp);
      }
    }
    sp.length = static_cast<std::uint32_t>(len);
    out.push_back({kind, src.substr(i, len), sp});
    advance(len);
  }
  out.push_back({Tok::End, "", {line, col, 0}});
  return out;
}

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

// Operands that must be variables are bound to temporaries first.
struct Lifts {
  std::vector<std::pair<Name, Term>> binds;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, bool allow_reserved) : toks_(std::move(toks)), allow_reserved_(allow_reserved) {
    for (const auto& t : toks_) {
      if (t.kind == Tok::Ident) used_.insert(t.text);
    }
  }

  Term program() {
    if (peek().kind == Tok::End) fail("ParseError", "empty program", peek().span);
    Term t = term();
    expect_end();
    return t;
  }

  Type type_only() {
    Type t = type();
    expect_end();
    return t;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_kw(const char* kw, std::size_t k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == kw; }
  bool at(Tok kind) const { return peek().kind == kind; }

  void expect_end() {
    if (!at(Tok::End)) fail("ParseError", "unexpected " + describe(peek()) + " after end of term", peek().span);
  }

  const Token& expect(Tok kind, const char* what) {
    if (!at(kind)) fail("ParseError", std::string("expected ") + what + ", found " + describe(peek()), peek().span);
    return next();
  }

  void expect_kw(const char* kw) {
    if (!at_kw(kw)) fail("ParseError", std::string("expected '") + kw + "', found " + describe(peek()), peek().span);
    next();
  }

  Name ident(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || keywords().count(t.text)) {
      fail("ParseError", std::string("expected ") + what + ", found " + describe(t), t.span);
    }
    next();
    return t.text;
  }

  Name fresh() {
    for (;;) {
      Name n = "_" + std::to_string(++counter_);
      if (used_.insert(n).second) return n;
    }
  }

  bool starts_simple() const {
    const Token& t = peek();
    if (t.kind == Tok::Number || t.kind == Tok::LParen) return true;
    return t.kind == Tok::Ident && !keywords().count(t.text);
  }

  // ---- terms ----

  Term term() {
    Span sp = peek().span;
    if (at_kw("let") || at_kw("letpar")) {
      LetMode mode = at_kw("letpar") ? LetMode::Par : LetMode::Seq;
      next();
      Name x = ident("binder name");
      expect(Tok::Eq, "'='");
      Term bound = term();
      expect_kw("in");
      Term body = term();
      return Term::let(mode, x, bound, body).with_span(sp);
    }
    if (at_kw("var")) {
      next();
      Name x = ident("variable name");
      SeparationDegree d = opt_degree();
      expect(Tok::Assign, "':='");
      Lifts lifts;
      Name init = atomize(simple(), lifts);
      expect_kw("in");
      Term body = term();
      return wrap(lifts, Term::dvar(x, d, init, body).with_span(sp));
    }
    if (at_kw("fn")) {
      next();
      expect(Tok::LParen, "'('");
      Name x = ident("parameter name");
      SeparationDegree d = opt_degree();
      expect(Tok::Colon, "':'");
      Type ty = type();
      expect(Tok::RParen, "')'");
      expect(Tok::Arrow, "'=>'");
      Term body = term();
      return Term::lam(x, d, ty, body).with_span(sp);
    }
    if (at_kw("tfn")) {
      next();
      expect(Tok::LBrack, "'['");
      Name x = ident("type parameter");
      expect(Tok::SubOp, "'<:'");
      ShapeType bound = shape();
      expect(Tok::RBrack, "']'");
      expect(Tok::Arrow, "'=>'");
      Term body = term();
      return Term::tlam(x, bound, body).with_span(sp);
    }
    return par();
  }

  Term par() {
    Span sp = peek().span;
    Term left = app();
    if (!at(Tok::ParBar)) return left;
    next();
    Term right = par();
    return Term::let(LetMode::Par, fresh(), left, right).with_span(sp);
  }

  Term app() {
    Span sp = peek().span;
    Lifts lifts;
    auto operand = [&] { return atomize(simple(), lifts); };
    if (at_kw("box")) {
      next();
      return wrap(lifts, Term::box(operand()).with_span(sp));
    }
    if (at_kw("reader")) {
      next();
      return wrap(lifts, Term::reader(operand()).with_span(sp));
    }
    if (at_kw("read")) {
      next();
      return wrap(lifts, Term::read(operand()).with_span(sp));
    }
    if (at_kw("unbox")) {
      next();
      CaptureSet c = capture_set();
      return wrap(lifts, Term::unbox(c, operand()).with_span(sp));
    }
    if (!starts_simple()) fail("ParseError", "expected a term, found " + describe(peek()), peek().span);

    Term head = simple();
    if (at(Tok::Assign)) {
      next();
      Name target = atomize(head, lifts);
      Name value = operand();
      return wrap(lifts, Term::write(target, value).with_span(sp));
    }
    Term acc = chain(head, lifts, sp);
    while (at(Tok::Plus)) {
      next();
      Name lhs = atomize(acc, lifts);
      Span rsp = peek().span;
      if (!starts_simple()) fail("ParseError", "expected an operand after '+'", peek().span);
      Term rhs = chain(simple(), lifts, rsp);
      acc = Term::add(lhs, atomize(rhs, lifts)).with_span(sp);
    }
    return wrap(lifts, acc);
  }

  // simple (simple | [shape])*, left-associative
  Term chain(Term head, Lifts& lifts, Span sp) {
    Term acc = std::move(head);
    for (;;) {
      if (at(Tok::LBrack)) {
        next();
        ShapeType s = shape();
        expect(Tok::RBrack, "']'");
        acc = Term::tapp(atomize(acc, lifts), s).with_span(sp);
      } else if (starts_simple()) {
        Name f = atomize(acc, lifts);
        Name a = atomize(simple(), lifts);
        acc = Term::app(f, a).with_span(sp);
      } else {
        return acc;
      }
    }
  }

  Term simple() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      std::uint64_t v = 0;
      try {
        v = std::stoull(t.text);
      } catch (const std::out_of_range&) {
        fail("LexError", "number literal out of range", t.span);
      }
      return Term::nat(v).with_span(t.span);
    }
    if (t.kind == Tok::LParen) {
      next();
      Term inner = term();
      expect(Tok::RParen, "')'");
      return inner;
    }
    Span sp = t.span;
    return Term::var(ident("a variable")).with_span(sp);
  }

  Name atomize(const Term& t, Lifts& lifts) {
    if (const auto* v = t.as<term::Var>()) return v->name;
    Name n = fresh();
    lifts.binds.emplace_back(n, t);
    return n;
  }

  Term wrap(Lifts& lifts, Term core) {
    for (auto it = lifts.binds.rbegin(); it != lifts.binds.rend(); ++it) {
      Span sp = it->second.span();
      core = Term::let(LetMode::Seq, it->first, it->second, core).with_span(sp);
    }
    lifts.binds.clear();
    return core;
  }

  // ---- capture sets and degrees ----

  CaptureSet capture_set() {
    expect(Tok::LBrace, "'{'");
    std::vector<CaptureAtom> atoms;
    if (!at(Tok::RBrace)) {
      for (;;) {
        if (at_kw("cap")) {
          next();
          atoms.push_back(CaptureAtom::cap());
        } else if (at_kw("rdr")) {
          next();
          atoms.push_back(CaptureAtom::rdr());
        } else {
          atoms.push_back(CaptureAtom::var(ident("a capture atom")));
        }
        if (!at(Tok::Comma)) break;
        next();
      }
    }
    expect(Tok::RBrace, "'}'");
    return CaptureSet(std::move(atoms));
  }

  SeparationDegree opt_degree() {
    if (!at_kw("sep")) return {};
    next();
    expect(Tok::LBrace, "'{'");
    std::vector<CaptureAtom> atoms;
    if (!at(Tok::RBrace)) {
      for (;;) {
        if (at_kw("cap") || at_kw("rdr")) {
          fail("DegreeContainsRoot", "separation degree cannot mention '" + peek().text + "'", peek().span);
        }
        atoms.push_back(CaptureAtom::var(ident("a variable")));
        if (!at(Tok::Comma)) break;
        next();
      }
    }
    expect(Tok::RBrace, "'}'");
    return SeparationDegree(CaptureSet(std::move(atoms)));
  }

  // ---- types ----

  Type type() {
    ShapeType s = shape();
    if (!at(Tok::Caret)) return Type(s);
    next();
    if (!at(Tok::LBrace)) return Type(s, CaptureSet::universal());
    return Type(s, capture_set());
  }

  ShapeType shape() {
    if (at(Tok::LParen)) {
      next();
      ShapeType s = shape();
      expect(Tok::RParen, "')'");
      return s;
    }
    if (at_kw("Top")) {
      next();
      return ShapeType::top();
    }
    if (at_kw("Nat")) {
      next();
      return ShapeType::nat();
    }
    if (at_kw("Ref") || at_kw("Rdr")) {
      bool ref = at_kw("Ref");
      next();
      expect(Tok::LBrack, "'['");
      ShapeType inner = shape();
      expect(Tok::RBrack, "']'");
      return ref ? ShapeType::ref(inner) : ShapeType::rdr(inner);
    }
    if (at_kw("Box")) {
      next();
      expect(Tok::LBrack, "'['");
      Type inner = type();
      expect(Tok::RBrack, "']'");
      return ShapeType::box(inner);
    }
    if (at_kw("forall")) {
      next();
      if (at(Tok::LParen)) {
        next();
        Name x = ident("parameter name");
        SeparationDegree d = opt_degree();
        expect(Tok::Colon, "':'");
        Type param = type();
        expect(Tok::RParen, "')'");
        Type result = type();
        return ShapeType::fun(x, d, param, result);
      }
      expect(Tok::LBrack, "'(' or '['");
      Name x = ident("type parameter");
      expect(Tok::SubOp, "'<:'");
      ShapeType bound = shape();
      expect(Tok::RBrack, "']'");
      Type body = type();
      return ShapeType::tfun(x, bound, body);
    }
    return ShapeType::tvar(ident("a type"));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  bool allow_reserved_;
  std::set<std::string> used_;
  unsigned counter_ = 0;
};

}  // namespace

Term parse_term(const std::string& src, const ParseOptions& opts) {
  Parser p(lex(src, opts.allow_reserved), opts.allow_reserved);
  Term t = p.program();
  return opts.normalize ? alpha_normalize(t) : t;
}

Type parse_type(const std::string& src, const ParseOptions& opts) {
  Parser p(lex(src, opts.allow_reserved), opts.allow_reserved);
  return p.type_only();
}

}  // namespace csc
