// Random generators shared by the property suites and the acceptance runner.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "csc/ast.hpp"
#include "csc/context.hpp"
#include "csc/runtime.hpp"

namespace csc::gen {

using Rng = std::mt19937_64;

inline std::size_t below(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& one_of(Rng& rng, const std::vector<T>& xs) {
  return xs[below(rng, xs.size())];
}

inline std::vector<Name> term_names(const TypingContext& ctx) {
  std::vector<Name> out;
  for (const auto& a : ctx.term_domain()) out.push_back(a.name());
  return out;
}

// Any subset of the given names, plus each root with probability p_root.
inline CaptureSet subset(Rng& rng, const std::vector<Name>& names, double p_root = 0.25, double p_in = 0.4) {
  CaptureSet c;
  for (const auto& n : names) {
    if (coin(rng, p_in)) c.insert(CaptureAtom::var(n));
  }
  if (coin(rng, p_root)) c.insert(CaptureAtom::cap());
  if (coin(rng, p_root)) c.insert(CaptureAtom::rdr());
  return c;
}

inline CaptureSet captures_over(Rng& rng, const TypingContext& ctx, double p_root = 0.25) {
  return subset(rng, term_names(ctx), p_root);
}

// A well-formed context of up to max_terms term bindings v0, v1, ... and
// optionally one type variable X bounded by a reference-like shape. Each
// binding captures and is separated from earlier bindings only.
inline TypingContext context(Rng& rng, std::size_t max_terms = 5, bool with_tvar = true) {
  TypingContext ctx;
  bool tvar = with_tvar && coin(rng);
  if (tvar) ctx = ctx.extend_type("X", coin(rng) ? ShapeType::rdr(ShapeType::nat()) : ShapeType::ref(ShapeType::nat()));
  std::size_t n = below(rng, max_terms + 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<ShapeType> shapes = {ShapeType::nat(), ShapeType::ref(ShapeType::nat()), ShapeType::rdr(ShapeType::nat())};
    if (tvar) shapes.push_back(ShapeType::tvar("X"));
    std::vector<Name> earlier = term_names(ctx);
    SeparationDegree degree(subset(rng, earlier, 0.0));
    Type t(one_of(rng, shapes), subset(rng, earlier));
    ctx = ctx.extend_term("v" + std::to_string(i), degree, t);
  }
  return ctx;
}

// Stores over a few mutable variables with mixed Val / VarInit / Set entries.
inline Store store(Rng& rng, std::size_t max_entries = 10) {
  Store s;
  std::vector<Name> vars;
  std::size_t n = below(rng, max_entries + 1);
  for (std::size_t i = 0; i < n; ++i) {
    Term v = Term::nat(below(rng, 4));
    switch (below(rng, 3)) {
      case 0: s.append({StoreBinding::Kind::Val, "x" + std::to_string(i), v}); break;
      case 1:
        vars.push_back("m" + std::to_string(i));
        s.append({StoreBinding::Kind::VarInit, vars.back(), v});
        break;
      default:
        if (vars.empty()) break;
        s.append({StoreBinding::Kind::Set, one_of(rng, vars), v});
    }
  }
  return s;
}

// A store of the same content with independent Val/VarInit entries moved
// around and Sets to different variables interleaved differently. Same-
// variable Set order is kept, so the result is equivalent.
inline Store shuffled(Rng& rng, const Store& s) {
  std::vector<StoreBinding> defs, sets;
  for (const auto& e : s.entries()) (e.kind == StoreBinding::Kind::Set ? sets : defs).push_back(e);
  std::shuffle(defs.begin(), defs.end(), rng);
  // Stable random merge of per-variable Set queues.
  std::vector<StoreBinding> out = defs;
  std::vector<StoreBinding> pending = sets;
  while (!pending.empty()) {
    std::vector<std::size_t> heads;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      bool first = true;
      for (std::size_t j = 0; j < i; ++j) first = first && pending[j].name != pending[i].name;
      if (first) heads.push_back(i);
    }
    std::size_t k = one_of(rng, heads);
    out.push_back(pending[k]);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return Store(out);
}

}  // namespace csc::gen

namespace csc::gen {

// Random A-normal terms with pairwise-distinct binders that never clash with
// the free names f0..f2, so alpha-normalization leaves them unchanged.
class TermGen {
 public:
  explicit TermGen(Rng& rng) : rng_(rng) {}

  Term term(std::size_t depth) { return term(depth, {"f0", "f1", "f2"}, {}); }
  Type type(std::size_t depth) { return type(depth, {"f0", "f1", "f2"}, {}); }

 private:
  Name fresh(const char* base) { return base + std::to_string(next_++); }

  CaptureSet caps(const std::vector<Name>& terms) { return subset(rng_, terms, 0.2, 0.3); }
  SeparationDegree degree(const std::vector<Name>& terms) { return SeparationDegree(subset(rng_, terms, 0.0, 0.2)); }

  ShapeType shape(std::size_t depth, const std::vector<Name>& terms, const std::vector<Name>& tvars) {
    std::size_t pick = below(rng_, depth == 0 ? 3 : 8);
    switch (pick) {
      case 0: return ShapeType::nat();
      case 1: return ShapeType::top();
      case 2: return tvars.empty() ? ShapeType::nat() : ShapeType::tvar(one_of(rng_, tvars));
      case 3: return ShapeType::ref(shape(depth - 1, terms, tvars));
      case 4: return ShapeType::rdr(shape(depth - 1, terms, tvars));
      case 5: return ShapeType::box(type(depth - 1, terms, tvars));
      case 6: {
        Name p = fresh("p");
        Type pt = type(depth - 1, terms, tvars);
        SeparationDegree d = degree(terms);
        std::vector<Name> inner = terms;
        inner.push_back(p);
        return ShapeType::fun(p, d, pt, type(depth - 1, inner, tvars));
      }
      default: {
        Name x = fresh("T");
        ShapeType b = shape(depth - 1, terms, tvars);
        std::vector<Name> inner = tvars;
        inner.push_back(x);
        return ShapeType::tfun(x, b, type(depth - 1, terms, inner));
      }
    }
  }

  Type type(std::size_t depth, const std::vector<Name>& terms, const std::vector<Name>& tvars) {
    return Type(shape(depth, terms, tvars), caps(terms));
  }

  Term term(std::size_t depth, const std::vector<Name>& terms, const std::vector<Name>& tvars) {
    auto var = [&] { return one_of(rng_, terms); };
    std::size_t pick = below(rng_, depth == 0 ? 10 : 15);
    switch (pick) {
      case 0: return Term::var(var());
      case 1: return Term::box(var());
      case 2: return Term::reader(var());
      case 3: return Term::app(var(), var());
      case 4: return Term::tapp(var(), shape(1, terms, tvars));
      case 5: return Term::unbox(subset(rng_, terms, 0.0, 0.3), var());
      case 6: return Term::read(var());
      case 7: return Term::write(var(), var());
      case 8: return Term::nat(below(rng_, 100));
      case 9: return Term::add(var(), var());
      case 10:
      case 11: {
        Name x = fresh("x");
        Term bound = term(depth - 1, terms, tvars);
        std::vector<Name> inner = terms;
        inner.push_back(x);
        return Term::let(coin(rng_) ? LetMode::Seq : LetMode::Par, x, bound, term(depth - 1, inner, tvars));
      }
      case 12: {
        Name x = fresh("x");
        Type pt = type(1, terms, tvars);
        SeparationDegree d = degree(terms);
        std::vector<Name> inner = terms;
        inner.push_back(x);
        return Term::lam(x, d, pt, term(depth - 1, inner, tvars));
      }
      case 13: {
        Name tv = fresh("T");
        ShapeType b = shape(1, terms, tvars);
        std::vector<Name> inner = tvars;
        inner.push_back(tv);
        return Term::tlam(tv, b, term(depth - 1, terms, inner));
      }
      default: {
        Name x = fresh("m");
        SeparationDegree d = degree(terms);
        Name init = var();
        std::vector<Name> inner = terms;
        inner.push_back(x);
        return Term::dvar(x, d, init, term(depth - 1, inner, tvars));
      }
    }
  }

  Rng& rng_;
  std::size_t next_ = 0;
};

}  // namespace csc::gen
