#include "derivation.hpp"

#include <algorithm>
#include <stdexcept>

namespace oracle {

using csc::CaptureAtom;
using csc::CaptureSet;
using csc::ShapeType;
using csc::TypingContext;

Derivations::Derivations(const TypingContext& ctx) {
  for (const auto& b : ctx.bindings()) {
    if (const auto* t = std::get_if<csc::TermBinding>(&b)) atoms_.push_back(CaptureAtom::var(t->name));
  }
  atoms_.push_back(CaptureAtom::cap());
  atoms_.push_back(CaptureAtom::rdr());
  if (atoms_.size() > 6) throw std::invalid_argument("oracle universe too large");

  std::size_t n = atoms_.size();
  for (Mask m = 0; m < (Mask(1) << n); ++m) {
    CaptureSet c;
    for (std::size_t i = 0; i < n; ++i) {
      if (m & (Mask(1) << i)) c.insert(atoms_[i]);
    }
    sets_.push_back(c);
  }
  captures_.assign(n, 0);
  degree_.assign(n, 0);
  is_var_.assign(n, false);
  reader_.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!atoms_[i].is_var()) continue;
    const auto* b = ctx.find_term(atoms_[i].name());
    is_var_[i] = true;
    captures_[i] = mask(b->type.captures);
    degree_[i] = mask(b->degree.set());
    reader_[i] = rdr_shape(ctx, b->type.shape);
  }
  saturate_sub();
  saturate_sep();
}

Derivations::Mask Derivations::mask(const CaptureSet& c) const {
  Mask m = 0;
  for (const auto& a : c) {
    bool found = false;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (atoms_[i] == a) {
        m |= Mask(1) << i;
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("atom outside the oracle universe: " + a.to_string());
  }
  return m;
}

// Rdr[S]^C is a reader type; so is X^C when X's bound is.
bool Derivations::rdr_shape(const TypingContext& ctx, const ShapeType& s) const {
  if (s.as<csc::shape::Rdr>()) return true;
  if (const auto* v = s.as<csc::shape::TVar>()) {
    const auto* b = ctx.find_type(v->name);
    return b && rdr_shape(ctx, b->bound);
  }
  return false;
}

namespace {

bool singleton(std::uint32_t c) { return c != 0 && (c & (c - 1)) == 0; }
std::size_t index_of(std::uint32_t c) { return static_cast<std::size_t>(__builtin_ctz(c)); }

}  // namespace

void Derivations::saturate_sub() {
  std::size_t n = atoms_.size(), m = sets_.size();
  const Row all_sets = m == 64 ? ~Row(0) : (Row(1) << m) - 1;
  sub_.assign(m, 0);
  Mask cap = mask({CaptureAtom::cap()}), rdr = mask({CaptureAtom::rdr()});
  auto has = [&](Mask c1, Mask c2) { return (sub_[c1] >> c2) & 1; };
  for (bool changed = true; changed;) {
    changed = false;
    ++rounds_;
    for (Mask c1 = 0; c1 < m; ++c1) {
      Row before = sub_[c1];
      if (singleton(c1)) {
        std::size_t i = index_of(c1);
        // sc-elem
        for (Mask c2 = 0; c2 < m; ++c2) {
          if (c2 & c1) sub_[c1] |= Row(1) << c2;
        }
        // sc-var, sc-rdr-cap, sc-reader
        if (is_var_[i]) sub_[c1] |= Row(1) << captures_[i];
        if (c1 == rdr) sub_[c1] |= Row(1) << cap;
        if (is_var_[i] && reader_[i]) sub_[c1] |= Row(1) << rdr;
      }
      // sc-set: c1 <: c2 when every member's singleton is
      Row every = all_sets;
      for (std::size_t i = 0; i < n; ++i) {
        if (c1 & (Mask(1) << i)) every &= sub_[Mask(1) << i];
      }
      sub_[c1] |= every;
      // sc-trans
      for (Mask mid = 0; mid < m; ++mid) {
        if (has(c1, mid)) sub_[c1] |= sub_[mid];
      }
      changed = changed || sub_[c1] != before;
    }
  }
}

void Derivations::saturate_sep() {
  std::size_t n = atoms_.size(), m = sets_.size();
  const Row all_sets = m == 64 ? ~Row(0) : (Row(1) << m) - 1;
  sep_.assign(m, 0);
  Mask rdr = mask({CaptureAtom::rdr()});
  auto sub = [&](Mask c1, Mask c2) { return (sub_[c1] >> c2) & 1; };
  auto has = [&](Mask c1, Mask c2) { return (sep_[c1] >> c2) & 1; };
  for (bool changed = true; changed;) {
    changed = false;
    ++rounds_;
    for (Mask c1 = 0; c1 < m; ++c1) {
      Row before = sep_[c1];
      // ni-set
      Row every = all_sets;
      for (std::size_t i = 0; i < n; ++i) {
        if (c1 & (Mask(1) << i)) every &= sep_[Mask(1) << i];
      }
      sep_[c1] |= every;
      for (Mask c2 = 0; c2 < m; ++c2) {
        if (has(c1, c2)) continue;
        // ni-symm
        bool ok = has(c2, c1);
        // ni-degree, ni-var, ni-reader on singletons
        if (!ok && singleton(c1) && singleton(c2)) {
          std::size_t i = index_of(c1);
          ok = (is_var_[i] && (degree_[i] & c2)) || (is_var_[i] && has(captures_[i], c2)) ||
               (sub(c1, rdr) && sub(c2, rdr));
        }
        if (ok) sep_[c1] |= Row(1) << c2;
      }
      changed = changed || sep_[c1] != before;
    }
  }
}

bool Derivations::subcapture(const CaptureSet& c1, const CaptureSet& c2) const { return (sub_[mask(c1)] >> mask(c2)) & 1; }

bool Derivations::separated(const CaptureSet& c1, const CaptureSet& c2) const { return (sep_[mask(c1)] >> mask(c2)) & 1; }

namespace {

void extend_terms(const TypingContext& ctx, std::size_t i, std::size_t max_terms, bool tvar,
                  const std::function<void(const TypingContext&)>& visit) {
  visit(ctx);
  static const char* names[] = {"a", "b", "c"};
  if (i == max_terms) return;
  std::vector<ShapeType> shapes = {ShapeType::ref(ShapeType::nat()), ShapeType::rdr(ShapeType::nat())};
  if (tvar) shapes.push_back(ShapeType::tvar("X"));
  std::vector<CaptureAtom> pool;
  for (std::size_t k = 0; k < i; ++k) pool.push_back(CaptureAtom::var(names[k]));
  std::size_t vars = pool.size();
  pool.push_back(CaptureAtom::cap());
  pool.push_back(CaptureAtom::rdr());
  for (const auto& s : shapes) {
    for (unsigned cm = 0; cm < (1u << pool.size()); ++cm) {
      CaptureSet caps;
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (cm & (1u << k)) caps.insert(pool[k]);
      }
      for (unsigned dm = 0; dm < (1u << vars); ++dm) {
        CaptureSet deg;
        for (std::size_t k = 0; k < vars; ++k) {
          if (dm & (1u << k)) deg.insert(pool[k]);
        }
        extend_terms(ctx.extend_term(names[i], csc::SeparationDegree(deg), csc::Type(s, caps)), i + 1, max_terms, tvar, visit);
      }
    }
  }
}

}  // namespace

void for_each_context(std::size_t names, const std::function<void(const TypingContext&)>& visit) {
  if (names > 4) throw std::invalid_argument("at most three term names and X");
  extend_terms(TypingContext(), 0, std::min<std::size_t>(names, 3), false, visit);
  if (names < 2) return;
  for (const auto& bound : {ShapeType::ref(ShapeType::nat()), ShapeType::rdr(ShapeType::nat())}) {
    extend_terms(TypingContext().extend_type("X", bound), 0, names - 1, true, visit);
  }
}

}  // namespace oracle
