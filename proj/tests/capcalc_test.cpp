#include <gtest/gtest.h>

#include "csc/capcalc.hpp"
#include "csc/surface.hpp"
#include "support/gen.hpp"

using namespace csc;

namespace {

CaptureSet S(std::initializer_list<const char*> atoms) {
  CaptureSet c;
  for (std::string a : atoms) {
    if (a == "cap") c.insert(CaptureAtom::cap());
    else if (a == "rdr") c.insert(CaptureAtom::rdr());
    else c.insert(CaptureAtom::var(a));
  }
  return c;
}

Type T(const std::string& s) { return parse_type(s); }

TypingContext reader_ctx() {
  return TypingContext()
      .extend_term("c", {}, T("Ref[Nat]^"))
      .extend_term("cr", {}, T("Rdr[Nat]^{c}"));
}

}  // namespace

TEST(Cv, Clauses) {
  EXPECT_EQ(cv(parse_term("box x")), S({}));
  EXPECT_EQ(cv(parse_term("x := y")), S({"x", "y"}));
  EXPECT_EQ(cv(parse_term("reader x")), S({"x"}));
  EXPECT_EQ(cv(parse_term("x")), S({"x"}));
  EXPECT_EQ(cv(parse_term("f x")), S({"f", "x"}));
  EXPECT_EQ(cv(parse_term("f[Nat]")), S({"f"}));
  EXPECT_EQ(cv(parse_term("read r")), S({"r"}));
  EXPECT_EQ(cv(parse_term("unbox {a, b} x")), S({"a", "b", "x"}));
  EXPECT_EQ(cv(parse_term("7")), S({}));
  EXPECT_EQ(cv(parse_term("x + y")), S({"x", "y"}));
  EXPECT_EQ(cv(parse_term("fn(z: Nat) => f z")), S({"f"}));
  EXPECT_EQ(cv(parse_term("tfn[X <: Top] => f[X]")), S({"f"}));
  EXPECT_EQ(cv(parse_term("var m := y in m := z")), S({"y", "z"}));
}

TEST(Cv, LetDropsUnusedValueBinding) {
  // x is a value not mentioned by the body
  EXPECT_EQ(cv(parse_term("let x = reader a in b")), S({"b"}));
  // ...but kept when the body mentions it
  EXPECT_EQ(cv(parse_term("let x = reader a in x")), S({"a"}));
  // ...and kept when the binding is not a value
  EXPECT_EQ(cv(parse_term("let x = read a in b")), S({"a", "b"}));
  EXPECT_EQ(cv(parse_term("letpar x = read a in read b")), S({"a", "b"}));
}

TEST(Promote, FollowsBounds) {
  TypingContext ctx = TypingContext()
                          .extend_type("X", ShapeType::rdr(ShapeType::nat()))
                          .extend_type("Y", ShapeType::tvar("X"));
  EXPECT_EQ(promote(ctx, ShapeType::tvar("Y")), ShapeType::rdr(ShapeType::nat()));
  EXPECT_EQ(promote(ctx, ShapeType::nat()), ShapeType::nat());
  EXPECT_EQ(promote(ctx, ShapeType::tvar("Z")), ShapeType::tvar("Z"));
}

TEST(IsReader, Judgment) {
  TypingContext ctx = reader_ctx()
                          .extend_type("X", ShapeType::rdr(ShapeType::nat()))
                          .extend_term("x", {}, Type(ShapeType::tvar("X")))
                          .extend_term("a", {}, T("Ref[Nat]^"));
  EXPECT_TRUE(is_reader(ctx, "cr"));
  EXPECT_TRUE(is_reader(ctx, "x"));
  EXPECT_FALSE(is_reader(ctx, "a"));
  EXPECT_FALSE(is_reader(ctx, "c"));
  EXPECT_THROW(is_reader(ctx, "nope"), UnboundAtom);
}

TEST(Subcapture, Examples) {
  TypingContext empty;
  EXPECT_TRUE(subcapture(empty, S({"rdr"}), S({"cap"})));
  EXPECT_FALSE(subcapture(empty, S({"cap"}), S({"rdr"})));
  EXPECT_TRUE(subcapture(empty, S({}), S({})));
  EXPECT_TRUE(subcapture(reader_ctx(), S({"cr"}), S({"rdr"})));
  EXPECT_TRUE(subcapture(reader_ctx(), S({"cr"}), S({"c"})));
  EXPECT_FALSE(subcapture(reader_ctx(), S({"c"}), S({"rdr"})));
  TypingContext yx = TypingContext().extend_term("y", {}, T("Top")).extend_term("x", {}, T("Top^{y}"));
  EXPECT_TRUE(subcapture(yx, S({"x"}), S({"y"})));
  // y captures nothing, so it is below anything
  EXPECT_TRUE(subcapture(yx, S({"y"}), S({"x"})));
  EXPECT_TRUE(subcapture(yx, S({"x"}), S({})));
  TypingContext capped = TypingContext().extend_term("y", {}, T("Top^")).extend_term("x", {}, T("Top^{y}"));
  EXPECT_TRUE(subcapture(capped, S({"x"}), S({"y"})));
  EXPECT_FALSE(subcapture(capped, S({"y"}), S({"x"})));
  EXPECT_FALSE(subcapture(capped, S({"x"}), S({})));
}

TEST(Subcapture, UnboundAtomsThrow) {
  EXPECT_THROW(subcapture(TypingContext(), S({"x"}), S({"cap"})), UnboundAtom);
  EXPECT_THROW(subcapture(reader_ctx(), S({"c"}), S({"zz"})), UnboundAtom);
  EXPECT_THROW(subcapture(reader_ctx(), S({"zz"}), S({"zz"})), UnboundAtom);
}

class SubcaptureLaws : public ::testing::Test {
 protected:
  gen::Rng rng{2024};
  static constexpr int kCases = 1000;
};

TEST_F(SubcaptureLaws, Reflexivity) {
  for (int i = 0; i < kCases; ++i) {
    TypingContext ctx = gen::context(rng);
    CaptureSet c = gen::captures_over(rng, ctx);
    ASSERT_TRUE(subcapture(ctx, c, c)) << ctx.to_string() << " " << c.to_string();
  }
}

TEST_F(SubcaptureLaws, Inclusion) {
  for (int i = 0; i < kCases; ++i) {
    TypingContext ctx = gen::context(rng);
    CaptureSet big = gen::captures_over(rng, ctx);
    CaptureSet small;
    for (const auto& a : big) {
      if (gen::coin(rng)) small.insert(a);
    }
    ASSERT_TRUE(subcapture(ctx, small, big)) << ctx.to_string() << " " << small.to_string() << " " << big.to_string();
  }
}

TEST_F(SubcaptureLaws, Transitivity) {
  int chains = 0;
  for (int i = 0; i < kCases; ++i) {
    TypingContext ctx = gen::context(rng);
    CaptureSet c1 = gen::captures_over(rng, ctx), c2 = gen::captures_over(rng, ctx), c3 = gen::captures_over(rng, ctx);
    if (subcapture(ctx, c1, c2) && subcapture(ctx, c2, c3)) {
      ++chains;
      ASSERT_TRUE(subcapture(ctx, c1, c3)) << ctx.to_string() << " " << c1.to_string() << " " << c2.to_string() << " "
                                           << c3.to_string();
    }
  }
  EXPECT_GT(chains, kCases / 10);
}

TEST_F(SubcaptureLaws, Join) {
  for (int i = 0; i < kCases; ++i) {
    TypingContext ctx = gen::context(rng);
    CaptureSet c1 = gen::captures_over(rng, ctx), c2 = gen::captures_over(rng, ctx), c = gen::captures_over(rng, ctx);
    bool both = subcapture(ctx, c1, c) && subcapture(ctx, c2, c);
    ASSERT_EQ(both, subcapture(ctx, c1.united(c2), c));
  }
}

TEST_F(SubcaptureLaws, EverythingIsBelowCap) {
  for (int i = 0; i < kCases; ++i) {
    TypingContext ctx = gen::context(rng);
    ASSERT_TRUE(subcapture(ctx, gen::captures_over(rng, ctx), CaptureSet::universal()));
  }
}

TEST_F(SubcaptureLaws, CaptureSetIrrelevantForReaders) {
  for (int i = 0; i < kCases; ++i) {
    TypingContext ctx = gen::context(rng);
    for (const auto& b : ctx.bindings()) {
      const auto* t = std::get_if<TermBinding>(&b);
      if (!t) continue;
      bool shape_reader = is_reader_shape(ctx, t->type.shape);
      ASSERT_EQ(is_reader(ctx, t->name), shape_reader);
    }
  }
}

TEST_F(SubcaptureLaws, BelowRdrMatchesGenericCheck) {
  for (int i = 0; i < 1000; ++i) {
    TypingContext ctx = gen::context(rng);
    CaptureSet atoms = gen::captures_over(rng, ctx, 0.5);
    for (const auto& a : atoms) {
      ASSERT_EQ(below_rdr(ctx, a), subcapture_atom(ctx, a, CaptureSet::singleton(CaptureAtom::rdr())))
          << ctx.to_string() << " " << a.to_string();
    }
  }
}
