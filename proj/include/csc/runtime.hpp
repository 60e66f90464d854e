// Stores, evaluation contexts, reduction and schedulers.
//
// Parallelism is modelled by choice: enabled_redexes lists every hole
// position where a rule fires, and a Schedule picks one per step.
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csc/ast.hpp"

namespace csc {

struct StoreBinding {
  enum class Kind : std::uint8_t { Val, VarInit, Set };
  Kind kind;
  Name name;
  Term value;

  bool operator==(const StoreBinding&) const = default;
};

class RuntimeError : public std::runtime_error {
 public:
  enum class Kind { MissingVal, MissingVar, DuplicateBinding, InvalidChoice, RuleViolation };
  RuntimeError(Kind kind, std::string message) : std::runtime_error(std::move(message)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class Store {
 public:
  Store() = default;
  explicit Store(std::vector<StoreBinding> entries) : entries_(std::move(entries)) {}

  const std::vector<StoreBinding>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Throws DuplicateBinding for a second Val/VarInit of a name, and
  // MissingVar for a Set without a preceding VarInit.
  void append(StoreBinding b);

  bool has_val(const Name& x) const { return find_val(x) != nullptr; }
  bool has_var(const Name& x) const;
  const Term* find_val(const Name& x) const;
  // Names bound by Val or VarInit.
  bool defines(const Name& x) const;

  bool operator==(const Store&) const = default;

 private:
  std::vector<StoreBinding> entries_;
};

// sigma(val x). Throws MissingVal.
Term lookup_val(const Store& s, const Name& x);
// sigma(var x): latest Set after the VarInit, else the VarInit value.
// Throws MissingVar.
Term lookup_var(const Store& s, const Name& x);

struct FocusStep {
  enum class Kind : std::uint8_t { IntoBinding, IntoBody };
  Kind kind;
  Name binder;

  auto operator<=>(const FocusStep&) const = default;
};
using FocusPath = std::vector<FocusStep>;

std::string to_string(const FocusPath& p);

enum class Rule : std::uint8_t { Apply, TApply, Open, Get, LiftLet, Rename, LiftVar, LiftSet, Add };
const char* to_string(Rule r);

struct Redex {
  FocusPath path;
  Rule rule;
  bool operator==(const Redex&) const = default;
};

struct Configuration {
  Store store;
  Term term;
  // Per-thread fresh-name counters, keyed by the nearest enclosing binding
  // focus ("0" at the root). Keeps generated names schedule-independent.
  std::map<Name, std::uint32_t> fresh;

  explicit Configuration(Term t) : term(std::move(t)) {}
  Configuration(Store s, Term t) : store(std::move(s)), term(std::move(t)) {}
};

std::string print_store(const Store& s);
// "sigma | t"
std::string print_config(const Configuration& c);

struct AccessEvent {
  enum class Kind : std::uint8_t { ReadVar, WriteVar };
  Kind kind;
  Name variable;
  FocusPath focus;
  std::size_t step = 0;
};

struct StepOptions {
  // Mutation testing: apply and rename skip their substitution.
  bool mutate = false;
};

struct StepResult {
  Configuration config;
  Redex redex;
  std::vector<AccessEvent> events;
};

std::vector<Redex> enabled_redexes(const Configuration& c);
// Throws RuntimeError{InvalidChoice} when choice is out of range.
StepResult step(const Configuration& c, std::size_t choice, const StepOptions& opts = {});
StepResult step_redex(const Configuration& c, const Redex& r, const StepOptions& opts = {});

bool is_answer_config(const Configuration& c);

class Schedule {
 public:
  enum class Kind { LeftFirst, RightFirst, Random, Scripted };

  static Schedule left_first() { return Schedule(Kind::LeftFirst); }
  static Schedule right_first() { return Schedule(Kind::RightFirst); }
  static Schedule random(std::uint64_t seed);
  // Once the choices run out the schedule continues left-first.
  static Schedule scripted(std::vector<std::size_t> choices);
  // Whitespace-separated indices; '#' starts a comment.
  static Schedule parse_script(const std::string& text);

  Kind kind() const { return kind_; }
  std::string describe() const;

  // Picks an index into `enabled` (non-empty). Scripted choices out of
  // range throw RuntimeError{InvalidChoice}.
  std::size_t choose(const std::vector<Redex>& enabled);

 private:
  explicit Schedule(Kind k) : kind_(k) {}

  Kind kind_;
  std::uint64_t state_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::size_t> script_;
  std::size_t pos_ = 0;
};

enum class Outcome { Answer, Stuck, StepLimit };
const char* to_string(Outcome o);

struct TraceStep {
  std::size_t index = 0;  // 1-based
  Redex redex;
  std::vector<AccessEvent> events;
  Configuration after;
};

struct RunResult {
  Outcome outcome = Outcome::Answer;
  Configuration initial;
  Configuration final;
  std::vector<TraceStep> trace;
};

RunResult run(const Term& t, Schedule sched, std::size_t max_steps, const StepOptions& opts = {});

}  // namespace csc
