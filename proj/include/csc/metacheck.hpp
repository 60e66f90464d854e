// Empirical metatheory: interleaving exploration, store equivalence,
// preservation replay against store-derived contexts, and a dynamic race
// monitor over run traces.
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csc/context.hpp"
#include "csc/runtime.hpp"
#include "csc/typer.hpp"

namespace csc {

// Val/VarInit entries sorted, the full multiset of Set entries sorted, and
// each mutable variable's current value. Two stores have equal canonical
// forms iff they are equivalent.
std::string canonical_store(const Store& s);
bool store_equiv(const Store& a, const Store& b);

// Canonical encoding of a configuration, including fresh-name counters.
std::string state_key(const Configuration& c);

struct ExploreOptions {
  std::size_t max_states = 100000;
  std::size_t max_steps = 2000;
};

struct ExploreReport {
  enum class Verdict { Confluent, Divergent, Inconclusive };

  std::set<std::string> answers;
  std::size_t store_classes = 0;
  std::size_t stuck_states = 0;
  std::size_t states_visited = 0;
  std::size_t terminal_states = 0;
  bool truncated = false;
  Verdict verdict = Verdict::Inconclusive;
  // For Divergent: two shortest witness schedules (redex sequences) whose
  // terminals differ, and the two terminal configurations as text.
  std::vector<std::vector<Redex>> witnesses;
  std::vector<std::string> witness_terminals;
  // Every terminal configuration reached.
  std::vector<std::string> terminals;
};

const char* to_string(ExploreReport::Verdict v);

ExploreReport explore(const Term& t, const ExploreOptions& opts = {});

class PreservationViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Types the store via st-val / st-var / st-set. Throws PreservationViolation
// if a binding does not type.
TypingContext store_context(const Store& s);

struct ReplayViolation {
  std::string schedule;
  std::size_t step = 0;
  Rule rule = Rule::Apply;
  std::string diagnostic;
};

struct ReplayReport {
  std::size_t runs = 0;
  std::size_t steps_checked = 0;
  std::vector<ReplayViolation> violations;
  bool ok() const { return violations.empty(); }
};

struct ReplayOptions {
  std::vector<Schedule> schedules;  // empty: left-first, right-first, random x3
  std::size_t max_steps = 2000;
  StepOptions step;
  // Stop at the first violation per schedule.
  bool first_only = true;
};

std::vector<Schedule> default_replay_schedules();

// Runs t under each schedule and re-typechecks every intermediate
// configuration against `expected` under the store-derived context.
ReplayReport preservation_replay(const Term& t, const Type& expected, const ReplayOptions& opts = {});

struct RacePair {
  AccessEvent first;
  AccessEvent second;
};

struct RaceReport {
  std::vector<RacePair> races;
  std::size_t events = 0;
};

// Two accesses to the same variable race when at least one writes and they
// run on opposite sides of the same parallel let. Sides are tracked across
// the whole run, so a body that keeps running after its let was lifted
// still counts as the right-hand thread.
RaceReport race_monitor(const RunResult& run);

}  // namespace csc
