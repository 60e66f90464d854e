// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if
// any criterion fails.
#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "csc/capcalc.hpp"
#include "csc/metacheck.hpp"
#include "csc/print.hpp"
#include "csc/surface.hpp"
#include "csc/typer.hpp"
#include "oracle/derivation.hpp"
#include "support/corpus.hpp"
#include "support/gen.hpp"

using namespace csc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// A criterion body returns "" on success, otherwise the reason it failed,
// and may append details to `note`.
struct Criterion {
  int id;
  const char* title;
  std::function<std::string(std::ostringstream& note)> body;
};

std::string shell(const std::string& cmd, int* code) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    *code = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  *code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string verdict_matrix(std::ostringstream& note) {
  auto t0 = Clock::now();
  for (const auto& e : corpus::entries()) {
    Term t = corpus::load(e.name);
    try {
      typecheck({}, t);
      if (e.error) return e.name + " was accepted, expected " + to_string(*e.error);
    } catch (const TypeError& err) {
      if (!e.error) return e.name + " was rejected: " + err.what();
      if (err.code() != *e.error) return e.name + " got " + to_string(err.code()) + ", expected " + to_string(*e.error);
      if (err.span().line != e.line) {
        return e.name + " rejected at line " + std::to_string(err.span().line) + ", expected " + std::to_string(e.line);
      }
    }
  }
  double s = seconds_since(t0);
  note << corpus::entries().size() << " programs in " << s << " s";
  if (s >= 1.0) return "took " + std::to_string(s) + " s";
  return "";
}

std::string scripted_trace(std::ostringstream& note) {
  int code = 0;
  std::string out = shell(std::string(CSC_CLI) + " trace " + corpus::path("appendix_a2") + " --schedule scripted:" +
                              CSC_CORPUS_DIR + "/a2.sched",
                          &code);
  if (code != 0) return "exit code " + std::to_string(code);
  std::string golden = read_file(std::string(CSC_GOLDEN_DIR) + "/appendix_a2.trace");
  if (out != golden) return "trace differs from golden file";

  Schedule s = Schedule::parse_script(read_file(std::string(CSC_CORPUS_DIR) + "/a2.sched"));
  RunResult r = run(corpus::load("appendix_a2"), s, 100);
  std::vector<std::string> tail;
  for (const auto& st : r.trace) {
    std::string rule = to_string(st.redex.rule);
    if (!tail.empty() || rule == "get") tail.push_back(rule);
  }
  const std::vector<std::string> want = {"get", "get", "lift-let", "lift-let", "lift-let", "apply", "add"};
  if (tail != want) return "rule sequence after setup differs";
  if (r.final.term != Term::nat(3)) return "answer " + print_term(r.final.term);
  if (print_store(r.final.store).find("val z3↦2, val z2↦1") == std::string::npos) return "store values differ";
  note << r.trace.size() << " steps, golden match";
  return "";
}

std::string confluence(std::ostringstream& note) {
  for (const auto& e : corpus::well_typed()) {
    auto t0 = Clock::now();
    ExploreReport r = explore(corpus::load(e.name));
    double s = seconds_since(t0);
    if (r.truncated) return e.name + " truncated";
    if (r.verdict != ExploreReport::Verdict::Confluent) return e.name + " is " + to_string(r.verdict);
    if (r.answers != std::set<std::string>{e.answer}) return e.name + " has the wrong answer set";
    if (s >= 10.0) return e.name + " took " + std::to_string(s) + " s";
    note << e.name << "=" << r.states_visited << " ";
  }
  return "";
}

std::string sensitivity(std::ostringstream& note) {
  ExploreReport r = explore(corpus::load("raced"));
  note << "answers";
  for (const auto& a : r.answers) note << " " << a;
  if (r.verdict != ExploreReport::Verdict::Divergent) return std::string("verdict ") + to_string(r.verdict);
  if (r.answers != std::set<std::string>{"1", "2"}) return "unexpected answer set";
  return "";
}

std::string preservation(std::ostringstream& note) {
  std::size_t steps = 0;
  for (const auto& e : corpus::well_typed()) {
    Term t = corpus::load(e.name);
    ReplayReport r = preservation_replay(t, typecheck({}, t));
    steps += r.steps_checked;
    if (r.runs != 5) return "expected 5 schedules";
    if (!r.ok()) return e.name + ": " + r.violations[0].diagnostic;
  }
  std::size_t caught = 0;
  for (const auto& e : corpus::well_typed()) {
    Term t = corpus::load(e.name);
    ReplayOptions o;
    o.step.mutate = true;
    caught += preservation_replay(t, typecheck({}, t), o).violations.size();
  }
  note << steps << " steps re-checked, mutation caught " << caught << " times";
  if (caught == 0) return "mutation not detected";
  return "";
}

std::string progress(std::ostringstream& note) {
  auto programs = corpus::well_typed();
  std::vector<Term> terms;
  for (const auto& e : programs) terms.push_back(corpus::load(e.name));
  for (std::uint64_t i = 0; i < 500; ++i) {
    std::size_t k = i % programs.size();
    RunResult r = run(terms[k], Schedule::random(1000 + i), 5000);
    if (r.outcome != Outcome::Answer) {
      return programs[k].name + " seed " + std::to_string(1000 + i) + ": " + to_string(r.outcome);
    }
    if (print_term(r.final.term) != programs[k].answer) return programs[k].name + " gave " + print_term(r.final.term);
  }
  note << "500 runs over " << programs.size() << " programs";
  return "";
}

std::string oracle_equivalence(std::ostringstream& note) {
  auto t0 = Clock::now();
  std::size_t contexts = 0, queries = 0;
  std::string failure;
  // three term names a, b, c plus an optional type variable
  oracle::for_each_context(4, [&](const TypingContext& ctx) {
    if (!failure.empty()) return;
    ++contexts;
    oracle::Derivations d(ctx);
    const auto& sets = d.subsets();
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (std::size_t j = 0; j < sets.size(); ++j) {
        ++queries;
        if (d.subcapture(i, j) != subcapture(ctx, sets[i], sets[j])) {
          failure = ctx.to_string() + " | " + sets[i].to_string() + " <: " + sets[j].to_string();
          return;
        }
        if (d.separated(i, j) != separated_sets(ctx, sets[i], sets[j])) {
          failure = ctx.to_string() + " | " + sets[i].to_string() + " sep " + sets[j].to_string();
          return;
        }
      }
    }
  });
  double s = seconds_since(t0);
  note << contexts << " contexts, " << queries << " query pairs, " << s << " s";
  if (!failure.empty()) return "disagreement: " + failure;
  if (s >= 60.0) return "took " + std::to_string(s) + " s";
  return "";
}

std::string algebra(std::ostringstream& note) {
  constexpr int kCases = 1000;
  gen::Rng rng(4242);
  for (int i = 0; i < kCases; ++i) {
    TypingContext ctx = gen::context(rng);
    CaptureSet a = gen::captures_over(rng, ctx), b = gen::captures_over(rng, ctx), c = gen::captures_over(rng, ctx);
    if (!subcapture(ctx, a, a)) return "subcapture reflexivity";
    CaptureSet ab = a.united(b);
    if (!subcapture(ctx, a, ab)) return "subcapture inclusion";
    if (subcapture(ctx, a, b) && subcapture(ctx, b, c) && !subcapture(ctx, a, c)) return "subcapture transitivity";
    if ((subcapture(ctx, a, c) && subcapture(ctx, b, c)) != subcapture(ctx, ab, c)) return "subcapture join";
    if (separated_sets(ctx, a, b) != separated_sets(ctx, b, a)) return "separation symmetry";
    if (subcapture(ctx, a, b) && separated_sets(ctx, b, c) && !separated_sets(ctx, a, c)) {
      return "separation not monotone: " + ctx.to_string();
    }
  }
  for (int i = 0; i < kCases; ++i) {
    Store s = gen::store(rng, 8);
    Store t = gen::shuffled(rng, s), u = gen::shuffled(rng, t), other = gen::store(rng, 8);
    if (!store_equiv(s, s) || !store_equiv(s, t) || !store_equiv(t, s) || !store_equiv(s, u)) {
      return "store_equiv laws";
    }
    if (store_equiv(s, other) != store_equiv(other, s)) return "store_equiv symmetry";
    for (const auto& e : s.entries()) {
      if (e.kind != StoreBinding::Kind::VarInit) continue;
      // naive scan: the VarInit value, overwritten by every later Set
      Term want = e.value;
      bool after = false;
      for (const auto& f : s.entries()) {
        if (f.name != e.name) continue;
        if (f.kind == StoreBinding::Kind::VarInit) after = true;
        if (f.kind == StoreBinding::Kind::Set && after) want = f.value;
      }
      if (lookup_var(s, e.name) != want) return "lookup_var disagrees with scan";
    }
  }
  note << kCases << " cases per suite";
  return "";
}

std::string races(std::ostringstream& note) {
  std::size_t runs = 0;
  for (const auto& e : corpus::well_typed()) {
    Term t = corpus::load(e.name);
    for (const auto& s : default_replay_schedules()) {
      ++runs;
      RaceReport rep = race_monitor(run(t, s, 5000));
      if (!rep.races.empty()) return e.name + " races under " + s.describe();
    }
  }
  RaceReport raced = race_monitor(run(corpus::load("raced"), Schedule::left_first(), 1000));
  note << runs << " race-free runs; raced fixture: " << raced.races.size() << " pair";
  if (raced.races.size() != 1) return "raced fixture reported " + std::to_string(raced.races.size()) + " pairs";
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments restrict the run to the listed criterion numbers.
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<Criterion> all = {
      {1, "corpus verdict matrix", verdict_matrix},
      {2, "scripted trace reproduction", scripted_trace},
      {3, "confluence of well-typed programs", confluence},
      {4, "explorer detects divergence", sensitivity},
      {5, "preservation replay", preservation},
      {6, "progress under random schedules", progress},
      {7, "oracle equivalence", oracle_equivalence},
      {8, "algebraic property suites", algebra},
      {9, "dynamic race monitor", races},
  };
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    std::ostringstream note;
    std::string why;
    try {
      why = c.body(note);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    if (why.empty()) {
      std::cout << "PASS " << c.id << " " << c.title << " (" << note.str() << ")\n";
    } else {
      ++failed;
      std::cout << "FAIL " << c.id << " " << c.title << ": " << why << "\n";
    }
    std::cout.flush();
  }
  return failed == 0 ? 0 : 1;
}
