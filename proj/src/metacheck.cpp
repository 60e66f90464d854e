#include "csc/metacheck.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "csc/capcalc.hpp"
#include "csc/print.hpp"

namespace csc {

std::string canonical_store(const Store& s) {
  std::vector<std::string> defs, sets;
  std::set<Name> vars;
  for (const auto& e : s.entries()) {
    std::string v = print_term(e.value);
    switch (e.kind) {
      case StoreBinding::Kind::Val: defs.push_back("val " + e.name + "=" + v); break;
      case StoreBinding::Kind::VarInit:
        defs.push_back("var " + e.name + "=" + v);
        vars.insert(e.name);
        break;
      case StoreBinding::Kind::Set: sets.push_back(e.name + "=" + v); break;
    }
  }
  std::sort(defs.begin(), defs.end());
  std::sort(sets.begin(), sets.end());
  std::string out;
  for (const auto& d : defs) out += d + ";";
  out += "|";
  for (const auto& d : sets) out += d + ";";
  out += "|";
  for (const auto& x : vars) out += x + "=" + print_term(lookup_var(s, x)) + ";";
  return out;
}

bool store_equiv(const Store& a, const Store& b) { return canonical_store(a) == canonical_store(b); }

std::string state_key(const Configuration& c) {
  std::string out = print_term(c.term);
  out += "\n";
  out += canonical_store(c.store);
  out += "\n";
  for (const auto& [k, v] : c.fresh) out += k + ":" + std::to_string(v) + ";";
  return out;
}

const char* to_string(ExploreReport::Verdict v) {
  switch (v) {
    case ExploreReport::Verdict::Confluent: return "Confluent";
    case ExploreReport::Verdict::Divergent: return "Divergent";
    case ExploreReport::Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

// ------------------------------------------------------------------ explore

namespace {

struct Node {
  Configuration config;
  std::size_t parent;
  std::optional<Redex> via;
  std::size_t depth;
};

std::vector<Redex> path_to(const std::vector<Node>& nodes, std::size_t id) {
  std::vector<Redex> out;
  while (nodes[id].via) {
    out.push_back(*nodes[id].via);
    id = nodes[id].parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

ExploreReport explore(const Term& t, const ExploreOptions& opts) {
  ExploreReport rep;
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  std::deque<std::size_t> frontier;

  Configuration init(t);
  seen.emplace(state_key(init), 0);
  nodes.push_back({init, 0, std::nullopt, 0});
  frontier.push_back(0);

  // First terminal per answer and per store class, in BFS order.
  std::map<std::string, std::size_t> by_answer, by_class;

  while (!frontier.empty()) {
    std::size_t id = frontier.front();
    frontier.pop_front();
    std::vector<Redex> redexes = enabled_redexes(nodes[id].config);
    if (redexes.empty()) {
      const Configuration& c = nodes[id].config;
      ++rep.terminal_states;
      rep.terminals.push_back(print_config(c));
      if (!is_answer_config(c)) {
        ++rep.stuck_states;
        continue;
      }
      std::string answer = print_term(c.term);
      rep.answers.insert(answer);
      by_answer.emplace(answer, id);
      by_class.emplace(canonical_store(c.store), id);
      continue;
    }
    if (nodes[id].depth >= opts.max_steps) {
      rep.truncated = true;
      continue;
    }
    for (const auto& r : redexes) {
      StepResult sr = step_redex(nodes[id].config, r);
      std::string key = state_key(sr.config);
      if (seen.count(key)) continue;
      if (nodes.size() >= opts.max_states) {
        rep.truncated = true;
        break;
      }
      seen.emplace(std::move(key), nodes.size());
      nodes.push_back({std::move(sr.config), id, r, nodes[id].depth + 1});
      frontier.push_back(nodes.size() - 1);
    }
  }

  rep.states_visited = nodes.size();
  rep.store_classes = by_class.size();
  if (rep.answers.size() >= 2 || rep.store_classes >= 2) {
    rep.verdict = ExploreReport::Verdict::Divergent;
    const auto& src = rep.answers.size() >= 2 ? by_answer : by_class;
    std::vector<std::size_t> ids;
    for (const auto& [_, id] : src) ids.push_back(id);
    std::sort(ids.begin(), ids.end());  // BFS ids grow with depth
    for (std::size_t k = 0; k < 2; ++k) {
      rep.witnesses.push_back(path_to(nodes, ids[k]));
      rep.witness_terminals.push_back(print_config(nodes[ids[k]].config));
    }
  } else if (!rep.truncated && rep.stuck_states == 0 && rep.answers.size() == 1 && rep.store_classes == 1) {
    rep.verdict = ExploreReport::Verdict::Confluent;
  } else {
    rep.verdict = ExploreReport::Verdict::Inconclusive;
  }
  return rep;
}

// ---------------------------------------------------------- store typing

TypingContext store_context(const Store& s) {
  TypingContext ctx;
  for (const auto& e : s.entries()) {
    try {
      switch (e.kind) {
        case StoreBinding::Kind::Val: {
          Type v = typecheck(ctx, e.value);
          ctx = ctx.extend_term(e.name, {}, Type(v.shape, cv(e.value)));
          break;
        }
        case StoreBinding::Kind::VarInit: {
          Type v = typecheck(ctx, e.value);
          if (!subtype(ctx, v, Type(v.shape))) {
            throw PreservationViolation("initial value of '" + e.name + "' is not pure: " + print_type(v));
          }
          ctx = ctx.extend_term(e.name, SeparationDegree(ctx.term_domain()),
                                Type(ShapeType::ref(v.shape), CaptureSet::universal()));
          break;
        }
        case StoreBinding::Kind::Set: {
          const TermBinding* b = ctx.find_term(e.name);
          const auto* ref = b ? b->type.shape.as<shape::Ref>() : nullptr;
          if (!ref) throw PreservationViolation("set of '" + e.name + "' which is not a mutable variable");
          Type v = typecheck(ctx, e.value);
          if (!subtype(ctx, v, Type(ref->inner))) {
            throw PreservationViolation("value set to '" + e.name + "' has type " + print_type(v) +
                                        ", expected " + print_shape(ref->inner));
          }
          break;
        }
      }
    } catch (const TypeError& err) {
      throw PreservationViolation("store binding '" + e.name + "' does not type: " + std::string(to_string(err.code())) +
                                  ": " + err.what());
    }
  }
  return ctx;
}

std::vector<Schedule> default_replay_schedules() {
  return {Schedule::left_first(), Schedule::right_first(), Schedule::random(1), Schedule::random(2),
          Schedule::random(3)};
}

ReplayReport preservation_replay(const Term& t, const Type& expected, const ReplayOptions& opts) {
  ReplayReport rep;
  std::vector<Schedule> schedules = opts.schedules.empty() ? default_replay_schedules() : opts.schedules;
  for (const auto& sched : schedules) {
    ++rep.runs;
    std::string name = sched.describe();
    RunResult run_res = run(t, sched, opts.max_steps, opts.step);
    for (const auto& st : run_res.trace) {
      ++rep.steps_checked;
      std::string diag;
      try {
        TypingContext ctx = store_context(st.after.store);
        Type u = typecheck(ctx, st.after.term);
        if (!subtype(ctx, u, expected)) {
          diag = "residual type " + print_type(u) + " is not a subtype of " + print_type(expected);
        }
      } catch (const PreservationViolation& e) {
        diag = e.what();
      } catch (const TypeError& e) {
        diag = std::string(to_string(e.code())) + ": " + e.what();
      }
      if (!diag.empty()) {
        rep.violations.push_back({name, st.index, st.redex.rule, diag});
        if (opts.first_only) break;
      }
    }
    if (run_res.outcome == Outcome::Stuck) {
      rep.violations.push_back({name, run_res.trace.size(), Rule::Apply, "run got stuck"});
    }
  }
  return rep;
}

// --------------------------------------------------------------- races

namespace {

// Thread labels: the chain of (parallel-let instance, side) pairs an access
// runs under. Paths alone are not enough, because lifting a parallel let
// moves its still-running body up to the let's own position.
using Label = std::vector<std::pair<std::size_t, FocusStep::Kind>>;

bool has_prefix(const FocusPath& p, const FocusPath& pre) {
  return p.size() >= pre.size() && std::equal(pre.begin(), pre.end(), p.begin());
}

const Term* term_at(const Term& t, const FocusPath& p) {
  const Term* cur = &t;
  for (const auto& st : p) {
    const auto* l = cur->as<term::Let>();
    if (!l || l->name != st.binder) return nullptr;
    cur = st.kind == FocusStep::Kind::IntoBinding ? &l->bound : &l->body;
  }
  return cur;
}

class ThreadTracker {
 public:
  ThreadTracker() { regions_[{}] = {}; }

  Label label_of(const FocusPath& p) {
    std::size_t k = p.size();
    FocusPath pre = p;
    while (!regions_.count(pre)) {
      pre.pop_back();
      --k;
    }
    Label out = regions_[pre];
    for (std::size_t i = k; i < p.size(); ++i) {
      out.emplace_back(instance(FocusPath(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(i))), p[i].kind);
    }
    return out;
  }

  void lift(const FocusPath& at, const Name& x, bool par) {
    Label right;
    if (par) {
      right = label_of(at);
      right.emplace_back(instance(at), FocusStep::Kind::IntoBody);
    }
    FocusPath bind = at, body = at;
    bind.push_back({FocusStep::Kind::IntoBinding, x});
    body.push_back({FocusStep::Kind::IntoBody, x});
    auto repath = [&](auto& m) {
      std::decay_t<decltype(m)> next;
      for (auto& [k, v] : m) {
        if (has_prefix(k, bind)) continue;
        if (has_prefix(k, body)) {
          FocusPath moved = at;
          moved.insert(moved.end(), k.begin() + static_cast<std::ptrdiff_t>(body.size()), k.end());
          next[moved] = v;
        } else {
          next[k] = v;
        }
      }
      m = std::move(next);
    };
    instances_.erase(at);
    repath(instances_);
    repath(regions_);
    if (par) regions_[at] = right;
  }

  // Any other rule replaces the redex at `at` wholesale.
  void replace(const FocusPath& at) {
    instances_.erase(at);
    std::erase_if(instances_, [&](const auto& kv) { return kv.first.size() > at.size() && has_prefix(kv.first, at); });
    std::erase_if(regions_, [&](const auto& kv) { return kv.first.size() > at.size() && has_prefix(kv.first, at); });
  }

 private:
  std::size_t instance(const FocusPath& at) {
    auto [it, fresh] = instances_.emplace(at, next_);
    if (fresh) ++next_;
    return it->second;
  }

  std::map<FocusPath, Label> regions_;
  std::map<FocusPath, std::size_t> instances_;
  std::size_t next_ = 0;
};

bool concurrent(const Label& a, const Label& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == b[i]) continue;
    return a[i].first == b[i].first && a[i].second != b[i].second;
  }
  return false;
}

}  // namespace

RaceReport race_monitor(const RunResult& run) {
  RaceReport rep;
  ThreadTracker threads;
  std::vector<std::pair<const AccessEvent*, Label>> events;
  const Configuration* before = &run.initial;
  for (const auto& st : run.trace) {
    for (const auto& e : st.events) events.emplace_back(&e, threads.label_of(e.focus));
    const Term* redex = term_at(before->term, st.redex.path);
    const auto* let = redex ? redex->as<term::Let>() : nullptr;
    if (st.redex.rule == Rule::LiftLet && let) {
      threads.lift(st.redex.path, let->name, let->mode == LetMode::Par);
    } else {
      threads.replace(st.redex.path);
    }
    before = &st.after;
  }
  rep.events = events.size();
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      const AccessEvent& a = *events[i].first;
      const AccessEvent& b = *events[j].first;
      if (a.variable != b.variable) continue;
      if (a.kind != AccessEvent::Kind::WriteVar && b.kind != AccessEvent::Kind::WriteVar) continue;
      if (concurrent(events[i].second, events[j].second)) rep.races.push_back({a, b});
    }
  }
  return rep;
}

}  // namespace csc
