// csc <check|run|trace|explore> FILE [options]
//
// Exit codes: 0 ok/confluent, 1 type error, 2 parse error, 3 stuck,
// 4 divergent, 5 IO, 6 budget exhausted.
#include <unistd.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <json.hpp>

#include "csc/metacheck.hpp"
#include "csc/print.hpp"
#include "csc/runtime.hpp"
#include "csc/surface.hpp"
#include "csc/typer.hpp"

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kTypeError = 1, kParseError = 2, kStuck = 3, kDivergent = 4, kIO = 5, kBudget = 6 };

constexpr std::size_t kTraceWidth = 96;

struct Invocation {
  std::string command;
  std::string path;
  std::string schedule = "left-first";
  std::uint64_t seed = 0;
  std::size_t max_steps = 2000;
  std::size_t max_states = 100000;
  bool unsafe = false;
  bool trace_full = false;
  bool mutate = false;
  std::string format = "text";
};

bool use_color() {
  if (const char* env = std::getenv("CSC_COLOR")) return std::string(env) == "1";
  return isatty(fileno(stderr)) != 0;
}

std::string paint(const std::string& s, const char* code) {
  static const bool on = use_color();
  return on ? std::string("\033[") + code + "m" + s + "\033[0m" : s;
}

json span_json(const csc::Span& s) { return {{"line", s.line}, {"column", s.column}, {"length", s.length}}; }

json diag_json(const std::string& code, const std::string& message, const csc::Span& span, bool extension = false) {
  json j = {{"severity", "error"}, {"code", code}, {"message", message}};
  j.update(span_json(span));
  if (extension) j["extension"] = true;
  return j;
}

json path_json(const csc::FocusPath& p) {
  json arr = json::array();
  for (const auto& s : p) {
    arr.push_back({{"into", s.kind == csc::FocusStep::Kind::IntoBinding ? "binding" : "body"}, {"binder", s.binder}});
  }
  return arr;
}

json store_json(const csc::Store& s) {
  json arr = json::array();
  for (const auto& e : s.entries()) {
    const char* kind = e.kind == csc::StoreBinding::Kind::Val       ? "val"
                       : e.kind == csc::StoreBinding::Kind::VarInit ? "var"
                                                                    : "set";
    arr.push_back({{"kind", kind}, {"name", e.name}, {"value", csc::print_term(e.value)}});
  }
  return arr;
}

class Driver {
 public:
  explicit Driver(Invocation inv) : inv_(std::move(inv)), json_(inv_.format == "json") {}

  int run() {
    std::string src;
    try {
      src = csc::read_file(inv_.path);
    } catch (const std::exception& e) {
      return fail(kIO, "IOError", e.what(), {});
    }
    std::optional<csc::Term> term;
    try {
      term = csc::parse_term(src);
    } catch (const csc::ParseError& e) {
      return fail(kParseError, e.diagnostic().code, e.diagnostic().message, e.diagnostic().span);
    }
    out_["file"] = inv_.path;
    out_["command"] = inv_.command;

    std::optional<csc::Type> type;
    if (inv_.command == "check" || !inv_.unsafe) {
      try {
        type = csc::typecheck({}, *term);
      } catch (const csc::TypeError& e) {
        return fail(kTypeError, csc::to_string(e.code()), e.what(), e.span());
      }
      out_["type"] = csc::print_type(*type);
    }
    if (inv_.command == "check") {
      text_ << csc::print_type(*type) << "\n";
      return done(kOk);
    }
    if (inv_.command == "explore") return explore(*term);
    return execute(*term);
  }

 private:
  int fail(int code, const std::string& diag_code, const std::string& message, const csc::Span& span) {
    if (json_) {
      out_["file"] = inv_.path;
      out_["command"] = inv_.command;
      out_["diagnostics"] = json::array({diag_json(diag_code, message, span)});
      return done(code);
    }
    csc::Diagnostic d{csc::Severity::Error, diag_code, message, span};
    std::string line = d.render(inv_.path);
    std::cerr << paint(line, "31") << "\n";
    return done(code);
  }

  int done(int code) {
    if (json_) {
      out_["exit"] = code;
      out_["ok"] = code == kOk;
      std::cout << out_.dump(2) << "\n";
    } else {
      std::cout << text_.str();
    }
    return code;
  }

  std::optional<csc::Schedule> schedule(int* err) {
    const std::string& s = inv_.schedule;
    if (s == "left-first") return csc::Schedule::left_first();
    if (s == "right-first") return csc::Schedule::right_first();
    if (s == "random") return csc::Schedule::random(inv_.seed);
    if (s.rfind("scripted:", 0) == 0) {
      std::string file = s.substr(9);
      try {
        return csc::Schedule::parse_script(csc::read_file(file));
      } catch (const csc::RuntimeError& e) {
        *err = fail(kParseError, "BadSchedule", e.what(), {});
      } catch (const std::exception& e) {
        *err = fail(kIO, "IOError", e.what(), {});
      }
      return std::nullopt;
    }
    *err = fail(kParseError, "BadSchedule", "unknown schedule '" + s + "'", {});
    return std::nullopt;
  }

  int execute(const csc::Term& term) {
    int err = 0;
    auto sched = schedule(&err);
    if (!sched) return err;
    csc::StepOptions opts;
    opts.mutate = inv_.mutate;
    std::optional<csc::RunResult> maybe;
    try {
      maybe = csc::run(term, *sched, inv_.max_steps, opts);
    } catch (const csc::RuntimeError& e) {
      return fail(kStuck, "RuntimeError", e.what(), {});
    }
    const csc::RunResult& res = *maybe;
    bool tracing = inv_.command == "trace";
    out_["schedule"] = sched->describe();
    out_["outcome"] = csc::to_string(res.outcome);
    out_["steps"] = res.trace.size();
    if (tracing) {
      json steps = json::array();
      text_ << format_step(0, "init", "[]", res.initial) << "\n";
      for (const auto& st : res.trace) {
        text_ << format_step(st.index, csc::to_string(st.redex.rule), csc::to_string(st.redex.path), st.after)
              << "\n";
        json js = {{"step", st.index},
                   {"rule", csc::to_string(st.redex.rule)},
                   {"focus", path_json(st.redex.path)},
                   {"term", csc::print_term(st.after.term)}};
        if (inv_.trace_full) js["store"] = store_json(st.after.store);
        json ev = json::array();
        for (const auto& e : st.events) {
          ev.push_back({{"kind", e.kind == csc::AccessEvent::Kind::ReadVar ? "read" : "write"},
                        {"variable", e.variable}});
        }
        if (!ev.empty()) js["events"] = ev;
        steps.push_back(js);
      }
      out_["trace"] = steps;
      text_ << "final: " << csc::print_config(res.final) << "\n";
    }
    out_["store"] = store_json(res.final.store);
    out_["term"] = csc::print_term(res.final.term);
    switch (res.outcome) {
      case csc::Outcome::Answer:
        out_["answer"] = csc::print_term(res.final.term);
        if (!tracing) text_ << csc::print_term(res.final.term) << "\n";
        return done(kOk);
      case csc::Outcome::Stuck:
        text_ << "stuck: " << csc::print_config(res.final) << "\n";
        return done(kStuck);
      case csc::Outcome::StepLimit:
        text_ << "step limit " << inv_.max_steps << " reached\n";
        return done(kBudget);
    }
    return done(kStuck);
  }

  std::string format_step(std::size_t n, const std::string& rule, const std::string& path,
                          const csc::Configuration& c) const {
    char head[64];
    std::snprintf(head, sizeof head, "%3zu  %-9s", n, rule.c_str());
    std::string body = inv_.trace_full ? csc::print_config(c) : csc::elide(csc::print_term(c.term), kTraceWidth);
    return std::string(head) + "  " + path + "  " + body;
  }

  int explore(const csc::Term& term) {
    csc::ExploreOptions opts;
    opts.max_states = inv_.max_states;
    opts.max_steps = inv_.max_steps;
    csc::ExploreReport rep = csc::explore(term, opts);
    json answers = json::array();
    for (const auto& a : rep.answers) answers.push_back(a);
    out_["verdict"] = csc::to_string(rep.verdict);
    out_["answers"] = answers;
    out_["storeClasses"] = rep.store_classes;
    out_["statesVisited"] = rep.states_visited;
    out_["terminalStates"] = rep.terminal_states;
    out_["stuckStates"] = rep.stuck_states;
    out_["truncated"] = rep.truncated;
    text_ << "verdict: " << csc::to_string(rep.verdict) << "\n";
    text_ << "answers:";
    for (const auto& a : rep.answers) text_ << " " << a;
    text_ << "\nstore classes: " << rep.store_classes << "\n";
    text_ << "states visited: " << rep.states_visited << "\n";
    text_ << "terminal states: " << rep.terminal_states << " (" << rep.stuck_states << " stuck)\n";
    text_ << "truncated: " << (rep.truncated ? "yes" : "no") << "\n";
    json wits = json::array();
    for (std::size_t i = 0; i < rep.witnesses.size(); ++i) {
      json w = json::array();
      text_ << "witness " << i + 1 << ":";
      for (const auto& r : rep.witnesses[i]) {
        text_ << " " << csc::to_string(r.rule) << "@" << csc::to_string(r.path);
        w.push_back({{"rule", csc::to_string(r.rule)}, {"focus", path_json(r.path)}});
      }
      text_ << "\n  => " << rep.witness_terminals[i] << "\n";
      wits.push_back({{"steps", w}, {"terminal", rep.witness_terminals[i]}});
    }
    if (!wits.empty()) out_["witnesses"] = wits;
    switch (rep.verdict) {
      case csc::ExploreReport::Verdict::Confluent: return done(kOk);
      case csc::ExploreReport::Verdict::Divergent: return done(kDivergent);
      case csc::ExploreReport::Verdict::Inconclusive: break;
    }
    // Stuck terminals also make the verdict inconclusive; the report says which.
    return done(kBudget);
  }

  Invocation inv_;
  bool json_;
  json out_ = json::object();
  std::ostringstream text_;
};

}  // namespace

int main(int argc, char** argv) {
  Invocation inv;
  CLI::App app{"capture separation calculus: check, run, trace and explore programs"};
  app.add_option("command", inv.command, "check | run | trace | explore")
      ->required()
      ->check(CLI::IsMember({"check", "run", "trace", "explore"}));
  app.add_option("file", inv.path, "program (.csc)")->required();
  app.add_option("--schedule", inv.schedule, "left-first | right-first | random | scripted:FILE");
  app.add_option("--seed", inv.seed, "seed for --schedule random");
  app.add_option("--max-steps", inv.max_steps, "step budget");
  app.add_option("--max-states", inv.max_states, "state budget for explore");
  app.add_flag("--unsafe", inv.unsafe, "skip type checking before run/trace/explore");
  app.add_option("--format", inv.format, "text | json")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--trace-full", inv.trace_full, "print whole configurations in traces");
  app.add_flag("--mutate", inv.mutate, "mutation testing: corrupt substitution in apply/rename");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kParseError;
  }
  return Driver(inv).run();
}
