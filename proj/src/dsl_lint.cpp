#include <algorithm>
#include <set>

#include "dsl_internal.hpp"
#include "ocsis/condition.hpp"

namespace ocsis {

namespace {

using detail::make_warning;

constexpr std::size_t kMaxAssignments = 100000;

void collect_numbers(const Condition& c, const Registry& reg, std::set<double>& out) {
  if (c.kind == Condition::Kind::CmpConst) {
    if (const auto* d = std::get_if<double>(&c.constant)) out.insert(*d);
  }
  for (const auto& child : c.children) collect_numbers(child, reg, out);
}

void collect_present(const Condition& c, std::set<std::string>& out) {
  if (c.kind == Condition::Kind::Present) out.insert(c.param);
  for (const auto& child : c.children) collect_present(child, out);
}

void collect_out_of_domain(const Condition& c, const Registry& reg, std::vector<std::string>& out) {
  if (c.kind == Condition::Kind::CmpConst) {
    const auto* decl = reg.find(c.param);
    const auto* label = std::get_if<EnumLabel>(&c.constant);
    if (decl != nullptr && label != nullptr && !decl->has_label(label->label)) {
      out.push_back(c.param + " has no label " + label->label);
    }
  }
  for (const auto& child : c.children) collect_out_of_domain(child, reg, out);
}

// Candidate values for one number parameter: every constant in the
// expression, `slots` points inside each gap and `slots` points beyond each
// end. That is enough to realise any ordering of up to `slots` parameters
// against the constants.
std::vector<double> number_candidates(const std::set<double>& constants, int slots) {
  std::vector<double> out;
  if (constants.empty()) {
    for (int i = 0; i <= slots; ++i) out.push_back(i);
    return out;
  }
  std::vector<double> cs(constants.begin(), constants.end());
  for (int j = slots; j >= 1; --j) out.push_back(cs.front() - j);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    out.push_back(cs[i]);
    if (i + 1 < cs.size()) {
      for (int j = 1; j <= slots; ++j) out.push_back(cs[i] + (cs[i + 1] - cs[i]) * j / (slots + 1));
    }
  }
  for (int j = 1; j <= slots; ++j) out.push_back(cs.back() + j);
  return out;
}

enum class Satisfiability { Satisfiable, Unsatisfiable, Skipped };

Satisfiability check_satisfiable(const Condition& cond, const Registry& reg) {
  auto names = referenced_parameters(cond);
  std::set<double> constants;
  collect_numbers(cond, reg, constants);
  std::set<std::string> presence;
  collect_present(cond, presence);
  int number_params = 0;
  for (const auto& n : names) {
    if (reg.find(n)->type == ParamType::Number) ++number_params;
  }
  auto numbers = number_candidates(constants, std::max(number_params, 1));

  // Per parameter: candidate values; nullopt stands for "absent".
  std::vector<std::vector<std::optional<ParamValue>>> domains;
  std::size_t total = 1;
  for (const auto& n : names) {
    const auto* decl = reg.find(n);
    std::vector<std::optional<ParamValue>> dom;
    switch (decl->type) {
      case ParamType::Number:
        for (double d : numbers) dom.emplace_back(ParamValue{d});
        break;
      case ParamType::Bool:
        dom.emplace_back(ParamValue{false});
        dom.emplace_back(ParamValue{true});
        break;
      case ParamType::Enum:
        for (const auto& l : decl->labels) dom.emplace_back(ParamValue{EnumLabel{l}});
        break;
    }
    if (presence.count(n) != 0) dom.emplace_back(std::nullopt);
    total *= dom.size();
    if (total > kMaxAssignments) return Satisfiability::Skipped;
    domains.push_back(std::move(dom));
  }

  // Two identical states far enough apart that every Sustained node is met.
  int span = std::max(1, max_sustained(cond));
  std::vector<FlightState> history(2);
  history[0].tick = 1;
  history[1].tick = span;
  std::vector<std::size_t> odometer(names.size(), 0);
  while (true) {
    EvalContext ctx;
    for (auto& state : history) state.values.clear();
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto& value = domains[i][odometer[i]];
      if (!value) continue;
      if (names[i] == kCheckAllDone) {
        ctx.check_all_done = std::get<bool>(*value);
      } else if (names[i] == kPhaseParam) {
        auto phase = *parse_phase(std::get<EnumLabel>(*value).label);
        for (auto& state : history) state.phase = phase;
      } else {
        for (auto& state : history) state.values[names[i]] = *value;
      }
    }
    if (eval_condition(cond, history, reg, ctx) == TriState::True) return Satisfiability::Satisfiable;
    std::size_t i = 0;
    while (i < odometer.size() && ++odometer[i] == domains[i].size()) odometer[i++] = 0;
    if (i == odometer.size()) return Satisfiability::Unsatisfiable;
  }
}

class Linter {
 public:
  explicit Linter(const ProcedureSet& set) : set_(set) {}

  std::vector<Diagnostic> run() {
    for (const auto& proc : set_.procedures) {
      if ((proc.kind == ProcedureKind::Abnormal || proc.kind == ProcedureKind::Emergency) &&
          !proc.iblocks.empty()) {
        const auto& first = proc.iblocks.front();
        if (first.trigger && first.trigger->kind == Condition::Kind::True) {
          out_.push_back(make_warning(diag::kAlwaysTriggers,
                                      to_title(proc) + " triggers unconditionally",
                                      span("trigger:" + proc.id + "." + first.id, proc, first)));
        }
      }
      for (const auto& block : proc.iblocks) {
        auto key = proc.id + "." + block.id;
        if (block.trigger) clause("trigger", *block.trigger, span("trigger:" + key, proc, block));
        clause("context", block.context, span("context:" + key, proc, block));
        clause("goal", block.goal, span("goal:" + key, proc, block));
        for (std::size_t i = 0; i < block.abnormal.size(); ++i) {
          clause("abnormal branch", block.abnormal[i].condition,
                 span("abnormal:" + key + "#" + std::to_string(i), proc, block));
        }
        for (const auto& action : block.actions) {
          auto akey = proc.id + "." + action.id;
          if (action.detect) clause("detect", *action.detect, span("detect:" + akey, proc, block));
          if (action.applicability) {
            clause("applicability", *action.applicability, span("applicable:" + akey, proc, block));
          }
        }
      }
    }
    return std::move(out_);
  }

 private:
  static std::string to_title(const Procedure& p) {
    return std::string(to_string(p.kind)) + " procedure " + p.id;
  }

  SourceSpan span(const std::string& key, const Procedure& proc, const IBlock& block) const {
    if (set_.spans.count(key) != 0) return set_.spans.at(key);
    return set_.span_of("iblock:" + proc.id + "." + block.id);
  }

  void clause(std::string_view what, const Condition& cond, const SourceSpan& where) {
    std::vector<std::string> outside;
    collect_out_of_domain(cond, set_.registry, outside);
    for (const auto& msg : outside) {
      out_.push_back(make_warning(diag::kLabelOutOfDomain, std::string(what) + ": " + msg, where));
    }
    switch (check_satisfiable(cond, set_.registry)) {
      case Satisfiability::Satisfiable:
        break;
      case Satisfiability::Unsatisfiable:
        out_.push_back(make_warning(diag::kUnsatisfiable,
                                    std::string(what) + " can never hold: " + format_condition(cond),
                                    where));
        break;
      case Satisfiability::Skipped:
        out_.push_back(make_warning(diag::kSatisfiabilitySkipped,
                                    std::string(what) + " has more than 100000 assignments; not checked",
                                    where));
        break;
    }
  }

  const ProcedureSet& set_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> lint(const ProcedureSet& set) { return Linter(set).run(); }

}  // namespace ocsis
