#include "ocsis/condition.hpp"

#include "ocsis/error.hpp"

namespace ocsis {

std::string_view to_string(TriState value) {
  switch (value) {
    case TriState::False: return "False";
    case TriState::True: return "True";
    case TriState::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

void require_registered(const Condition& expr, const Registry& registry) {
  if (!expr.param.empty() && !registry.contains(expr.param)) {
    throw Error(ErrorCode::UnknownParameter, "unknown parameter " + expr.param);
  }
  if (!expr.other.empty() && !registry.contains(expr.other)) {
    throw Error(ErrorCode::UnknownParameter, "unknown parameter " + expr.other);
  }
  for (const auto& child : expr.children) require_registered(child, registry);
}

class Evaluator {
 public:
  Evaluator(std::span<const FlightState> history, const EvalContext& ctx)
      : history_(history), ctx_(ctx) {}

  // `at` indexes history; it is only meaningful when history is non-empty.
  TriState eval(const Condition& expr, std::size_t at) const {
    using Kind = Condition::Kind;
    switch (expr.kind) {
      case Kind::True:
        return TriState::True;
      case Kind::Present:
        return tri(lookup(expr.param, at).has_value());
      case Kind::CmpConst: {
        auto lhs = lookup(expr.param, at);
        if (!lhs) return TriState::Unknown;
        return compare(*lhs, expr.op, expr.constant);
      }
      case Kind::CmpParam: {
        auto lhs = lookup(expr.param, at);
        auto rhs = lookup(expr.other, at);
        if (!lhs || !rhs) return TriState::Unknown;
        return compare(*lhs, expr.op, *rhs);
      }
      case Kind::Not:
        switch (eval(expr.children.front(), at)) {
          case TriState::True: return TriState::False;
          case TriState::False: return TriState::True;
          case TriState::Unknown: return TriState::Unknown;
        }
        return TriState::Unknown;
      case Kind::And: {
        bool unknown = false;
        for (const auto& child : expr.children) {
          auto v = eval(child, at);
          if (v == TriState::False) return TriState::False;
          unknown = unknown || v == TriState::Unknown;
        }
        return unknown ? TriState::Unknown : TriState::True;
      }
      case Kind::Or: {
        bool unknown = false;
        for (const auto& child : expr.children) {
          auto v = eval(child, at);
          if (v == TriState::True) return TriState::True;
          unknown = unknown || v == TriState::Unknown;
        }
        return unknown ? TriState::Unknown : TriState::False;
      }
      case Kind::Sustained:
        return sustained(expr, at);
    }
    return TriState::Unknown;
  }

 private:
  TriState sustained(const Condition& expr, std::size_t at) const {
    const auto& child = expr.children.front();
    auto now = eval(child, at);
    if (now != TriState::True) return now;
    if (history_.empty()) return TriState::False;
    std::size_t start = at;
    while (start > 0 && eval(child, start - 1) == TriState::True) --start;
    auto held = history_[at].tick - history_[start].tick + 1;
    return tri(held >= expr.duration);
  }

  std::optional<ParamValue> lookup(const std::string& name, std::size_t at) const {
    if (name == kCheckAllDone) {
      if (!ctx_.check_all_done) return std::nullopt;
      return ParamValue{*ctx_.check_all_done};
    }
    if (history_.empty()) return std::nullopt;
    const auto& state = history_[at];
    if (name == kPhaseParam) return ParamValue{EnumLabel{std::string(to_string(state.phase))}};
    if (const auto* v = state.find(name)) return *v;
    return std::nullopt;
  }

  static TriState compare(const ParamValue& lhs, CmpOp op, const ParamValue& rhs) {
    if (lhs.index() != rhs.index()) return TriState::Unknown;
    int order = 0;
    if (const auto* a = std::get_if<double>(&lhs)) {
      double b = std::get<double>(rhs);
      order = *a < b ? -1 : (*a > b ? 1 : 0);
    } else if (const auto* a = std::get_if<bool>(&lhs)) {
      order = static_cast<int>(*a) - static_cast<int>(std::get<bool>(rhs));
    } else {
      order = std::get<EnumLabel>(lhs).label == std::get<EnumLabel>(rhs).label ? 0 : 1;
    }
    // Only numbers are ordered; validation rejects ordering on the rest.
    if (is_ordering(op) && !std::holds_alternative<double>(lhs)) return TriState::Unknown;
    switch (op) {
      case CmpOp::Eq: return tri(order == 0);
      case CmpOp::Ne: return tri(order != 0);
      case CmpOp::Lt: return tri(order < 0);
      case CmpOp::Le: return tri(order <= 0);
      case CmpOp::Gt: return tri(order > 0);
      case CmpOp::Ge: return tri(order >= 0);
    }
    return TriState::Unknown;
  }

  std::span<const FlightState> history_;
  const EvalContext& ctx_;
};

}  // namespace

TriState eval_condition(const Condition& expr, std::span<const FlightState> history,
                        const Registry& registry, const EvalContext& ctx) {
  require_registered(expr, registry);
  Evaluator evaluator(history, ctx);
  return evaluator.eval(expr, history.empty() ? 0 : history.size() - 1);
}

}  // namespace ocsis
