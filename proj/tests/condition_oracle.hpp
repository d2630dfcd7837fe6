#pragma once

// Brute-force three-valued oracle for conditions over four booleans.

#include <array>
#include <memory>
#include <vector>

#include "ocsis/condition.hpp"

namespace testing::kleene {

using namespace ocsis;

inline Registry bool_registry() {
  Registry r;
  for (const char* n : {"A", "B", "C", "D"}) r.declare(ParamDecl{n, ParamType::Bool, {}, ""});
  return r;
}

// Expression over four booleans, kept apart from Condition so the oracle
// never shares code with the evaluator.
struct Expr {
  enum Op { Var, Top, Not, And, Or } op = Top;
  int var = 0;
  std::shared_ptr<Expr> l, r;
};
using ExprPtr = std::shared_ptr<Expr>;

// Truth values as 0 = false, 1 = unknown, 2 = true: Kleene conjunction is
// min, disjunction max, negation 2 - x.
inline int oracle(const Expr& e, const std::array<int, 4>& vars) {
  switch (e.op) {
    case Expr::Var: return vars[e.var];
    case Expr::Top: return 2;
    case Expr::Not: return 2 - oracle(*e.l, vars);
    case Expr::And: return std::min(oracle(*e.l, vars), oracle(*e.r, vars));
    case Expr::Or: return std::max(oracle(*e.l, vars), oracle(*e.r, vars));
  }
  return 1;
}

inline Condition lower(const Expr& e) {
  static const char* names[] = {"A", "B", "C", "D"};
  switch (e.op) {
    case Expr::Var: return Condition::compare(names[e.var], CmpOp::Eq, true);
    case Expr::Top: return Condition::truth();
    case Expr::Not: return Condition::negate(lower(*e.l));
    case Expr::And: return Condition::all({lower(*e.l), lower(*e.r)});
    case Expr::Or: return Condition::any({lower(*e.l), lower(*e.r)});
  }
  return Condition::truth();
}

inline std::vector<ExprPtr> expressions_up_to(int depth) {
  std::vector<ExprPtr> out;
  for (int v = 0; v < 4; ++v) out.push_back(std::make_shared<Expr>(Expr{Expr::Var, v, nullptr, nullptr}));
  out.push_back(std::make_shared<Expr>(Expr{Expr::Top, 0, nullptr, nullptr}));
  for (int d = 2; d <= depth; ++d) {
    auto prev = out;
    for (const auto& a : prev) out.push_back(std::make_shared<Expr>(Expr{Expr::Not, 0, a, nullptr}));
    for (const auto& a : prev) {
      for (const auto& b : prev) {
        out.push_back(std::make_shared<Expr>(Expr{Expr::And, 0, a, b}));
        out.push_back(std::make_shared<Expr>(Expr{Expr::Or, 0, a, b}));
      }
    }
  }
  return out;
}

inline TriState from_int(int v) { return v == 2 ? TriState::True : (v == 0 ? TriState::False : TriState::Unknown); }

inline FlightState state_of(const std::array<int, 4>& vars, std::int64_t tick = 0) {
  static const char* names[] = {"A", "B", "C", "D"};
  FlightState s;
  s.tick = tick;
  for (int i = 0; i < 4; ++i) {
    if (vars[i] != 1) s.values[names[i]] = vars[i] == 2;
  }
  return s;
}

// Every assignment of false/unknown/true to the four variables.
inline std::vector<std::array<int, 4>> all_assignments() {
  std::vector<std::array<int, 4>> out;
  for (int i = 0; i < 81; ++i) out.push_back({i % 3, i / 3 % 3, i / 9 % 3, i / 27 % 3});
  return out;
}

// Number of (expression, assignment) pairs where eval_condition disagrees.
inline std::size_t truth_table_mismatches(int depth, std::size_t* expression_count = nullptr) {
  auto reg = bool_registry();
  auto exprs = expressions_up_to(depth);
  if (expression_count) *expression_count = exprs.size();
  auto assignments = all_assignments();
  std::vector<FlightState> states;
  for (const auto& a : assignments) states.push_back(state_of(a));
  std::size_t mismatches = 0;
  for (const auto& e : exprs) {
    auto cond = lower(*e);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      if (eval_condition(cond, std::span(&states[i], 1), reg) != from_int(oracle(*e, assignments[i]))) ++mismatches;
    }
  }
  return mismatches;
}

}  // namespace testing::kleene
