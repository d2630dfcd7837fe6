#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "ocsis/model.hpp"

namespace ocsis {

enum class TriState { False, True, Unknown };

std::string_view to_string(TriState value);

inline TriState tri(bool b) { return b ? TriState::True : TriState::False; }

struct EvalContext {
  // Value of CHECK_ALL_DONE for the iBlock being evaluated; Unknown when unset.
  std::optional<bool> check_all_done;
};

// Evaluates `expr` at the last state of `history` (oldest first).
//
// Missing parameters make comparisons Unknown; And/Or/Not follow Kleene
// logic. Sustained(c, d) holds when c has held continuously over the last d
// ticks, each state being held until the next one arrives. An empty history
// behaves as a single state with no parameters.
//
// Throws Error(UnknownParameter) if the tree references a parameter the
// registry does not declare.
TriState eval_condition(const Condition& expr, std::span<const FlightState> history,
                        const Registry& registry, const EvalContext& ctx = {});

}  // namespace ocsis
