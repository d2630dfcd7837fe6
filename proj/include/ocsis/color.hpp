#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "ocsis/model.hpp"

namespace ocsis {

enum class ColorCode { Cyan, Green, Amber, Red, White, Magenta, Grey };

std::string_view to_string(ColorCode color);
std::optional<ColorCode> parse_color(std::string_view text);

enum class ActionStatus { ToDo, DoneAuto, DoneManual, Postponed, NotApplicable };

std::string_view to_string(ActionStatus status);
std::optional<ActionStatus> parse_status(std::string_view text);

inline bool is_done(ActionStatus s) {
  return s == ActionStatus::DoneAuto || s == ActionStatus::DoneManual;
}

enum class MessageKind {
  Caution,
  Warning,
  Note,
  Restriction,
  MoreInformation,  // level 2/3 text
  FlightPhaseTitle,
};

// Dynamic color system. Total over every input.
ColorCode color_for(ActionKind kind, ActionStatus status);
ColorCode title_color(ProcedureKind kind);
ColorCode color_for(MessageKind kind);

// Returns the authored text for level 1, 2 or 3; nullopt for an unauthored
// level 2/3. Throws Error(InvalidLevel) outside 1..3.
std::optional<std::string> info_text(const Action& action, int level);

}  // namespace ocsis
