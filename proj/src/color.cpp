#include "ocsis/color.hpp"

#include <array>

#include "ocsis/error.hpp"

namespace ocsis {

namespace {
constexpr std::array<std::string_view, 7> kColorNames = {
    "CYAN", "GREEN", "AMBER", "RED", "WHITE", "MAGENTA", "GREY",
};
constexpr std::array<std::string_view, 5> kStatusNames = {
    "ToDo", "DoneAuto", "DoneManual", "Postponed", "NotApplicable",
};
}  // namespace

std::string_view to_string(ColorCode color) {
  return kColorNames[static_cast<std::size_t>(color)];
}

std::optional<ColorCode> parse_color(std::string_view text) {
  for (std::size_t i = 0; i < kColorNames.size(); ++i) {
    if (kColorNames[i] == text) return static_cast<ColorCode>(i);
  }
  return std::nullopt;
}

std::string_view to_string(ActionStatus status) {
  return kStatusNames[static_cast<std::size_t>(status)];
}

std::optional<ActionStatus> parse_status(std::string_view text) {
  for (std::size_t i = 0; i < kStatusNames.size(); ++i) {
    if (kStatusNames[i] == text) return static_cast<ActionStatus>(i);
  }
  return std::nullopt;
}

ColorCode color_for(ActionKind kind, ActionStatus status) {
  // Not-applicable wins over the item kind: a greyed note is still grey.
  if (status == ActionStatus::NotApplicable) return ColorCode::Grey;
  switch (kind) {
    case ActionKind::Note: return ColorCode::White;
    case ActionKind::Restriction: return ColorCode::Magenta;
    case ActionKind::Action:
    case ActionKind::Check:
      break;
  }
  switch (status) {
    case ActionStatus::ToDo: return ColorCode::Cyan;
    case ActionStatus::DoneAuto:
    case ActionStatus::DoneManual: return ColorCode::Green;
    case ActionStatus::Postponed: return ColorCode::Amber;
    case ActionStatus::NotApplicable: return ColorCode::Grey;
  }
  return ColorCode::Cyan;
}

ColorCode title_color(ProcedureKind kind) {
  switch (kind) {
    case ProcedureKind::Abnormal: return ColorCode::Amber;
    case ProcedureKind::Emergency: return ColorCode::Red;
    case ProcedureKind::Normal:
    case ProcedureKind::Checklist: return ColorCode::White;
  }
  return ColorCode::White;
}

ColorCode color_for(MessageKind kind) {
  switch (kind) {
    case MessageKind::Caution: return ColorCode::Amber;
    case MessageKind::Warning: return ColorCode::Red;
    case MessageKind::Note:
    case MessageKind::MoreInformation:
    case MessageKind::FlightPhaseTitle: return ColorCode::White;
    case MessageKind::Restriction: return ColorCode::Magenta;
  }
  return ColorCode::White;
}

std::optional<std::string> info_text(const Action& action, int level) {
  switch (level) {
    case 1: return action.level1;
    case 2: return action.level2;
    case 3: return action.level3;
    default:
      throw Error(ErrorCode::InvalidLevel, "information level must be 1, 2 or 3, got " +
                                               std::to_string(level));
  }
}

}  // namespace ocsis
