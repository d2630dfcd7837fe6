#pragma once

// Enumerates every (status, item kind) pair, every procedure kind and every
// message kind against the transcribed table.

#include <string>
#include <vector>

#include "color_golden.hpp"
#include "ocsis/color.hpp"

namespace testing::colors {

using namespace ocsis;

inline const ActionKind kKinds[] = {ActionKind::Action, ActionKind::Check, ActionKind::Note, ActionKind::Restriction};
inline const ActionStatus kStatuses[] = {ActionStatus::ToDo, ActionStatus::DoneAuto, ActionStatus::DoneManual,
                                         ActionStatus::Postponed, ActionStatus::NotApplicable};
inline const ProcedureKind kProcKinds[] = {ProcedureKind::Normal, ProcedureKind::Abnormal, ProcedureKind::Emergency,
                                           ProcedureKind::Checklist};
inline const MessageKind kMessages[] = {MessageKind::Caution,     MessageKind::Warning,
                                        MessageKind::Note,        MessageKind::Restriction,
                                        MessageKind::MoreInformation, MessageKind::FlightPhaseTitle};

inline std::string message_name(MessageKind k) {
  switch (k) {
    case MessageKind::Caution: return "caution";
    case MessageKind::Warning: return "warning";
    case MessageKind::Note: return "note";
    case MessageKind::Restriction: return "restriction";
    case MessageKind::MoreInformation: return "more_information";
    case MessageKind::FlightPhaseTitle: return "flight_phase_title";
  }
  return "";
}

struct Comparison {
  std::size_t compared = 0;
  std::vector<std::string> deviations;
};

inline Comparison compare_all() {
  Comparison c;
  auto expect = [&c](const std::string& what, const std::string& want, ColorCode got) {
    ++c.compared;
    if (want != to_string(got)) c.deviations.push_back(what + ": want " + want + ", got " + std::string(to_string(got)));
  };
  auto lookup = [](const auto& table, const auto& key) -> std::string {
    auto it = table.find(key);
    return it == table.end() ? "<missing>" : it->second;
  };
  for (auto kind : kKinds) {
    for (auto status : kStatuses) {
      std::pair<std::string, std::string> key{std::string(to_string(kind)), std::string(to_string(status))};
      expect(key.first + "/" + key.second, lookup(item_colors(), key), color_for(kind, status));
    }
  }
  for (auto kind : kProcKinds) {
    auto key = std::string(to_string(kind));
    expect("title " + key, lookup(title_colors(), key), title_color(kind));
  }
  for (auto k : kMessages) expect("message " + message_name(k), lookup(message_colors(), message_name(k)), color_for(k));
  return c;
}

}  // namespace testing::colors
