#pragma once

// Hand transcription of the color table with its starred amendments. Kept
// as strings so it shares nothing with the implementation's enums.

#include <map>
#include <string>
#include <utility>

namespace testing {

// (item kind, status) -> color
inline const std::map<std::pair<std::string, std::string>, std::string>& item_colors() {
  static const std::map<std::pair<std::string, std::string>, std::string> table = [] {
    std::map<std::pair<std::string, std::string>, std::string> t;
    for (const char* kind : {"action", "check"}) {
      t[{kind, "ToDo"}] = "CYAN";
      t[{kind, "DoneAuto"}] = "GREEN";
      t[{kind, "DoneManual"}] = "GREEN";
      t[{kind, "Postponed"}] = "AMBER";
      t[{kind, "NotApplicable"}] = "GREY";
    }
    // Notes and restrictions keep their own color whatever the status,
    // except when the context rules them out.
    for (const char* status : {"ToDo", "DoneAuto", "DoneManual", "Postponed"}) {
      t[{"note", status}] = "WHITE";
      t[{"restriction", status}] = "MAGENTA";
    }
    t[{"note", "NotApplicable"}] = "GREY";
    t[{"restriction", "NotApplicable"}] = "GREY";
    return t;
  }();
  return table;
}

inline const std::map<std::string, std::string>& title_colors() {
  static const std::map<std::string, std::string> t = {
      {"normal", "WHITE"}, {"checklist", "WHITE"}, {"abnormal", "AMBER"}, {"emergency", "RED"}};
  return t;
}

inline const std::map<std::string, std::string>& message_colors() {
  static const std::map<std::string, std::string> t = {
      {"caution", "AMBER"},          {"warning", "RED"},      {"note", "WHITE"},
      {"restriction", "MAGENTA"},    {"more_information", "WHITE"}, {"flight_phase_title", "WHITE"}};
  return t;
}

}  // namespace testing
