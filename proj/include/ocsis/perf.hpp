#pragma once

// Approach-speed and landing-distance corrections for active failures.

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ocsis {

struct CorrectionEntry {
  std::string failure;          // procedure id
  double speed_increment = 0;   // kt, added to VREF
  double distance_factor = 1;   // multiplies the reference landing distance

  bool operator==(const CorrectionEntry&) const = default;
};

struct PerfInput {
  double vref = 0;                        // kt
  double reference_landing_distance = 0;  // m
  std::set<std::string> active_failures;
};

struct PerfResult {
  double vapp = 0;
  double landing_distance = 0;

  bool operator==(const PerfResult&) const = default;
};

// Throws Error(InvalidInput) for non-positive magnitudes and
// Error(MissingEntry) for a failure the table does not list.
PerfResult corrected_performance(const PerfInput& input, const std::vector<CorrectionEntry>& table);

// `correction <ID> speed +<kt> dist x<factor>` per line, `#` comments.
// Throws Error(ParseError) with the line number, Error(DuplicateFailure).
std::vector<CorrectionEntry> parse_correction_table(std::string_view text,
                                                    std::string_view file = "<input>");
std::vector<CorrectionEntry> load_correction_table(const std::filesystem::path& path);

}  // namespace ocsis
