#include "ocsis/perf.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ocsis/error.hpp"

namespace ocsis {

PerfResult corrected_performance(const PerfInput& input, const std::vector<CorrectionEntry>& table) {
  if (!(input.vref > 0) || !(input.reference_landing_distance > 0)) {
    throw Error(ErrorCode::InvalidInput, "vref and reference landing distance must be positive");
  }
  std::map<std::string_view, const CorrectionEntry*> by_id;
  for (const auto& e : table) by_id.emplace(e.failure, &e);

  // The failure set is ordered, so the floating-point result does not
  // depend on how the caller enumerated it.
  PerfResult out{input.vref, input.reference_landing_distance};
  for (const auto& f : input.active_failures) {
    auto it = by_id.find(f);
    if (it == by_id.end()) throw Error(ErrorCode::MissingEntry, "no correction entry for " + f);
    out.vapp += it->second->speed_increment;
    out.landing_distance *= it->second->distance_factor;
  }
  return out;
}

namespace {

bool parse_number(std::string_view text, double& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

std::vector<CorrectionEntry> parse_correction_table(std::string_view text, std::string_view file) {
  std::vector<CorrectionEntry> out;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::ParseError, std::string(file) + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string s; words >> s;) w.push_back(s);
    if (w.empty()) continue;
    if (w.size() != 6 || w[0] != "correction" || w[2] != "speed" || w[4] != "dist") {
      fail("expected `correction <ID> speed +<kt> dist x<factor>`");
    }
    CorrectionEntry e;
    e.failure = w[1];
    if (w[3].size() < 2 || w[3][0] != '+' || !parse_number(std::string_view(w[3]).substr(1), e.speed_increment)) {
      fail("bad speed increment " + w[3]);
    }
    if (w[5].size() < 2 || w[5][0] != 'x' || !parse_number(std::string_view(w[5]).substr(1), e.distance_factor)) {
      fail("bad distance factor " + w[5]);
    }
    if (e.distance_factor < 1.0) fail("distance factor must be >= 1");
    if (auto [it, fresh] = seen.emplace(e.failure, lineno); !fresh) {
      throw Error(ErrorCode::DuplicateFailure, std::string(file) + ":" + std::to_string(lineno) +
                                                   ": duplicate entry for " + e.failure +
                                                   " (first on line " + std::to_string(it->second) + ")");
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<CorrectionEntry> load_correction_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_correction_table(buf.str(), path.string());
}

}  // namespace ocsis
