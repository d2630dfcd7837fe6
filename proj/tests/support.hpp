#pragma once

// Shared helpers for the test binaries. OCSIS_FIXTURES and OCSIS_CLI are
// set by tests/CMakeLists.txt.

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocsis/dsl.hpp"
#include "ocsis/scenario.hpp"

namespace testing {

inline std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(OCSIS_FIXTURES) / rel;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline ocsis::ParseResult parse_path(const std::filesystem::path& path) {
  return ocsis::parse(ocsis::read_sources(path));
}

inline std::shared_ptr<const ocsis::ProcedureSet> load_set(const std::filesystem::path& path) {
  auto result = parse_path(path);
  if (!result.ok()) {
    std::string msg;
    for (const auto& d : result.diagnostics) msg += ocsis::render(d) + "\n";
    throw std::runtime_error(msg);
  }
  return std::make_shared<const ocsis::ProcedureSet>(std::move(*result.set));
}

inline std::shared_ptr<const ocsis::ProcedureSet> a320() {
  static auto set = load_set(fixture("a320"));
  return set;
}

inline std::shared_ptr<const ocsis::ProcedureSet> set_from(const std::string& text) {
  auto result = ocsis::parse(text, "<test>");
  if (!result.ok()) {
    std::string msg;
    for (const auto& d : result.diagnostics) msg += ocsis::render(d) + "\n";
    throw std::runtime_error(msg);
  }
  return std::make_shared<const ocsis::ProcedureSet>(std::move(*result.set));
}

inline ocsis::Scenario scenario(const std::string& name) {
  return ocsis::load_scenario(fixture("scenarios/" + name + ".ocss"), a320()->registry);
}

// Every fixture that parses without errors.
inline std::vector<std::filesystem::path> valid_corpus() {
  return {fixture("a320"),          fixture("dsl/flaps_only.ocsp"),      fixture("dsl/levels.ocsp"),
          fixture("dsl/unsat_goal.ocsp"), fixture("dsl/always_triggers.ocsp"), fixture("dsl/empty.ocsp"),
          fixture("dsl/kitchen_sink.ocsp")};
}

inline const char* const kScenarios[] = {"initial_approach", "final_approach", "flaps_locked", "fuel_leak"};

}  // namespace testing
