#pragma once

// Procedure definition language: `.ocsr` registry files and `.ocsp`
// procedure files. The grammar is documented in docs/grammar.md.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocsis/model.hpp"

namespace ocsis {

enum class Severity { Error, Warning };

// Diagnostic codes. Closed set; docs/grammar.md lists each one.
namespace diag {
inline constexpr std::string_view kSyntax = "E_SYNTAX";
inline constexpr std::string_view kUnknownParameter = "E_UNKNOWN_PARAMETER";
inline constexpr std::string_view kTypeMismatch = "E_TYPE_MISMATCH";
inline constexpr std::string_view kDuplicateId = "E_DUPLICATE_ID";
inline constexpr std::string_view kDanglingLink = "E_DANGLING_LINK";
inline constexpr std::string_view kCyclicLink = "E_CYCLIC_LINK";
inline constexpr std::string_view kReservedName = "E_RESERVED_NAME";
inline constexpr std::string_view kInvalidValue = "E_INVALID_VALUE";
inline constexpr std::string_view kEmptyProcedure = "E_EMPTY_PROCEDURE";
inline constexpr std::string_view kInvalidItem = "E_INVALID_ITEM";
inline constexpr std::string_view kAlwaysTriggers = "W_ALWAYS_TRIGGERS";
inline constexpr std::string_view kLabelOutOfDomain = "W_LABEL_OUT_OF_DOMAIN";
inline constexpr std::string_view kUnsatisfiable = "W_UNSATISFIABLE";
inline constexpr std::string_view kSatisfiabilitySkipped = "W_SATISFIABILITY_SKIPPED";
}  // namespace diag

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;

  bool operator==(const Diagnostic&) const = default;
};

// `file:line:col: severity CODE message`
std::string render(const Diagnostic& d);
bool has_errors(std::span<const Diagnostic> diagnostics);

struct Source {
  std::string name;
  std::string text;
};

// Exactly one of `set` and a non-empty `diagnostics` is populated.
struct ParseResult {
  std::optional<ProcedureSet> set;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return set.has_value(); }
};

// Parameters may be declared in any source; they are collected before any
// condition is resolved, so declaration order does not matter.
ParseResult parse(std::span<const Source> sources);
ParseResult parse(std::string_view text, std::string_view file = "<input>");

// Reads every *.ocsr and *.ocsp file in `dir` (sorted by file name), or the
// single file when `path` is a regular file. Throws Error(Io) if unreadable.
std::vector<Source> read_sources(const std::filesystem::path& path);

// Structural checks for a set built in memory or by the parser: unknown
// parameters, type mismatches, duplicate ids, dangling and cyclic links.
std::vector<Diagnostic> validate(const ProcedureSet& set);

// Warnings only; `set` must be valid.
std::vector<Diagnostic> lint(const ProcedureSet& set);

std::string canonical_format(const ProcedureSet& set);
std::string format_condition(const Condition& cond);

// SHA-256 (hex) of the canonical format.
std::string content_hash(const ProcedureSet& set);

}  // namespace ocsis
