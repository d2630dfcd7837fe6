#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ocsis/dsl.hpp"

namespace ocsis::detail {

// Type rule shared by the parser (token-accurate spans) and validate().
// `rhs_value` is set for a constant comparison, `rhs_decl` for a
// parameter-parameter one. Returns a message when the comparison is ill-typed.
std::optional<std::string> comparison_error(const ParamDecl& lhs, CmpOp op,
                                            const ParamValue* rhs_value,
                                            const ParamDecl* rhs_decl);

void check_condition(const Condition& cond, const Registry& registry, const SourceSpan& span,
                     std::vector<Diagnostic>& out);

Diagnostic make_error(std::string_view code, std::string message, SourceSpan span);
Diagnostic make_warning(std::string_view code, std::string message, SourceSpan span);

}  // namespace ocsis::detail
