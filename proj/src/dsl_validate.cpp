#include <algorithm>
#include <map>
#include <set>

#include "dsl_internal.hpp"

namespace ocsis {

namespace detail {

Diagnostic make_error(std::string_view code, std::string message, SourceSpan span) {
  return Diagnostic{Severity::Error, std::string(code), std::move(message), std::move(span)};
}

Diagnostic make_warning(std::string_view code, std::string message, SourceSpan span) {
  return Diagnostic{Severity::Warning, std::string(code), std::move(message), std::move(span)};
}

std::optional<std::string> comparison_error(const ParamDecl& lhs, CmpOp op,
                                            const ParamValue* rhs_value,
                                            const ParamDecl* rhs_decl) {
  if (is_ordering(op) && lhs.type != ParamType::Number) {
    return "operator " + std::string(to_string(op)) + " needs numbers; " + lhs.name + " is " +
           std::string(to_string(lhs.type));
  }
  if (rhs_decl != nullptr) {
    if (rhs_decl->type != lhs.type) {
      return lhs.name + " (" + std::string(to_string(lhs.type)) + ") compared with " +
             rhs_decl->name + " (" + std::string(to_string(rhs_decl->type)) + ")";
    }
    if (lhs.type == ParamType::Enum && lhs.labels != rhs_decl->labels) {
      return lhs.name + " and " + rhs_decl->name + " have different enum domains";
    }
    return std::nullopt;
  }
  bool fits = false;
  switch (lhs.type) {
    case ParamType::Number: fits = std::holds_alternative<double>(*rhs_value); break;
    case ParamType::Bool: fits = std::holds_alternative<bool>(*rhs_value); break;
    case ParamType::Enum: fits = std::holds_alternative<EnumLabel>(*rhs_value); break;
  }
  if (!fits) {
    return lhs.name + " is " + std::string(to_string(lhs.type)) + " but is compared with " +
           format_value(*rhs_value);
  }
  return std::nullopt;
}

void check_condition(const Condition& cond, const Registry& registry, const SourceSpan& span,
                     std::vector<Diagnostic>& out) {
  using Kind = Condition::Kind;
  auto param = [&](const std::string& name) -> const ParamDecl* {
    const auto* decl = registry.find(name);
    if (decl == nullptr) out.push_back(make_error(diag::kUnknownParameter, "unknown parameter " + name, span));
    return decl;
  };
  switch (cond.kind) {
    case Kind::True:
      break;
    case Kind::Present:
      param(cond.param);
      break;
    case Kind::CmpConst:
      if (const auto* decl = param(cond.param)) {
        if (auto err = comparison_error(*decl, cond.op, &cond.constant, nullptr)) {
          out.push_back(make_error(diag::kTypeMismatch, *err, span));
        }
      }
      break;
    case Kind::CmpParam: {
      const auto* lhs = param(cond.param);
      const auto* rhs = param(cond.other);
      if (lhs != nullptr && rhs != nullptr) {
        if (auto err = comparison_error(*lhs, cond.op, nullptr, rhs)) {
          out.push_back(make_error(diag::kTypeMismatch, *err, span));
        }
      }
      break;
    }
    case Kind::Sustained:
      if (cond.duration < 1) {
        out.push_back(make_error(diag::kInvalidValue, "sustained duration must be >= 1", span));
      }
      [[fallthrough]];
    case Kind::Not:
      if (cond.children.size() != 1) {
        out.push_back(make_error(diag::kSyntax, "unary node needs exactly one child", span));
      }
      break;
    case Kind::And:
    case Kind::Or:
      break;
  }
  for (const auto& child : cond.children) check_condition(child, registry, span, out);
}

}  // namespace detail

std::string render(const Diagnostic& d) {
  return d.span.file + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) +
         ": " + (d.severity == Severity::Error ? "error" : "warning") + " " + d.code + " " +
         d.message;
}

bool has_errors(std::span<const Diagnostic> diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

namespace {

using detail::make_error;

// Colour-marking DFS over embed links in declaration order. Each back edge
// is reported once, at the link that closes the cycle.
void find_cycles(const ProcedureSet& set, std::vector<Diagnostic>& out) {
  enum class Mark { White, Grey, Black };
  std::vector<Mark> mark(set.procedures.size(), Mark::White);
  std::vector<std::size_t> path;

  auto visit = [&](auto&& self, std::size_t u) -> void {
    mark[u] = Mark::Grey;
    path.push_back(u);
    const auto& proc = set.procedures[u];
    for (std::size_t i = 0; i < proc.embedded.size(); ++i) {
      auto v = set.index_of(proc.embedded[i]);
      if (!v) continue;
      if (mark[*v] == Mark::Grey) {
        std::string cycle;
        auto it = std::find(path.begin(), path.end(), *v);
        for (; it != path.end(); ++it) cycle += set.procedures[*it].id + " -> ";
        cycle += set.procedures[*v].id;
        out.push_back(make_error(diag::kCyclicLink, "embed link closes a cycle: " + cycle,
                                 set.span_of("embed:" + proc.id + "#" + std::to_string(i))));
      } else if (mark[*v] == Mark::White) {
        self(self, *v);
      }
    }
    path.pop_back();
    mark[u] = Mark::Black;
  };
  for (std::size_t u = 0; u < set.procedures.size(); ++u) {
    if (mark[u] == Mark::White) visit(visit, u);
  }
}

}  // namespace

std::vector<Diagnostic> validate(const ProcedureSet& set) {
  std::vector<Diagnostic> out;
  std::set<std::string> proc_ids;
  std::set<std::string> block_ids;
  const auto& reg = set.registry;

  for (const auto& [name, decl] : reg.declared()) {
    if (decl.type == ParamType::Enum && decl.labels.empty()) {
      out.push_back(make_error(diag::kInvalidValue, "enum " + name + " has no labels",
                               set.span_of("param:" + name)));
    }
  }

  for (const auto& proc : set.procedures) {
    auto pspan = set.span_of("proc:" + proc.id);
    if (!proc_ids.insert(proc.id).second) {
      out.push_back(make_error(diag::kDuplicateId, "duplicate procedure " + proc.id, pspan));
    }
    if (proc.iblocks.empty()) {
      out.push_back(make_error(diag::kEmptyProcedure, "procedure " + proc.id + " has no iblock", pspan));
    }
    std::set<std::string> action_ids;
    for (const auto& block : proc.iblocks) {
      auto key = proc.id + "." + block.id;
      if (!block_ids.insert(block.id).second) {
        out.push_back(make_error(diag::kDuplicateId, "duplicate iblock " + block.id,
                                 set.span_of("iblock:" + key)));
      }
      if (block.trigger) detail::check_condition(*block.trigger, reg, set.span_of("trigger:" + key), out);
      detail::check_condition(block.context, reg, set.span_of("context:" + key), out);
      detail::check_condition(block.goal, reg, set.span_of("goal:" + key), out);
      for (std::size_t i = 0; i < block.abnormal.size(); ++i) {
        const auto& link = block.abnormal[i];
        auto suffix = key + "#" + std::to_string(i);
        detail::check_condition(link.condition, reg, set.span_of("abnormal:" + suffix), out);
        if (set.find(link.target) == nullptr) {
          out.push_back(make_error(diag::kDanglingLink, "abnormal branch targets unknown procedure " + link.target,
                                   set.span_of("abnormal-target:" + suffix)));
        }
      }
      for (const auto& action : block.actions) {
        auto akey = proc.id + "." + action.id;
        auto aspan = set.span_of("action:" + akey);
        if (!action_ids.insert(action.id).second) {
          out.push_back(make_error(diag::kDuplicateId, "duplicate item " + action.id + " in " + proc.id, aspan));
        }
        if (action.level1.empty()) {
          out.push_back(make_error(diag::kInvalidItem, "level 1 text must not be empty", aspan));
        }
        if (action.detect) {
          if (!is_actionable(action.kind)) {
            out.push_back(make_error(diag::kInvalidItem,
                                     std::string(to_string(action.kind)) + " items cannot auto-detect", aspan));
          }
          detail::check_condition(*action.detect, reg, set.span_of("detect:" + akey), out);
        }
        if (action.applicability) {
          detail::check_condition(*action.applicability, reg, set.span_of("applicable:" + akey), out);
        }
      }
    }
    for (std::size_t i = 0; i < proc.embedded.size(); ++i) {
      if (set.find(proc.embedded[i]) == nullptr) {
        out.push_back(make_error(diag::kDanglingLink, "embed targets unknown procedure " + proc.embedded[i],
                                 set.span_of("embed:" + proc.id + "#" + std::to_string(i))));
      }
    }
  }

  for (const auto& [phase, ids] : set.entries) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (set.find(ids[i]) == nullptr) {
        out.push_back(make_error(diag::kDanglingLink, "entry table references unknown procedure " + ids[i],
                                 set.span_of("entry:" + std::string(to_string(phase)) + "#" + std::to_string(i))));
      }
    }
  }

  find_cycles(set, out);
  return out;
}

}  // namespace ocsis
