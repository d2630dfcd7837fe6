#include <openssl/evp.h>

#include <sstream>

#include "ocsis/dsl.hpp"

namespace ocsis {

namespace {

bool is_compound(const Condition& c) {
  return c.kind == Condition::Kind::And || c.kind == Condition::Kind::Or;
}

bool is_falsity(const Condition& c) {
  return c.kind == Condition::Kind::Not && c.children.front().kind == Condition::Kind::True;
}

std::string atom(const Condition& c);

std::string join(const Condition& c, std::string_view sep) {
  if (c.children.empty()) return c.kind == Condition::Kind::And ? "true" : "false";
  std::string out;
  for (std::size_t i = 0; i < c.children.size(); ++i) {
    if (i > 0) out += sep;
    const auto& child = c.children[i];
    out += is_compound(child) ? "(" + format_condition(child) + ")" : format_condition(child);
  }
  return out;
}

// Text that parses back as a single primary.
std::string atom(const Condition& c) {
  if (is_compound(c) || (c.kind == Condition::Kind::Not && !is_falsity(c))) {
    return "(" + format_condition(c) + ")";
  }
  return format_condition(c);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string format_condition(const Condition& c) {
  using Kind = Condition::Kind;
  switch (c.kind) {
    case Kind::True:
      return "true";
    case Kind::Present:
      return "present(" + c.param + ")";
    case Kind::CmpConst:
      if (c.op == CmpOp::Eq && c.constant == ParamValue{true} && c.param == kCheckAllDone) {
        return "(" + c.param + ")";
      }
      return "(" + c.param + " " + std::string(to_string(c.op)) + " " + format_value(c.constant) + ")";
    case Kind::CmpParam:
      return "(" + c.param + " " + std::string(to_string(c.op)) + " " + c.other + ")";
    case Kind::Not:
      if (is_falsity(c)) return "false";
      return "not " + atom(c.children.front());
    case Kind::Sustained:
      return "sustained " + std::to_string(c.duration) + " " + atom(c.children.front());
    case Kind::And:
      return join(c, " and ");
    case Kind::Or:
      return join(c, " or ");
  }
  return "true";
}

std::string canonical_format(const ProcedureSet& set) {
  std::ostringstream out;
  out << "# ocsis procedure set v1\n";
  if (!set.registry.empty()) {
    out << "\n";
    for (const auto& [name, decl] : set.registry.declared()) {
      out << "param " << name << " " << to_string(decl.type);
      if (decl.type == ParamType::Enum) {
        out << "(";
        for (std::size_t i = 0; i < decl.labels.size(); ++i) out << (i > 0 ? "," : "") << decl.labels[i];
        out << ")";
      }
      if (!decl.unit.empty()) out << " " << decl.unit;
      out << "\n";
    }
  }
  if (!set.entries.empty()) {
    out << "\n";
    for (const auto& [phase, ids] : set.entries) {
      out << "entry " << to_string(phase);
      for (const auto& id : ids) out << " " << id;
      out << "\n";
    }
  }
  for (const auto& proc : set.procedures) {
    out << "\nprocedure " << proc.id << " " << to_string(proc.kind) << " phase " << to_string(proc.phase);
    if (proc.priority_override) out << " priority " << *proc.priority_override;
    if (proc.ecam) out << " ecam";
    out << "\n  title " << quote(proc.title) << "\n";
    for (const auto& block : proc.iblocks) {
      out << "  iblock " << block.id << "\n";
      if (block.trigger) out << "    trigger " << format_condition(*block.trigger) << "\n";
      out << "    context " << format_condition(block.context) << "\n";
      for (const auto& a : block.actions) {
        out << "    " << to_string(a.kind) << " " << a.id << " " << quote(a.level1);
        if (a.level2) out << " level2 " << quote(*a.level2);
        if (a.level3) out << " level3 " << quote(*a.level3);
        if (a.detect) out << " detect " << format_condition(*a.detect);
        if (a.applicability) out << " applicable " << format_condition(*a.applicability);
        out << "\n";
      }
      out << "    goal " << format_condition(block.goal) << "\n";
      for (const auto& link : block.abnormal) {
        out << "    abnormal " << format_condition(link.condition) << " -> " << link.target << "\n";
      }
    }
    for (const auto& id : proc.embedded) out << "  embed " << id << "\n";
  }
  return out.str();
}

std::string content_hash(const ProcedureSet& set) {
  auto text = canonical_format(set);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace ocsis
