#include <algorithm>
#include <cstdio>
#include <set>

#include "ocsis/engine.hpp"

namespace ocsis {

namespace {

LineKind line_kind(ActionKind kind) {
  switch (kind) {
    case ActionKind::Action: return LineKind::Action;
    case ActionKind::Check: return LineKind::Check;
    case ActionKind::Note: return LineKind::Note;
    case ActionKind::Restriction: return LineKind::Restriction;
  }
  return LineKind::Action;
}

void replace_all(std::string& text, std::string_view from, const std::string& to) {
  for (auto pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
}

std::string whole(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f", v);
  return buf;
}

}  // namespace

std::string Session::render_text(const std::string& text) const {
  if (!config_.perf || text.find('{') == std::string::npos) return text;
  const auto& perf = *config_.perf;
  PerfInput input{perf.vref, perf.reference_landing_distance, {}};
  for (const auto& p : set_->procedures) {
    if (p.kind != ProcedureKind::Abnormal && p.kind != ProcedureKind::Emergency) continue;
    if (!runtime_.at(p.id).activated) continue;
    bool listed = std::any_of(perf.table.begin(), perf.table.end(),
                              [&](const CorrectionEntry& e) { return e.failure == p.id; });
    if (listed) input.active_failures.insert(p.id);
  }
  auto result = corrected_performance(input, perf.table);
  auto out = text;
  replace_all(out, "{VAPP}", whole(result.vapp));
  replace_all(out, "{LDG_DIST}", whole(result.landing_distance));
  return out;
}

ProcedureView Session::view_of(const Procedure& p, bool active) const {
  ProcedureView view;
  view.id = p.id;
  view.title = p.title;
  view.kind = p.kind;
  view.title_color = title_color(p.kind);
  view.active = active;

  std::optional<Cursor> cursor;
  for (const auto& f : stack_) {
    if (f.procedure == p.id) cursor = f.cursor;
  }
  for (const auto& d : deferred_) {
    if (d.procedure == p.id) cursor = d.saved;
  }
  bool finished = runtime_.at(p.id).completed;

  for (std::size_t i = 0; i < p.iblocks.size(); ++i) {
    const auto& b = p.iblocks[i];
    IBlockView bv;
    bv.id = b.id;
    bv.current = cursor && cursor->iblock == i;
    bv.completed = finished || (cursor && i < cursor->iblock);
    for (std::size_t j = 0; j < b.actions.size(); ++j) {
      const auto& a = b.actions[j];
      auto s = statuses_.at(ActionRef{p.id, a.id});
      DisplayLine line;
      line.kind = line_kind(a.kind);
      line.ref = p.id + "." + a.id;
      line.text = render_text(a.level1);
      // Informational items only ever switch between their own color and
      // grey, so their status is not shown.
      if (is_actionable(a.kind)) {
        line.status = s;
        line.color = color_for(a.kind, s);
      } else {
        line.color = color_for(a.kind, s == ActionStatus::NotApplicable ? s : ActionStatus::ToDo);
      }
      if (a.level2) line.level2 = render_text(*a.level2);
      if (a.level3) line.level3 = render_text(*a.level3);
      line.focused = active && bv.current && cursor->action == j;
      bv.lines.push_back(std::move(line));
    }
    view.iblocks.push_back(std::move(bv));
  }
  for (const auto& id : p.embedded) {
    const auto& target = proc(id);
    DisplayLine link;
    link.kind = LineKind::Link;
    link.ref = id;
    link.text = target.title;
    link.color = title_color(target.kind);
    view.links.push_back(std::move(link));
  }
  return view;
}

DisplayModel Session::display_model() const {
  DisplayModel m;
  m.tick = now_;
  m.page = page_;
  m.flight_phase = history_.empty() ? FlightPhase::CockpitPrep : history_.back().phase;
  m.page_title_color = color_for(MessageKind::FlightPhaseTitle);
  for (auto phase : kAllPhases) m.menu.push_back(PhaseTab{phase, phase == m.page, phase == m.flight_phase});
  if (!stack_.empty()) m.active = view_of(proc(stack_.back().procedure), true);
  auto focus = page_focus_.find(page_);
  for (const auto& id : page_procedure_ids(page_)) {
    bool top = !stack_.empty() && stack_.back().procedure == id;
    auto view = view_of(proc(id), top);
    // The page remembers where the pilot last worked on it.
    if (!top && focus != page_focus_.end() && focus->second == id) {
      bool placed = false;
      for (auto& b : view.iblocks) {
        for (auto& line : b.lines) {
          if (!placed && line.status &&
              (*line.status == ActionStatus::ToDo || *line.status == ActionStatus::Postponed)) {
            line.focused = placed = true;
          }
        }
      }
    }
    m.page_procedures.push_back(std::move(view));
  }
  if (!pending_.empty()) {
    const auto& p = proc(pending_.front());
    m.popup = PopupView{p.id, p.title, title_color(p.kind), p.ecam, pending_.size() - 1};
  }
  for (const auto& d : deferred_) {
    if (!d.reminder) continue;
    const auto& p = proc(d.procedure);
    m.reminder_bar.push_back(ReminderView{p.id, p.title, title_color(p.kind)});
  }
  for (const auto& f : stack_) m.stack.push_back(f.procedure);
  return m;
}

}  // namespace ocsis
