#include "ocsis/engine.hpp"

#include <algorithm>
#include <sstream>

#include "ocsis/condition.hpp"
#include "ocsis/dsl.hpp"
#include "ocsis/error.hpp"

namespace ocsis {

namespace {

int set_max_sustained(const ProcedureSet& set) {
  int out = 0;
  auto see = [&](const Condition& c) { out = std::max(out, max_sustained(c)); };
  for (const auto& p : set.procedures) {
    for (const auto& b : p.iblocks) {
      if (b.trigger) see(*b.trigger);
      see(b.context);
      see(b.goal);
      for (const auto& l : b.abnormal) see(l.condition);
      for (const auto& a : b.actions) {
        if (a.detect) see(*a.detect);
        if (a.applicability) see(*a.applicability);
      }
    }
  }
  return out;
}

[[noreturn]] void illegal(const std::string& msg) { throw Error(ErrorCode::IllegalTransition, msg); }

}  // namespace

Session::Session(std::shared_ptr<const ProcedureSet> set, SessionConfig config)
    : Session(set, std::move(config), set ? content_hash(*set) : std::string()) {}

Session::Session(std::shared_ptr<const ProcedureSet> set, SessionConfig config, std::string hash)
    : set_(std::move(set)), config_(std::move(config)), set_hash_(std::move(hash)) {
  if (!set_) throw Error(ErrorCode::InvalidSet, "no procedure set");
  auto diags = validate(*set_);
  if (has_errors(diags)) {
    throw Error(ErrorCode::InvalidSet, "procedure set does not validate: " + render(diags.front()));
  }
  if (config_.perf && (!(config_.perf->vref > 0) || !(config_.perf->reference_landing_distance > 0))) {
    throw Error(ErrorCode::InvalidInput, "vref and reference landing distance must be positive");
  }
  history_bound_ = std::max<std::size_t>(config_.min_history, set_max_sustained(*set_));
  history_bound_ = std::max<std::size_t>(history_bound_, 1);
  for (const auto& p : set_->procedures) {
    runtime_[p.id] = ProcRuntime{};
    for (const auto& b : p.iblocks) {
      for (const auto& a : b.actions) statuses_[ActionRef{p.id, a.id}] = ActionStatus::ToDo;
    }
  }
}

// ---------------------------------------------------------------------------
// Helpers

std::vector<EngineEvent> Session::since(std::size_t mark) const {
  return {log_.begin() + static_cast<std::ptrdiff_t>(mark), log_.end()};
}

void Session::emit(EventPayload payload) {
  log_.push_back(EngineEvent{next_seq_++, now_, std::move(payload)});
}

const Procedure& Session::proc(const std::string& id) const {
  const auto* p = set_->find(id);
  if (p == nullptr) throw Error(ErrorCode::UnknownRef, "unknown procedure " + id);
  return *p;
}

std::size_t Session::decl_index(const std::string& id) const { return *set_->index_of(id); }

ActionStatus Session::status(const ActionRef& ref) const {
  auto it = statuses_.find(ref);
  if (it == statuses_.end()) throw Error(ErrorCode::UnknownRef, "unknown action " + ref.str());
  return it->second;
}

ActionStatus& Session::status_ref(const ActionRef& ref) { return statuses_.at(ref); }

void Session::set_status(const ActionRef& ref, ActionStatus to) {
  auto& s = status_ref(ref);
  if (s == to) return;
  auto from = s;
  s = to;
  emit(ev::ActionStatusChanged{ref, from, to});
}

bool Session::check_all_done(const Procedure& p, const IBlock& b) const {
  for (const auto& a : b.actions) {
    if (!is_actionable(a.kind)) continue;
    auto s = statuses_.at(ActionRef{p.id, a.id});
    if (!is_done(s) && s != ActionStatus::NotApplicable) return false;
  }
  return true;
}

TriState Session::eval(const Condition& c, std::optional<bool> check_all) const {
  return eval_condition(c, history_, set_->registry, EvalContext{check_all});
}

void Session::refresh_cursor(Frame& frame) const {
  const auto& p = proc(frame.procedure);
  frame.cursor.action = 0;
  if (frame.cursor.iblock >= p.iblocks.size()) return;
  const auto& b = p.iblocks[frame.cursor.iblock];
  for (std::size_t i = 0; i < b.actions.size(); ++i) {
    const auto& a = b.actions[i];
    if (!is_actionable(a.kind)) continue;
    auto s = statuses_.at(ActionRef{p.id, a.id});
    if (s == ActionStatus::ToDo || s == ActionStatus::Postponed) {
      frame.cursor.action = i;
      return;
    }
  }
  frame.cursor.action = b.actions.size();
}

std::vector<std::string> Session::page_procedure_ids(FlightPhase phase) const {
  if (auto it = set_->entries.find(phase); it != set_->entries.end()) return it->second;
  std::vector<std::string> out;
  for (const auto& p : set_->procedures) {
    if (p.phase == phase && (p.kind == ProcedureKind::Normal || p.kind == ProcedureKind::Checklist)) {
      out.push_back(p.id);
    }
  }
  return out;
}

bool Session::in_display_context(const std::string& procedure) const {
  if (!stack_.empty() && stack_.back().procedure == procedure) return true;
  auto page = page_procedure_ids(page_);
  return std::find(page.begin(), page.end(), procedure) != page.end();
}

// ---------------------------------------------------------------------------
// State processing

void Session::update_applicability() {
  for (const auto& p : set_->procedures) {
    for (const auto& b : p.iblocks) {
      for (const auto& a : b.actions) {
        if (!a.applicability) continue;
        ActionRef ref{p.id, a.id};
        auto s = status_ref(ref);
        auto v = eval(*a.applicability);
        if (s == ActionStatus::ToDo && v == TriState::False) {
          set_status(ref, ActionStatus::NotApplicable);
        } else if (s == ActionStatus::NotApplicable && v == TriState::True) {
          set_status(ref, ActionStatus::ToDo);
        }
      }
    }
  }
}

void Session::auto_detect(const Frame& frame) {
  const auto& p = proc(frame.procedure);
  if (frame.cursor.iblock >= p.iblocks.size()) return;
  for (const auto& a : p.iblocks[frame.cursor.iblock].actions) {
    if (!a.detect || !is_actionable(a.kind)) continue;
    ActionRef ref{p.id, a.id};
    auto s = status_ref(ref);
    auto v = eval(*a.detect);
    if ((s == ActionStatus::ToDo || s == ActionStatus::Postponed) && v == TriState::True) {
      set_status(ref, ActionStatus::DoneAuto);
      emit(ev::ActionAutoCompleted{ref});
    } else if (is_done(s) && v == TriState::False) {
      if (contradiction_latch_.insert(ref).second) emit(ev::StateContradiction{ref});
    } else if (v != TriState::False) {
      contradiction_latch_.erase(ref);
    }
  }
}

void Session::advance() {
  while (!stack_.empty()) {
    auto& top = stack_.back();
    auto_detect(top);
    const auto& p = proc(top.procedure);
    if (top.cursor.iblock < p.iblocks.size()) {
      const auto& b = p.iblocks[top.cursor.iblock];
      if (eval(b.goal, check_all_done(p, b)) != TriState::True) {
        refresh_cursor(top);
        return;
      }
      emit(ev::GoalReached{IBlockRef{p.id, b.id}});
      ++top.cursor.iblock;
      refresh_cursor(top);
      if (top.cursor.iblock < p.iblocks.size()) continue;
    }
    emit(ev::ProcedureCompleted{p.id});
    auto& rt = runtime_[p.id];
    rt.state = ProcState::Idle;
    rt.completed = true;
    rt.armed = false;
    for (auto it = branch_latch_.begin(); it != branch_latch_.end();) {
      it = it->rfind(p.id + ".", 0) == 0 ? branch_latch_.erase(it) : std::next(it);
    }
    stack_.pop_back();
    if (!stack_.empty()) emit(ev::ProcedureReturned{stack_.back().procedure, stack_.back().cursor});
  }
}

void Session::evaluate_abnormal_branches() {
  if (stack_.empty()) return;
  const auto top = stack_.back();
  const auto& p = proc(top.procedure);
  if (top.cursor.iblock >= p.iblocks.size()) return;
  const auto& b = p.iblocks[top.cursor.iblock];
  std::vector<std::string> raised;
  for (std::size_t i = 0; i < b.abnormal.size(); ++i) {
    auto key = p.id + "." + b.id + "#" + std::to_string(i);
    const auto& link = b.abnormal[i];
    if (eval(link.condition) != TriState::True) {
      branch_latch_.erase(key);
      continue;
    }
    if (!branch_latch_.insert(key).second) continue;
    emit(ev::AbnormalBranch{IBlockRef{p.id, b.id}, link.target});
    auto& rt = runtime_[link.target];
    if (rt.state == ProcState::Idle &&
        std::find(raised.begin(), raised.end(), link.target) == raised.end()) {
      raised.push_back(link.target);
    }
  }
  raise_popups(std::move(raised));
}

void Session::evaluate_triggers() {
  std::vector<std::string> raised;
  for (const auto& p : set_->procedures) {
    if (p.iblocks.empty() || !p.iblocks.front().trigger) continue;
    const auto& first = p.iblocks.front();
    auto v = eval(Condition::all({*first.trigger, first.context}));
    auto& rt = runtime_[p.id];
    if (v == TriState::False) rt.armed = true;
    if (v == TriState::True && rt.armed && rt.state == ProcState::Idle) raised.push_back(p.id);
  }
  raise_popups(std::move(raised));
}

void Session::raise_popups(std::vector<std::string> ids) {
  auto order = [this](const std::string& a, const std::string& b) {
    auto pa = proc(a).priority();
    auto pb = proc(b).priority();
    if (pa != pb) return pa < pb;
    return decl_index(a) < decl_index(b);
  };
  std::sort(ids.begin(), ids.end(), order);
  for (const auto& id : ids) {
    auto& rt = runtime_[id];
    rt.state = ProcState::Pending;
    rt.armed = false;
    pending_.insert(std::upper_bound(pending_.begin(), pending_.end(), id, order), id);
    emit(ev::PopupRaised{id, proc(id).ecam});
  }
}

std::vector<EngineEvent> Session::apply_state(FlightState state) {
  if ((last_state_tick_ && state.tick <= *last_state_tick_) || state.tick < now_) {
    throw Error(ErrorCode::StaleTick, "state tick " + std::to_string(state.tick) +
                                          " does not advance past " + std::to_string(now_));
  }
  for (const auto& [name, value] : state.values) {
    if (name == kPhaseParam || name == kCheckAllDone) {
      throw Error(ErrorCode::InvalidState, name + " cannot be assigned");
    }
    const auto* decl = set_->registry.find(name);
    if (decl == nullptr) throw Error(ErrorCode::UnknownParameter, "unknown parameter " + name);
    if (!value_fits(value, *decl)) {
      throw Error(ErrorCode::InvalidState, "value " + format_value(value) + " does not fit " + name);
    }
  }

  auto mark = log_.size();
  bool phase_changed = history_.empty() || history_.back().phase != state.phase;
  now_ = state.tick;
  last_state_tick_ = state.tick;
  history_.push_back(std::move(state));
  if (history_.size() > history_bound_) {
    history_.erase(history_.begin(), history_.begin() + static_cast<std::ptrdiff_t>(history_.size() - history_bound_));
  }
  if (phase_changed) page_ = history_.back().phase;

  update_applicability();
  for (const auto& frame : stack_) auto_detect(frame);
  advance();
  evaluate_abnormal_branches();
  evaluate_triggers();
  return since(mark);
}

// ---------------------------------------------------------------------------
// Commands

void Session::activate(const std::string& id, std::optional<Cursor> saved) {
  auto& rt = runtime_[id];
  const auto& p = proc(id);
  if (rt.completed && !saved) {
    // A fresh run of a procedure that has completed before starts from a
    // clean sheet.
    for (const auto& b : p.iblocks) {
      for (const auto& a : b.actions) {
        auto& s = status_ref(ActionRef{p.id, a.id});
        if (s != ActionStatus::NotApplicable) s = ActionStatus::ToDo;
      }
    }
    rt.completed = false;
  }
  if (stack_.empty()) {
    emit(ev::ProcedureActivated{id});
  } else {
    emit(ev::ProcedurePushed{id, stack_.back().procedure});
  }
  rt.state = ProcState::Active;
  rt.armed = false;
  rt.activated = true;
  stack_.push_back(Frame{id, saved.value_or(Cursor{})});
  refresh_cursor(stack_.back());
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::vector<EngineEvent> Session::apply_command(const PilotCommand& command, std::optional<std::int64_t> tick) {
  if (tick && *tick < now_) {
    throw Error(ErrorCode::StaleTick, "command tick " + std::to_string(*tick) + " is before " + std::to_string(now_));
  }

  // Resolve and check legality before touching any state.
  auto action_of = [&](const ActionRef& ref) -> const Action& {
    const auto& p = proc(ref.procedure);
    const auto* a = p.find_action(ref.action);
    if (a == nullptr) throw Error(ErrorCode::UnknownRef, "unknown action " + ref.str());
    if (!in_display_context(ref.procedure)) illegal(ref.procedure + " is not displayed");
    if (!is_actionable(a->kind)) illegal(std::string(to_string(a->kind)) + " " + ref.str() + " has no status");
    return *a;
  };
  auto state_of = [&](const std::string& id) { return runtime_.at(proc(id).id).state; };
  auto pending_pos = [&](const std::string& id) { return std::find(pending_.begin(), pending_.end(), id); };
  auto deferred_pos = [&](const std::string& id) {
    return std::find_if(deferred_.begin(), deferred_.end(),
                        [&](const DeferredEntry& d) { return d.procedure == id; });
  };

  std::visit(
      overloaded{
          [&](const cmd::MarkDone& c) {
            action_of(c.action);
            auto s = status(c.action);
            if (s != ActionStatus::ToDo && s != ActionStatus::Postponed) {
              illegal("MarkDone on " + c.action.str() + " in status " + std::string(to_string(s)));
            }
          },
          [&](const cmd::Wait& c) {
            action_of(c.action);
            auto s = status(c.action);
            if (s != ActionStatus::ToDo) illegal("Wait on " + c.action.str() + " in status " + std::string(to_string(s)));
          },
          [&](const cmd::CheckAll& c) {
            const auto& p = proc(c.iblock.procedure);
            const auto* b = p.find_iblock(c.iblock.iblock);
            if (b == nullptr) throw Error(ErrorCode::UnknownRef, "unknown iblock " + c.iblock.str());
            if (!in_display_context(p.id)) illegal(p.id + " is not displayed");
            bool any = false;
            for (const auto& a : b->actions) {
              auto s = is_actionable(a.kind) ? status(ActionRef{p.id, a.id}) : ActionStatus::NotApplicable;
              any = any || s == ActionStatus::ToDo || s == ActionStatus::Postponed;
            }
            if (!any) illegal("nothing left to check in " + c.iblock.str());
          },
          [&](const cmd::DeferProcedure& c) {
            auto s = state_of(c.procedure);
            bool top = !stack_.empty() && stack_.back().procedure == c.procedure;
            if (s != ProcState::Pending && !top) illegal(c.procedure + " is neither pending nor displayed");
          },
          [&](const cmd::OpenProcedure& c) {
            auto s = state_of(c.procedure);
            if (s == ProcState::Active) illegal(c.procedure + " is already open");
            if (s == ProcState::Idle) {
              bool linked = false;
              if (!stack_.empty()) {
                const auto& emb = proc(stack_.back().procedure).embedded;
                linked = std::find(emb.begin(), emb.end(), c.procedure) != emb.end();
              }
              if (!linked && !in_display_context(c.procedure)) illegal(c.procedure + " is not displayed");
            }
          },
          [&](const cmd::AcknowledgePopup& c) {
            proc(c.procedure);
            if (pending_.empty() || pending_.front() != c.procedure) illegal(c.procedure + " is not the displayed pop-up");
          },
          [&](const cmd::NavigatePhase&) {},
          [&](const cmd::ResumeFromReminder& c) {
            if (state_of(c.procedure) != ProcState::Deferred) illegal(c.procedure + " has no reminder");
          },
      },
      command);

  auto mark = log_.size();
  if (tick) now_ = *tick;

  std::visit(
      overloaded{
          [&](const cmd::MarkDone& c) {
            set_status(c.action, ActionStatus::DoneManual);
            page_focus_[page_] = c.action.procedure;
          },
          [&](const cmd::Wait& c) {
            set_status(c.action, ActionStatus::Postponed);
            page_focus_[page_] = c.action.procedure;
          },
          [&](const cmd::CheckAll& c) {
            const auto& p = proc(c.iblock.procedure);
            for (const auto& a : p.find_iblock(c.iblock.iblock)->actions) {
              if (!is_actionable(a.kind)) continue;
              ActionRef ref{p.id, a.id};
              auto s = status(ref);
              if (s == ActionStatus::ToDo || s == ActionStatus::Postponed) set_status(ref, ActionStatus::DoneManual);
            }
            page_focus_[page_] = p.id;
          },
          [&](const cmd::DeferProcedure& c) {
            auto& rt = runtime_[c.procedure];
            std::optional<Cursor> saved;
            if (rt.state == ProcState::Pending) {
              pending_.erase(pending_pos(c.procedure));
            } else {
              saved = stack_.back().cursor;
              stack_.pop_back();
            }
            rt.state = ProcState::Deferred;
            deferred_.push_back(DeferredEntry{c.procedure, saved, true});
            emit(ev::ReminderShown{c.procedure});
            if (saved && !stack_.empty()) emit(ev::ProcedureReturned{stack_.back().procedure, stack_.back().cursor});
          },
          [&](const cmd::OpenProcedure& c) {
            auto s = runtime_[c.procedure].state;
            std::optional<Cursor> saved;
            if (s == ProcState::Pending) {
              pending_.erase(pending_pos(c.procedure));
            } else if (s == ProcState::Deferred) {
              auto it = deferred_pos(c.procedure);
              saved = it->saved;
              deferred_.erase(it);
            }
            activate(c.procedure, saved);
            page_focus_[page_] = c.procedure;
          },
          [&](const cmd::AcknowledgePopup& c) {
            pending_.erase(pending_.begin());
            if (c.accept) {
              activate(c.procedure, std::nullopt);
            } else {
              runtime_[c.procedure].state = ProcState::Deferred;
              deferred_.push_back(DeferredEntry{c.procedure, std::nullopt, true});
              emit(ev::ReminderShown{c.procedure});
            }
          },
          [&](const cmd::NavigatePhase& c) { page_ = c.phase; },
          [&](const cmd::ResumeFromReminder& c) {
            auto it = deferred_pos(c.procedure);
            auto saved = it->saved;
            deferred_.erase(it);
            activate(c.procedure, saved);
          },
      },
      command);

  advance();
  return since(mark);
}

std::string Session::export_log() const {
  std::string out;
  for (const auto& e : log_) {
    out += format_event(e);
    out += '\n';
  }
  return out;
}

}  // namespace ocsis
