#pragma once

#include <string>

#include "dioc/ast.hpp"

namespace dioc {

/// A transition observation, shared between both semantic levels. Send /
/// Recv / SendHo occur only in role-level offers, never in system traces.
struct Label {
  enum class Kind {
    Interaction,
    HoInteraction,
    Tau,
    Tick,
    Update,
    NoUp,
    UpdatesChanged,
    Send,
    Recv,
    SendHo
  };

  Kind kind = Kind::Tau;
  Operation op;
  Role from, to;
  Value value;
  std::string var;
  std::string update_name;  // Update / UpdatesChanged

  static Label tau() { return {}; }
  static Label tick() {
    Label l;
    l.kind = Kind::Tick;
    return l;
  }
  static Label interaction(Operation op, Role from, Value v, Role to,
                           std::string var) {
    Label l;
    l.kind = Kind::Interaction;
    l.op = std::move(op);
    l.from = std::move(from);
    l.value = std::move(v);
    l.to = std::move(to);
    l.var = std::move(var);
    return l;
  }
  static Label ho_interaction(Operation op, Role from, Role to) {
    Label l;
    l.kind = Kind::HoInteraction;
    l.op = std::move(op);
    l.from = std::move(from);
    l.to = std::move(to);
    return l;
  }
  static Label update(std::string name) {
    Label l;
    l.kind = Kind::Update;
    l.update_name = std::move(name);
    return l;
  }
  static Label noup() {
    Label l;
    l.kind = Kind::NoUp;
    return l;
  }
  static Label updates_changed(std::string description) {
    Label l;
    l.kind = Kind::UpdatesChanged;
    l.update_name = std::move(description);
    return l;
  }

  /// Deterministic key used for trace-set comparison.
  std::string key() const;

  /// One JSON object (single line) per the trace output format.
  std::string json() const;

  bool operator==(const Label& o) const { return key() == o.key(); }
  bool operator<(const Label& o) const { return key() < o.key(); }
};

/// True iff the label survives weakening (no tau, no private-operation
/// interaction, no role-level offer labels).
bool label_is_weak_visible(const Label& l);

/// Weak form: operation prefixes stripped. Precondition: weak-visible.
Label label_weaken(const Label& l);

}  // namespace dioc
