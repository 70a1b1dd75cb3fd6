#pragma once

#include "dioc/dpoc.hpp"

namespace dioc {

/// An occurrence of an observable action, identified by its global index.
struct Event {
  enum class Kind {
    Sending,
    Receiving,
    Assign,
    ScopeInit,
    ScopeTerm,
    GuardIf,
    GuardWhile
  };

  Kind kind = Kind::Assign;
  GlobalIndex gidx;
  std::set<Role> roles;  // scope events may span several roles
  std::optional<Operation> op;
  std::optional<Role> peer;  // target of a send, sender of a receive

  bool is_comm() const {
    return kind == Kind::Sending || kind == Kind::Receiving;
  }
  bool in_role(const Role& r) const { return roles.count(r) > 0; }

  /// Identity key; role-independent for scope events so the two levels of
  /// a projection compare equal.
  std::string key() const;
  std::string display() const;
};

/// Event set plus the generating edges of the causality relation. Order
/// queries go through a sealed reachability closure rather than an explicit
/// pair set.
struct EventGraph {
  std::vector<Event> events;
  std::map<std::string, int> by_key;  // first occurrence per key
  std::vector<std::set<int>> succ;    // generating edges
  // per event: enclosing if-branches (if gidx key -> branch taken),
  // enclosing scopes and enclosing whiles (global indexes)
  std::vector<std::map<std::string, bool>> branches;
  std::vector<std::vector<GlobalIndex>> scopes;
  std::vector<std::vector<GlobalIndex>> whiles;
  std::vector<std::set<int>> matches;  // matching communication events

  /// Computes the reachability closure; the synchronisation clause (a
  /// predecessor of an event also precedes the event's match's successors)
  /// is folded in iteratively when matches exist. Call once after building.
  void seal();

  /// Reflexive order query; seal() first.
  bool leq(int a, int b) const;

  bool conflicting(int a, int b) const;

  /// Events of role r whose own (innermost) index equals `own`.
  std::vector<int> find_by_own_index(const Role& r, const IndexTag& own) const;

  /// True iff every strict predecessor of ev lies in `exempt`.
  bool minimal(int ev, const std::set<int>& exempt = {}) const;

 private:
  std::vector<std::vector<bool>> reach_;
  bool sealed_ = false;
};

/// Events and causality relation of an annotated choreography (sealed).
EventGraph events_dioc(const DiocPtr& p);

/// Events and causality relation of an annotated network (sealed).
EventGraph events_dpoc(const Network& n);

struct WaViolation {
  std::string condition;  // "C1".."C6"
  std::string detail;
};

/// Static well-annotatedness conditions C1 and C3..C6 (C2 is dynamic and
/// checked during exploration via EventGraph::minimal).
std::vector<WaViolation> check_well_annotated_dpoc(const EventGraph& g);
std::vector<WaViolation> check_well_annotated_dpoc(const Network& n);

}  // namespace dioc
