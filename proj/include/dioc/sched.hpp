#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dioc/ast.hpp"

namespace dioc {

struct UpdateDef {
  std::string name;
  DiocPtr body;  // unannotated; fresh-indexed on application
  bool connected = false;
};

using UpdateSet = std::vector<UpdateDef>;

/// Transition-choice policy for single-trace runs.
struct Policy {
  enum class Kind { FirstEnabled, Seeded, Scripted };
  Kind kind = Kind::FirstEnabled;
  unsigned seed = 0;
  std::vector<int> script;  // choice index per step, Scripted only
};

/// A reproducible Change-Updates occurrence: after `after_weak_label` weak
/// labels have been emitted, replace the update set.
struct ScheduleChange {
  int after_weak_label = 0;
  UpdateSet new_updates;
};

struct Schedule {
  std::vector<ScheduleChange> changes;
};

}  // namespace dioc
