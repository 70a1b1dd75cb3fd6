#pragma once

#include "dioc/host.hpp"
#include "dioc/label.hpp"
#include "dioc/sched.hpp"

namespace dioc {

struct DiocSystem {
  GlobalState state;
  UpdateSet updates;
  DiocPtr proc;  // well-annotated
  int fresh_counter = 1;  // exceeds every index in proc
  InputQueues inputs;
};

/// Make a system from an annotated process; fresh counter starts past the
/// largest index.
DiocSystem make_dioc_system(DiocPtr annotated, GlobalState state = {},
                            UpdateSet updates = {}, InputQueues inputs = {});

struct DTransition {
  Label label;
  DiocSystem next;
  std::optional<int> unfold_index;  // set on While-unfold steps
};

/// True iff p only emits the termination tick (One up to Seq/Par).
bool d_can_tick(const DiocPtr& p);

/// roles(upd) ⊆ roles(body) and upd connected.
bool dioc_apply_update_rule_check(const DiocPtr& scope_body,
                                  const UpdateDef& upd);

/// All derivable transitions of the system. Change-Updates is not
/// enumerated; it is driven by the schedule in trace/exploration drivers.
std::vector<DTransition> dioc_enabled(const DiocSystem& sys,
                                      const HostEnv& host,
                                      std::vector<std::string>* diags = nullptr);

struct TraceResult {
  std::vector<Label> labels;
  bool stopped_on_empty = false;  // ended because nothing was enabled
  std::string error;              // nonempty on invalid schedule/script
};

TraceResult dioc_trace(DiocSystem sys, const HostEnv& host,
                       const Policy& policy, const Schedule& schedule,
                       int max_steps);

/// Serialized system state (proc dump + state + queues + update names +
/// fresh-independent) used as exploration memo key.
std::string dioc_state_key(const DiocSystem& sys);

}  // namespace dioc
