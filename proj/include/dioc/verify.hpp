#pragma once

#include "dioc/dioc_sem.hpp"
#include "dioc/dpoc_sem.hpp"

namespace dioc {

/// Weak form of a strong label sequence: drops silent steps and private
/// interactions, strips operation prefixes.
std::vector<Label> weaken(const std::vector<Label>& labels);

/// Normal form of a network mid-update-protocol: resolves pending auxiliary
/// conditional/iteration broadcasts and higher-order deliveries to fixpoint,
/// then erases closing acks not under a while, strips operation prefixes and
/// collapses inert 1 padding.
Network upd_normalize(const Network& n);

struct ExploreOpts {
  int bound = 40;       // weak labels per path
  int loop_bound = 2;   // while unfoldings per construct (and role)
  long state_budget = 2000000;
};

/// Bounded weak-trace sets. Traces are stored as sequences of weakened label
/// keys. `complete` holds maximal paths (terminated ones end with the tick
/// key; stuck ones do not), `truncated` holds prefixes cut by the bound or
/// the loop limit.
struct TraceSet {
  std::set<std::vector<std::string>> complete;
  std::set<std::vector<std::string>> truncated;
  long states = 0;
  bool budget_exceeded = false;
};

TraceSet dioc_trace_set(const DiocSystem& sys, const HostEnv& host,
                        const Schedule& schedule, const ExploreOpts& opts);
TraceSet dpoc_trace_set(const DpocSystem& sys, const HostEnv& host,
                        const Schedule& schedule, const ExploreOpts& opts,
                        LeadUpFault fault = LeadUpFault::None);

struct EquivResult {
  bool equivalent = false;
  std::string error;  // refusal (non-connected / non-initial) or budget
  std::vector<std::string> counterexample;
  std::string side;  // which level exhibits the counterexample trace
  long dioc_states = 0;
  long dpoc_states = 0;
  bool truncated = false;
};

/// Bounded weak-trace equivalence of a choreography against its own
/// projection, under one shared schedule and host environment.
EquivResult check_equiv(const DiocSystem& sys, const HostEnv& host,
                        const Schedule& schedule, const ExploreOpts& opts);

/// Same comparison against an externally supplied network (used to show
/// that broken projections are rejected).
EquivResult check_equiv_against(const DiocSystem& sys, const DpocSystem& dp,
                                const HostEnv& host, const Schedule& schedule,
                                const ExploreOpts& opts,
                                LeadUpFault fault = LeadUpFault::None);

struct FreedomResult {
  bool deadlock_free = true;
  bool race_free = true;
  bool orphan_free = true;
  std::string deadlock_witness;
  std::string race_witness;
  std::string orphan_witness;
  long states = 0;
  bool partial = false;  // budget or loop bound cut the exploration
};

FreedomResult check_freedom(const DpocSystem& sys, const HostEnv& host,
                            const ExploreOpts& opts);

}  // namespace dioc
