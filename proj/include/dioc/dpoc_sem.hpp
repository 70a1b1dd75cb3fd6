#pragma once

#include <functional>

#include "dioc/dpoc.hpp"
#include "dioc/host.hpp"
#include "dioc/label.hpp"
#include "dioc/sched.hpp"

namespace dioc {

struct DpocSystem {
  UpdateSet updates;
  Network net;
  int fresh_counter = 1;  // exceeds every index in net
  InputQueues inputs;
  bool ticked = false;  // a √ system transition has occurred
};

DpocSystem make_dpoc_system(Network net, UpdateSet updates = {},
                            InputQueues inputs = {}, int fresh_counter = 1);

/// Seeded faults in the update protocol, used by mutation tests.
enum class LeadUpFault {
  None,
  MisprefixOperation,  // shipped code gets a wrong operation prefix
  SwapShippedCode      // payloads of the first two participants swapped
};

enum class OfferKind {
  Tau,
  Tick,
  Send,
  SendHo,
  Recv,
  RecvHo,
  LeadUp,
  LeadNoUp
};

/// One step a single role could take, with enough data for the system rules
/// to materialize the successor. Receives are lazy in the communicated
/// value / payload.
struct RoleOffer {
  OfferKind kind = OfferKind::Tau;
  Operation op;
  Role peer;
  std::string var;
  Value value;
  HoPayload payload;
  std::optional<IndexTag> index;  // acting construct's index
  std::optional<int> unfold_index;

  DpocPtr next_proc;      // Tau / Tick / Send / SendHo
  LocalState next_local;  // after the step
  InputQueue next_queue;  // role's input queue after expression evaluation

  std::function<DpocPtr(const Value&)> recv_next;
  std::function<DpocPtr(const HoPayload&)> recvho_next;

  // LeadUp / LeadNoUp; builds the coordinator continuation, drawing fresh
  // indexes from the supplied allocator.
  std::function<DpocPtr(int&)> lead_next;
  std::string update_name;
};

/// Offers of one role's process. queue/local are the role's current values.
std::vector<RoleOffer> role_offers(const DpocPtr& proc, const LocalState& local,
                                   const InputQueue& queue, const Role& self,
                                   const UpdateSet& updates,
                                   const HostEnv& host,
                                   LeadUpFault fault = LeadUpFault::None,
                                   std::vector<std::string>* diags = nullptr);

struct PTransition {
  Label label;
  DpocSystem next;
  std::optional<std::pair<Role, int>> unfold;  // role + while index
  // acting construct indexes, for event-minimality checking
  std::vector<std::pair<Role, IndexTag>> acted;
};

/// All derivable system transitions (Change-Updates excluded; it is driven
/// by the schedule in the trace/exploration drivers).
std::vector<PTransition> system_enabled(const DpocSystem& sys,
                                        const HostEnv& host,
                                        LeadUpFault fault = LeadUpFault::None);

struct DpocTraceResult {
  std::vector<Label> labels;
  bool stopped_on_empty = false;
  std::string error;
};

DpocTraceResult dpoc_trace(DpocSystem sys, const HostEnv& host,
                           const Policy& policy, const Schedule& schedule,
                           int max_steps,
                           LeadUpFault fault = LeadUpFault::None);

std::string dpoc_state_key(const DpocSystem& sys);

}  // namespace dioc
