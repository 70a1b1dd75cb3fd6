#pragma once

#include <map>

#include "dioc/ast.hpp"

namespace dioc {

struct DpocNode;
using DpocPtr = std::shared_ptr<const DpocNode>;

/// Payload of a higher-order send: shipped code or the `no` token. Carries
/// the index the receiver must put on its end-of-scope ok send so that it
/// pairs with the coordinator's closing receive.
struct HoPayload {
  bool is_code = false;
  DpocPtr code;  // set iff is_code
  std::optional<IndexTag> ack_index;

  static HoPayload no(std::optional<IndexTag> ack = {}) {
    HoPayload p;
    p.ack_index = ack;
    return p;
  }
  static HoPayload of(DpocPtr c, std::optional<IndexTag> ack = {}) {
    HoPayload p;
    p.is_code = true;
    p.code = std::move(c);
    p.ack_index = ack;
    return p;
  }
};

struct PRecv {
  Operation op;
  std::string var;  // "_" allowed
  Role from;
};
struct PSend {
  Operation op;
  ExprPtr expr;
  Role to;
};
/// Higher-order send used by the update protocol.
struct PSendHo {
  Operation op;
  HoPayload payload;
  Role to;
};
struct PAssign {
  std::string var;
  ExprPtr expr;
};
struct PSeq {
  DpocPtr left, right;
};
struct PPar {
  DpocPtr left, right;
};
struct POne {};
struct PZero {};
struct PIf {
  ExprPtr guard;
  DpocPtr then_branch, else_branch;
};
struct PWhile {
  ExprPtr guard;
  DpocPtr body;
};
/// Scope at its coordinator; carries the involved-role set.
struct PScopeLead {
  Role coordinator;
  DpocPtr body;
  std::set<Role> roles;
  std::string name;
};
/// Scope at a non-coordinating participant.
struct PScopePlain {
  Role coordinator;
  DpocPtr body;
  std::string name;
};

struct DpocNode {
  std::variant<PRecv, PSend, PSendHo, PAssign, PSeq, PPar, POne, PZero, PIf,
               PWhile, PScopeLead, PScopePlain>
      node;
  std::optional<IndexTag> index;
};

DpocPtr p_recv(Operation op, std::string var, Role from,
               std::optional<IndexTag> idx = {});
DpocPtr p_send(Operation op, ExprPtr e, Role to,
               std::optional<IndexTag> idx = {});
DpocPtr p_send_ho(Operation op, HoPayload payload, Role to,
                  std::optional<IndexTag> idx = {});
DpocPtr p_assign(std::string var, ExprPtr e, std::optional<IndexTag> idx = {});
DpocPtr p_seq(DpocPtr l, DpocPtr r);
DpocPtr p_par(DpocPtr l, DpocPtr r);
DpocPtr p_one();
DpocPtr p_zero();
DpocPtr p_if(ExprPtr guard, DpocPtr t, DpocPtr e,
             std::optional<IndexTag> idx = {});
DpocPtr p_while(ExprPtr guard, DpocPtr body, std::optional<IndexTag> idx = {});
DpocPtr p_scope_lead(Role coord, DpocPtr body, std::set<Role> roles,
                     std::string name = "", std::optional<IndexTag> idx = {});
DpocPtr p_scope_plain(Role coord, DpocPtr body, std::string name = "",
                      std::optional<IndexTag> idx = {});

struct RoleProc {
  DpocPtr proc;
  LocalState local;
};

/// Parallel composition of named roles, each with its local state.
struct Network {
  std::map<Role, RoleProc> roles;
};

/// True iff the process can emit the termination tick (is 1 up to Seq/Par).
bool p_can_tick(const DpocPtr& p);

/// True iff p is One, or Seq/Par of such (inert padding).
bool p_is_one_like(const DpocPtr& p);

/// Collapse 1;P and 1|P padding, bottom-up. Preserves indexes elsewhere.
DpocPtr p_collapse_ones(const DpocPtr& p);

/// Deterministic serialization (state keys, structural comparison).
std::string dump_dpoc(const DpocPtr& p, bool with_indexes = true);

/// Multi-line rendering in the style of the per-role listings.
std::string pretty_dpoc(const DpocPtr& p, int indent = 0);

std::string dump_network(const Network& n, bool with_indexes = true);

inline bool p_struct_equal(const DpocPtr& a, const DpocPtr& b,
                           bool with_indexes = false) {
  return dump_dpoc(a, with_indexes) == dump_dpoc(b, with_indexes);
}

}  // namespace dioc
