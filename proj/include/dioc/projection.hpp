#pragma once

#include "dioc/dpoc.hpp"

namespace dioc {

/// Auxiliary-action index assignments for one annotated program: for each
/// if/while construct index and participant role, the fresh index of the
/// participant's guard input (and, for while, of the per-iteration ack).
/// Allocated deterministically so every per-role projection agrees.
struct AuxScheme {
  std::map<std::pair<int, Role>, std::pair<int, int>> slots;  // {i, j}

  const std::pair<int, int>& at(int construct, const Role& r) const;
};

/// Walks p in preorder, allocating from `counter` (one index per if
/// participant, two per while participant, roles in sorted order).
AuxScheme make_aux_scheme(const DiocPtr& p, int& counter);

/// Auxiliary operation o*_n.
Operation aux_op(int n);

/// Process projection of a well-annotated DIOC on one role.
DpocPtr pi(const DiocPtr& p, const Role& s, const AuxScheme& scheme);

/// Network projection: one DPOC role per element of roles_of(p), each with
/// its slice of the global state. The scheme is allocated internally from
/// max_index(p) + 1 unless a counter is supplied.
Network proj(const DiocPtr& p, const GlobalState& sigma);
Network proj(const DiocPtr& p, const GlobalState& sigma, int& counter);

/// Copy of an update body with fresh construct indexes and all operations
/// prefixed with the enclosing scope index n (extended operations n.o).
DiocPtr fresh_indexes(const DiocPtr& upd, int scope_index, int& counter);

}  // namespace dioc
