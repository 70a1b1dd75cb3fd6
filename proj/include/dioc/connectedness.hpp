#pragma once

#include <vector>

#include "dioc/ast.hpp"
#include "dioc/parser.hpp"

namespace dioc {

/// Unordered pair of roles; {r,r} encodes a local action at r.
struct RolePair {
  Role a, b;  // normalized so a <= b

  RolePair() = default;
  RolePair(Role x, Role y) {
    if (y < x) std::swap(x, y);
    a = std::move(x);
    b = std::move(y);
  }
  bool contains(const Role& r) const { return a == r || b == r; }
  bool intersects(const RolePair& o) const {
    return contains(o.a) || contains(o.b);
  }
  auto operator<=>(const RolePair&) const = default;
};

using PairSet = std::set<RolePair>;

PairSet trans_i(const DiocPtr& p);
PairSet trans_f(const DiocPtr& p);

/// True iff every pair of S intersects every pair of S2. O(|S|+|S2|): when
/// both sets have more than 9 pairs the check can only succeed through a
/// single role common to every pair of both sets.
bool pair_cover_check(const PairSet& s, const PairSet& s2);

/// Reference quadratic version of the same predicate.
bool pair_cover_brute(const PairSet& s, const PairSet& s2);

struct ConnReport {
  bool connected = true;
  std::vector<Diagnostic> violations;
};

/// Single bottom-up pass computing trans_i / trans_f / operation signatures
/// per node; sequence nodes use pair_cover_check, parallel nodes signature
/// disjointness.
ConnReport check_connected(const DiocPtr& p);

}  // namespace dioc
