#pragma once

// Test-side generators and reference oracles. Everything here is written
// directly from the definitions, independent of the single-pass checker in
// src/connectedness.cpp, so disagreements point at a real bug.

#include <random>
#include <string>
#include <vector>

#include "dioc/ast.hpp"
#include "dioc/connectedness.hpp"

namespace dioc::testsupport {

// ---------------------------------------------------------------------------
// Reference connectedness oracle
// ---------------------------------------------------------------------------

inline PairSet naive_trans_i(const DiocPtr& p);
inline PairSet naive_trans_f(const DiocPtr& p);

inline PairSet naive_trans_i(const DiocPtr& p) {
  if (auto* n = std::get_if<DInteraction>(&p->node))
    return {RolePair{n->sender, n->receiver}};
  if (auto* n = std::get_if<DAssign>(&p->node))
    return {RolePair{n->role, n->role}};
  if (std::get_if<DOne>(&p->node) || std::get_if<DZero>(&p->node)) return {};
  if (auto* n = std::get_if<DSeq>(&p->node)) {
    PairSet l = naive_trans_i(n->left);
    return l.empty() ? naive_trans_i(n->right) : l;
  }
  if (auto* n = std::get_if<DPar>(&p->node)) {
    PairSet l = naive_trans_i(n->left);
    PairSet r = naive_trans_i(n->right);
    l.insert(r.begin(), r.end());
    return l;
  }
  if (auto* n = std::get_if<DIf>(&p->node))
    return {RolePair{n->role, n->role}};
  if (auto* n = std::get_if<DWhile>(&p->node))
    return {RolePair{n->role, n->role}};
  auto& n = std::get<DScope>(p->node);
  return {RolePair{n.coordinator, n.coordinator}};
}

inline PairSet naive_trans_f(const DiocPtr& p) {
  if (auto* n = std::get_if<DInteraction>(&p->node))
    return {RolePair{n->sender, n->receiver}};
  if (auto* n = std::get_if<DAssign>(&p->node))
    return {RolePair{n->role, n->role}};
  if (std::get_if<DOne>(&p->node) || std::get_if<DZero>(&p->node)) return {};
  if (auto* n = std::get_if<DSeq>(&p->node)) {
    PairSet r = naive_trans_f(n->right);
    return r.empty() ? naive_trans_f(n->left) : r;
  }
  if (auto* n = std::get_if<DPar>(&p->node)) {
    PairSet l = naive_trans_f(n->left);
    PairSet r = naive_trans_f(n->right);
    l.insert(r.begin(), r.end());
    return l;
  }
  if (auto* n = std::get_if<DIf>(&p->node)) {
    PairSet t = naive_trans_f(n->then_branch);
    PairSet e = naive_trans_f(n->else_branch);
    if (t.empty() && e.empty()) return {RolePair{n->role, n->role}};
    t.insert(e.begin(), e.end());
    return t;
  }
  if (auto* n = std::get_if<DWhile>(&p->node)) {
    PairSet b = naive_trans_f(n->body);
    if (b.empty()) return {RolePair{n->role, n->role}};
    return b;
  }
  auto& n = std::get<DScope>(p->node);
  PairSet out;
  std::set<Role> rs = roles_of(n.body);
  bool only_coord = true;
  for (auto& r : rs)
    if (!(r == n.coordinator)) only_coord = false;
  if (only_coord) {
    out.insert(RolePair{n.coordinator, n.coordinator});
  } else {
    for (auto& r : rs)
      if (!(r == n.coordinator)) out.insert(RolePair{r, n.coordinator});
  }
  return out;
}

/// Definitional check: walk every subterm, test every Seq split with the
/// quadratic pair cover and every Par split with operation disjointness.
inline bool naive_connected(const DiocPtr& p) {
  if (auto* n = std::get_if<DSeq>(&p->node)) {
    if (!naive_connected(n->left) || !naive_connected(n->right)) return false;
    for (auto& f : naive_trans_f(n->left))
      for (auto& i : naive_trans_i(n->right))
        if (!f.intersects(i)) return false;
    return true;
  }
  if (auto* n = std::get_if<DPar>(&p->node)) {
    if (!naive_connected(n->left) || !naive_connected(n->right)) return false;
    auto l = operations_of(n->left);
    for (auto& s : operations_of(n->right))
      if (l.count(s)) return false;
    return true;
  }
  if (auto* n = std::get_if<DIf>(&p->node))
    return naive_connected(n->then_branch) && naive_connected(n->else_branch);
  if (auto* n = std::get_if<DWhile>(&p->node))
    return naive_connected(n->body);
  if (auto* n = std::get_if<DScope>(&p->node))
    return naive_connected(n->body);
  return true;
}

// ---------------------------------------------------------------------------
// Random program generator
// ---------------------------------------------------------------------------

struct Gen {
  std::mt19937 rng;
  std::vector<Role> roles;
  std::vector<std::string> ops;
  int op_serial = 0;

  explicit Gen(unsigned seed) : rng(seed) {
    for (char c : {'a', 'b', 'c', 'd', 'e'}) roles.push_back(Role{std::string(1, c)});
    for (int i = 0; i < 8; ++i) ops.push_back("op" + std::to_string(i));
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  const Role& role() { return roles[pick((int)roles.size())]; }
  std::string op_name() {
    // mostly reuse (provokes PAR-CONN overlaps), sometimes mint a new name
    if (pick(4) == 0) return "fresh" + std::to_string(op_serial++);
    return ops[pick((int)ops.size())];
  }

  DiocPtr leaf() {
    switch (pick(5)) {
      case 0:
        return d_one();
      case 1: {
        const Role& r = role();
        return d_assign("x" + std::to_string(pick(4)), r,
                        Expr::literal(Value::integer(pick(10))));
      }
      default: {
        Role s = role(), r = role();
        while (r == s) r = roles[pick((int)roles.size())];
        return d_interaction(Operation{op_name()}, s,
                             Expr::literal(Value::integer(pick(10))), r, "y");
      }
    }
  }

  /// Program with roughly `budget` indexable constructs.
  DiocPtr program(int budget) {
    if (budget <= 1) return leaf();
    switch (pick(6)) {
      case 0:
      case 1: {
        int l = 1 + pick(budget - 1);
        return d_seq(program(l), program(budget - l));
      }
      case 2: {
        int l = 1 + pick(budget - 1);
        return d_par(program(l), program(budget - l));
      }
      case 3: {
        int l = (budget - 1) / 2;
        return d_if(Expr::var("x0"), role(), program(std::max(1, l)),
                    pick(3) == 0 ? d_one() : program(std::max(1, budget - 1 - l)));
      }
      case 4:
        return d_while(Expr::var("x0"), role(), program(budget - 1));
      default: {
        DiocPtr body = program(budget - 1);
        std::set<Role> rs = roles_of(body);
        Role coord = rs.empty() ? role() : *rs.begin();
        return d_scope(coord, body);
      }
    }
  }

  /// Random unordered role pair set for the cover predicate.
  PairSet pair_set(int max_size) {
    PairSet s;
    int n = 1 + pick(max_size);
    bool star = pick(3) == 0;  // force a common role to reach the large path
    Role hub = role();
    for (int i = 0; i < n; ++i) {
      Role a = star ? hub : role();
      Role b = role();
      s.insert(RolePair{a, b});
    }
    return s;
  }
};

/// Sequential chain of n interactions among three roles, for scaling runs.
inline DiocPtr chain_program(int n) {
  std::vector<Role> rs{Role{"a"}, Role{"b"}, Role{"c"}};
  DiocPtr acc;
  for (int i = 0; i < n; ++i) {
    const Role& s = rs[i % 3];
    const Role& r = rs[(i + 1) % 3];
    DiocPtr node = d_interaction(Operation{"hop" + std::to_string(i % 16)}, s,
                                 Expr::literal(Value::integer(i)), r, "v");
    acc = acc ? d_seq(acc, node) : node;
  }
  return acc;
}

}  // namespace dioc::testsupport
