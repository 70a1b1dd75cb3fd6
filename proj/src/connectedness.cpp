#include "dioc/connectedness.hpp"

#include <sstream>

namespace dioc {

namespace {

struct ConnInfo {
  PairSet ti, tf;
  std::set<OpSignature> ops;
  std::set<Role> roles;
};

SrcSpan span_of(const DiocPtr& p) {
  if (p->span.line > 0) return p->span;
  SrcSpan found{};
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, DSeq> || std::is_same_v<T, DPar>) {
          found = span_of(n.left);
          if (found.line == 0) found = span_of(n.right);
        } else if constexpr (std::is_same_v<T, DIf>) {
          found = span_of(n.then_branch);
        } else if constexpr (std::is_same_v<T, DWhile> ||
                             std::is_same_v<T, DScope>) {
          found = span_of(n.body);
        }
      },
      p->node);
  return found;
}

std::string pairs_text(const PairSet& s, size_t limit = 4) {
  std::ostringstream os;
  size_t i = 0;
  for (auto& p : s) {
    if (i++ >= limit) {
      os << " ...";
      break;
    }
    os << "{" << p.a.name << "," << p.b.name << "} ";
  }
  return os.str();
}

struct Checker {
  ConnReport report;

  ConnInfo walk(const DiocPtr& p) {
    return std::visit(
        [&](auto& n) -> ConnInfo {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, DInteraction>) {
            ConnInfo c;
            c.ti.insert(RolePair{n.sender, n.receiver});
            c.tf = c.ti;
            c.ops.insert({n.op, n.sender, n.receiver});
            c.roles = {n.sender, n.receiver};
            return c;
          } else if constexpr (std::is_same_v<T, DAssign>) {
            ConnInfo c;
            c.ti.insert(RolePair{n.role, n.role});
            c.tf = c.ti;
            c.roles = {n.role};
            return c;
          } else if constexpr (std::is_same_v<T, DOne> ||
                               std::is_same_v<T, DZero>) {
            return {};
          } else if constexpr (std::is_same_v<T, DSeq>) {
            return seq_chain(p);
          } else if constexpr (std::is_same_v<T, DPar>) {
            return par_chain(p);
          } else if constexpr (std::is_same_v<T, DIf>) {
            ConnInfo t = walk(n.then_branch);
            ConnInfo e = walk(n.else_branch);
            ConnInfo c;
            c.ti.insert(RolePair{n.role, n.role});
            if (t.tf.empty() && e.tf.empty()) {
              c.tf.insert(RolePair{n.role, n.role});
            } else {
              c.tf = t.tf;
              c.tf.insert(e.tf.begin(), e.tf.end());
            }
            c.ops = t.ops;
            c.ops.insert(e.ops.begin(), e.ops.end());
            c.roles = t.roles;
            c.roles.insert(e.roles.begin(), e.roles.end());
            c.roles.insert(n.role);
            return c;
          } else if constexpr (std::is_same_v<T, DWhile>) {
            ConnInfo b = walk(n.body);
            ConnInfo c;
            c.ti.insert(RolePair{n.role, n.role});
            if (b.tf.empty())
              c.tf.insert(RolePair{n.role, n.role});
            else
              c.tf = b.tf;
            c.ops = b.ops;
            c.roles = b.roles;
            c.roles.insert(n.role);
            return c;
          } else if constexpr (std::is_same_v<T, DScope>) {
            ConnInfo b = walk(n.body);
            ConnInfo c;
            c.ti.insert(RolePair{n.coordinator, n.coordinator});
            bool only_coord = true;
            for (auto& r : b.roles)
              if (!(r == n.coordinator)) only_coord = false;
            if (only_coord) {
              c.tf.insert(RolePair{n.coordinator, n.coordinator});
            } else {
              for (auto& r : b.roles)
                if (!(r == n.coordinator))
                  c.tf.insert(RolePair{r, n.coordinator});
            }
            c.ops = b.ops;
            c.roles = b.roles;
            c.roles.insert(n.coordinator);
            return c;
          }
        },
        p->node);
  }

  // Flatten a Seq (resp. Par) spine iteratively so long statement chains do
  // not grow the call stack. The per-split connectedness conditions do not
  // depend on the association of the chain.
  template <class NodeT>
  static void flatten(const DiocPtr& p, std::vector<DiocPtr>& out) {
    std::vector<DiocPtr> stack{p};
    while (!stack.empty()) {
      DiocPtr cur = stack.back();
      stack.pop_back();
      if (auto* n = std::get_if<NodeT>(&cur->node)) {
        stack.push_back(n->right);
        stack.push_back(n->left);
      } else {
        out.push_back(cur);
      }
    }
  }

  ConnInfo seq_chain(const DiocPtr& p) {
    std::vector<DiocPtr> parts;
    flatten<DSeq>(p, parts);
    std::vector<ConnInfo> infos;
    infos.reserve(parts.size());
    for (auto& q : parts) infos.push_back(walk(q));
    // suffix_ti[m] = trans_i of parts[m..]
    std::vector<const PairSet*> suffix_ti(parts.size() + 1, nullptr);
    static const PairSet kEmpty;
    suffix_ti[parts.size()] = &kEmpty;
    for (size_t m = parts.size(); m-- > 0;)
      suffix_ti[m] = infos[m].ti.empty() ? suffix_ti[m + 1] : &infos[m].ti;
    const PairSet* run_tf = &kEmpty;  // trans_f of parts[..m]
    for (size_t m = 0; m + 1 < parts.size(); ++m) {
      if (!infos[m].tf.empty()) run_tf = &infos[m].tf;
      if (!pair_cover_check(*run_tf, *suffix_ti[m + 1])) {
        report.connected = false;
        report.violations.push_back(
            {Diagnostic::Severity::Error, span_of(parts[m]),
             "sequence not connected: trans_f(left) = " + pairs_text(*run_tf) +
                 "does not cover trans_i(right) = " +
                 pairs_text(*suffix_ti[m + 1]),
             "SEQ-CONN"});
      }
    }
    if (!infos.back().tf.empty()) run_tf = &infos.back().tf;
    ConnInfo c;
    c.ti = *suffix_ti[0];
    c.tf = *run_tf;
    for (auto& i : infos) {
      c.ops.insert(i.ops.begin(), i.ops.end());
      c.roles.insert(i.roles.begin(), i.roles.end());
    }
    return c;
  }

  ConnInfo par_chain(const DiocPtr& p) {
    std::vector<DiocPtr> parts;
    flatten<DPar>(p, parts);
    ConnInfo c;
    for (auto& q : parts) {
      ConnInfo i = walk(q);
      std::vector<OpSignature> shared;
      for (auto& s : i.ops)
        if (c.ops.count(s)) shared.push_back(s);
      if (!shared.empty()) {
        std::ostringstream os;
        os << "parallel branches share operation signatures:";
        for (auto& s : shared)
          os << " " << s.op.display() << ":" << s.sender.name << "->"
             << s.receiver.name;
        report.connected = false;
        report.violations.push_back(
            {Diagnostic::Severity::Error, span_of(q), os.str(), "PAR-CONN"});
      }
      c.ti.insert(i.ti.begin(), i.ti.end());
      c.tf.insert(i.tf.begin(), i.tf.end());
      c.ops.insert(i.ops.begin(), i.ops.end());
      c.roles.insert(i.roles.begin(), i.roles.end());
    }
    return c;
  }
};

struct TransOnly {
  // like Checker::walk but without violation recording
  ConnInfo walk(const DiocPtr& p) {
    Checker c;
    return c.walk(p);
  }
};

}  // namespace

PairSet trans_i(const DiocPtr& p) { return TransOnly{}.walk(p).ti; }
PairSet trans_f(const DiocPtr& p) { return TransOnly{}.walk(p).tf; }

bool pair_cover_brute(const PairSet& s, const PairSet& s2) {
  for (auto& x : s)
    for (auto& y : s2)
      if (!x.intersects(y)) return false;
  return true;
}

bool pair_cover_check(const PairSet& s, const PairSet& s2) {
  if (s.empty() || s2.empty()) return true;
  if (std::min(s.size(), s2.size()) <= 9) {
    const PairSet& small = s.size() <= s2.size() ? s : s2;
    const PairSet& big = s.size() <= s2.size() ? s2 : s;
    for (auto& x : small)
      for (auto& y : big)
        if (!x.intersects(y)) return false;
    return true;
  }
  // Both sets exceed 9 distinct pairs: success requires one role present in
  // every pair of both sets. Candidates come from any single pair.
  const RolePair& first = *s.begin();
  for (const Role* cand : {&first.a, &first.b}) {
    bool ok = true;
    for (auto& x : s)
      if (!x.contains(*cand)) {
        ok = false;
        break;
      }
    if (ok)
      for (auto& y : s2)
        if (!y.contains(*cand)) {
          ok = false;
          break;
        }
    if (ok) return true;
  }
  return false;
}

ConnReport check_connected(const DiocPtr& p) {
  Checker c;
  c.walk(p);
  return std::move(c.report);
}

}  // namespace dioc
