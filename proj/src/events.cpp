#include "dioc/events.hpp"

#include <algorithm>
#include <sstream>

namespace dioc {

namespace {

std::string gidx_key(const GlobalIndex& g) { return g.display(); }

// Branch tags are invisible for matching: an (i,true)/(i,false) output
// matches the input indexed plain i.
std::string match_key(const GlobalIndex& g) {
  std::string s;
  for (auto& t : g.path) s += std::to_string(t.base) + ":";
  return s;
}

}  // namespace

std::string Event::key() const {
  std::string k;
  switch (kind) {
    case Kind::Sending:
      k = "s";
      break;
    case Kind::Receiving:
      k = "r";
      break;
    case Kind::Assign:
      k = "a";
      break;
    case Kind::ScopeInit:
      k = "up";
      break;
    case Kind::ScopeTerm:
      k = "dn";
      break;
    case Kind::GuardIf:
      k = "gi";
      break;
    case Kind::GuardWhile:
      k = "gw";
      break;
  }
  k += "(" + gidx_key(gidx);
  if (kind != Kind::ScopeInit && kind != Kind::ScopeTerm)
    for (auto& r : roles) k += ";" + r.name;
  if (op) k += ";" + op->display();
  if (peer) k += ";" + peer->name;
  return k + ")";
}

std::string Event::display() const {
  std::string rs;
  for (auto& r : roles) rs += (rs.empty() ? "" : ",") + r.name;
  switch (kind) {
    case Kind::Sending:
      return gidx.display() + ":" + op->display() + "!@" + rs + "->" +
             peer->name;
    case Kind::Receiving:
      return gidx.display() + ":" + op->display() + "?@" + rs + "<-" +
             peer->name;
    case Kind::Assign:
      return gidx.display() + ":assign@" + rs;
    case Kind::ScopeInit:
      return gidx.display() + ":scope-init";
    case Kind::ScopeTerm:
      return gidx.display() + ":scope-term";
    case Kind::GuardIf:
      return gidx.display() + ":if-guard@" + rs;
    case Kind::GuardWhile:
      return gidx.display() + ":while-guard@" + rs;
  }
  return "?";
}

void EventGraph::seal() {
  size_t n = events.size();
  auto compute = [&] {
    reach_.assign(n, std::vector<bool>(n, false));
    // DFS from each node over the generating edges
    for (size_t s = 0; s < n; ++s) {
      std::vector<int> stack(succ[s].begin(), succ[s].end());
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (reach_[s][v]) continue;
        reach_[s][v] = true;
        for (int w : succ[v])
          if (!reach_[s][w]) stack.push_back(w);
      }
    }
  };
  compute();
  bool have_matches = false;
  for (auto& m : matches)
    if (!m.empty()) have_matches = true;
  if (have_matches) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t a = 0; a < n; ++a) {
        for (int b : matches[a]) {
          for (size_t c = 0; c < n; ++c) {
            if (!reach_[a][c] || c == a || static_cast<int>(c) == b) continue;
            if (!succ[b].count(static_cast<int>(c))) {
              succ[b].insert(static_cast<int>(c));
              changed = true;
            }
          }
        }
      }
      if (changed) compute();
    }
  }
  sealed_ = true;
}

bool EventGraph::leq(int a, int b) const { return a == b || reach_[a][b]; }

bool EventGraph::conflicting(int a, int b) const {
  for (auto& [k, br] : branches[a]) {
    auto it = branches[b].find(k);
    if (it != branches[b].end() && it->second != br) return true;
  }
  return false;
}

std::vector<int> EventGraph::find_by_own_index(const Role& r,
                                               const IndexTag& own) const {
  std::vector<int> out;
  for (size_t i = 0; i < events.size(); ++i) {
    if (!events[i].in_role(r)) continue;
    if (events[i].gidx.path.empty()) continue;
    if (events[i].gidx.path.back() == own) out.push_back(static_cast<int>(i));
  }
  return out;
}

bool EventGraph::minimal(int ev, const std::set<int>& exempt) const {
  for (size_t x = 0; x < events.size(); ++x) {
    if (static_cast<int>(x) == ev) continue;
    if (reach_[x][ev] && !exempt.count(static_cast<int>(x))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

namespace {

struct BuildCtx {
  std::vector<IndexTag> wpath;  // enclosing while indexes
  std::vector<GlobalIndex> scopes;
  std::vector<GlobalIndex> whiles;
  std::map<std::string, bool> branch;
};

struct Builder {
  EventGraph g;
  std::map<std::string, std::pair<int, int>> scope_events;  // gidx -> up,dn

  int add(Event e, const BuildCtx& c) {
    int id = static_cast<int>(g.events.size());
    std::string k = e.key();
    g.events.push_back(std::move(e));
    g.succ.emplace_back();
    g.branches.push_back(c.branch);
    g.scopes.push_back(c.scopes);
    g.whiles.push_back(c.whiles);
    g.matches.emplace_back();
    g.by_key.emplace(k, id);
    return id;
  }

  void edge(int a, int b) { g.succ[a].insert(b); }

  GlobalIndex gidx(const BuildCtx& c, IndexTag own) const {
    GlobalIndex gi{c.wpath};
    gi.path.push_back(own);
    return gi;
  }

  // shared-per-global-index scope init/term events
  std::pair<int, int> scope_pair(const GlobalIndex& gi, const BuildCtx& c,
                                 const std::set<Role>& roles) {
    auto it = scope_events.find(gidx_key(gi));
    if (it != scope_events.end()) {
      for (auto& r : roles) {
        g.events[it->second.first].roles.insert(r);
        g.events[it->second.second].roles.insert(r);
      }
      return it->second;
    }
    Event up{Event::Kind::ScopeInit, gi, roles, {}, {}};
    Event dn{Event::Kind::ScopeTerm, gi, roles, {}, {}};
    int u = add(std::move(up), c);
    int d = add(std::move(dn), c);
    edge(u, d);
    scope_events[gidx_key(gi)] = {u, d};
    return {u, d};
  }
};

struct DiocEventWalk : Builder {
  std::vector<int> walk(const DiocPtr& p, BuildCtx c) {
    return std::visit(
        [&](auto& n) -> std::vector<int> {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, DOne> || std::is_same_v<T, DZero>) {
            return {};
          } else if constexpr (std::is_same_v<T, DInteraction>) {
            GlobalIndex gi = gidx(c, IndexTag{p->index.value_or(0)});
            int f = add({Event::Kind::Sending, gi, {n.sender}, n.op,
                         n.receiver},
                        c);
            int t = add({Event::Kind::Receiving, gi, {n.receiver}, n.op,
                         n.sender},
                        c);
            edge(f, t);
            return {f, t};
          } else if constexpr (std::is_same_v<T, DAssign>) {
            GlobalIndex gi = gidx(c, IndexTag{p->index.value_or(0)});
            return {add({Event::Kind::Assign, gi, {n.role}, {}, {}}, c)};
          } else if constexpr (std::is_same_v<T, DSeq>) {
            auto l = walk(n.left, c);
            auto r = walk(n.right, c);
            for (int a : l)
              for (int b : r) edge(a, b);
            l.insert(l.end(), r.begin(), r.end());
            return l;
          } else if constexpr (std::is_same_v<T, DPar>) {
            auto l = walk(n.left, c);
            auto r = walk(n.right, c);
            l.insert(l.end(), r.begin(), r.end());
            return l;
          } else if constexpr (std::is_same_v<T, DIf>) {
            GlobalIndex gi = gidx(c, IndexTag{p->index.value_or(0)});
            int gd = add({Event::Kind::GuardIf, gi, {n.role}, {}, {}}, c);
            BuildCtx ct = c, ce = c;
            ct.branch[gidx_key(gi)] = true;
            ce.branch[gidx_key(gi)] = false;
            auto tb = walk(n.then_branch, ct);
            auto eb = walk(n.else_branch, ce);
            for (int b : tb) edge(gd, b);
            for (int b : eb) edge(gd, b);
            std::vector<int> out{gd};
            out.insert(out.end(), tb.begin(), tb.end());
            out.insert(out.end(), eb.begin(), eb.end());
            return out;
          } else if constexpr (std::is_same_v<T, DWhile>) {
            GlobalIndex gi = gidx(c, IndexTag{p->index.value_or(0)});
            int gd = add({Event::Kind::GuardWhile, gi, {n.role}, {}, {}}, c);
            BuildCtx cb = c;
            cb.wpath.push_back(IndexTag{p->index.value_or(0)});
            cb.whiles.push_back(gi);
            auto body = walk(n.body, cb);
            for (int b : body) edge(gd, b);
            std::vector<int> out{gd};
            out.insert(out.end(), body.begin(), body.end());
            return out;
          } else if constexpr (std::is_same_v<T, DScope>) {
            GlobalIndex gi = gidx(c, IndexTag{p->index.value_or(0)});
            auto [u, d] = scope_pair(gi, c, roles_of(n.body));
            BuildCtx cb = c;
            cb.scopes.push_back(gi);
            auto body = walk(n.body, cb);
            for (int b : body) {
              edge(u, b);
              edge(b, d);
            }
            std::vector<int> out{u};
            out.insert(out.end(), body.begin(), body.end());
            out.push_back(d);
            return out;
          }
        },
        p->node);
  }
};

struct DpocEventWalk : Builder {
  std::vector<int> walk(const DpocPtr& p, const Role& self, BuildCtx c) {
    return std::visit(
        [&](auto& n) -> std::vector<int> {
          using T = std::decay_t<decltype(n)>;
          IndexTag own = p->index.value_or(IndexTag{0});
          if constexpr (std::is_same_v<T, POne> || std::is_same_v<T, PZero>) {
            return {};
          } else if constexpr (std::is_same_v<T, PSend> ||
                               std::is_same_v<T, PSendHo>) {
            GlobalIndex gi = gidx(c, own);
            return {add({Event::Kind::Sending, gi, {self}, n.op, n.to}, c)};
          } else if constexpr (std::is_same_v<T, PRecv>) {
            GlobalIndex gi = gidx(c, own);
            return {add({Event::Kind::Receiving, gi, {self}, n.op, n.from},
                        c)};
          } else if constexpr (std::is_same_v<T, PAssign>) {
            GlobalIndex gi = gidx(c, own);
            return {add({Event::Kind::Assign, gi, {self}, {}, {}}, c)};
          } else if constexpr (std::is_same_v<T, PSeq>) {
            auto l = walk(n.left, self, c);
            auto r = walk(n.right, self, c);
            for (int a : l)
              for (int b : r) edge(a, b);
            l.insert(l.end(), r.begin(), r.end());
            return l;
          } else if constexpr (std::is_same_v<T, PPar>) {
            auto l = walk(n.left, self, c);
            auto r = walk(n.right, self, c);
            l.insert(l.end(), r.begin(), r.end());
            return l;
          } else if constexpr (std::is_same_v<T, PIf>) {
            GlobalIndex gi = gidx(c, own);
            int gd = add({Event::Kind::GuardIf, gi, {self}, {}, {}}, c);
            BuildCtx ct = c, ce = c;
            ct.branch[gidx_key(gi)] = true;
            ce.branch[gidx_key(gi)] = false;
            auto tb = walk(n.then_branch, self, ct);
            auto eb = walk(n.else_branch, self, ce);
            for (int b : tb) edge(gd, b);
            for (int b : eb) edge(gd, b);
            std::vector<int> out{gd};
            out.insert(out.end(), tb.begin(), tb.end());
            out.insert(out.end(), eb.begin(), eb.end());
            return out;
          } else if constexpr (std::is_same_v<T, PWhile>) {
            GlobalIndex gi = gidx(c, own);
            int gd = add({Event::Kind::GuardWhile, gi, {self}, {}, {}}, c);
            BuildCtx cb = c;
            cb.wpath.push_back(own);
            cb.whiles.push_back(gi);
            auto body = walk(n.body, self, cb);
            for (int b : body) edge(gd, b);
            std::vector<int> out{gd};
            out.insert(out.end(), body.begin(), body.end());
            return out;
          } else if constexpr (std::is_same_v<T, PScopeLead> ||
                               std::is_same_v<T, PScopePlain>) {
            // per-role delimiters: the coordinator enters the scope on its
            // own, so the roles must not share one event
            GlobalIndex gi = gidx(c, own);
            int u = add({Event::Kind::ScopeInit, gi, {self}, {}, {}}, c);
            int d = add({Event::Kind::ScopeTerm, gi, {self}, {}, {}}, c);
            edge(u, d);
            BuildCtx cb = c;
            cb.scopes.push_back(gi);
            auto body = walk(n.body, self, cb);
            for (int b : body) {
              edge(u, b);
              edge(b, d);
            }
            std::vector<int> out{u};
            out.insert(out.end(), body.begin(), body.end());
            out.push_back(d);
            return out;
          }
        },
        p->node);
  }
};

}  // namespace

EventGraph events_dioc(const DiocPtr& p) {
  DiocEventWalk w;
  w.walk(p, {});
  w.g.seal();
  return std::move(w.g);
}

EventGraph events_dpoc(const Network& net) {
  DpocEventWalk w;
  for (auto& [r, rp] : net.roles) w.walk(rp.proc, r, {});
  // matching pairs: sending vs receiving with branch-blind equal indexes
  std::map<std::string, std::vector<int>> by_match;
  for (size_t i = 0; i < w.g.events.size(); ++i)
    if (w.g.events[i].is_comm())
      by_match[match_key(w.g.events[i].gidx)].push_back(static_cast<int>(i));
  for (auto& [k, ids] : by_match) {
    for (int a : ids)
      for (int b : ids) {
        if (a == b) continue;
        if (w.g.events[a].kind == Event::Kind::Sending &&
            w.g.events[b].kind == Event::Kind::Receiving) {
          w.g.matches[a].insert(b);
          w.g.matches[b].insert(a);
        }
      }
  }
  // the per-role delimiters of one scope match each other
  std::map<std::string, std::vector<int>> scope_ends;
  for (size_t i = 0; i < w.g.events.size(); ++i) {
    const Event& e = w.g.events[i];
    if (e.kind == Event::Kind::ScopeInit || e.kind == Event::Kind::ScopeTerm)
      scope_ends[gidx_key(e.gidx) +
                 (e.kind == Event::Kind::ScopeInit ? "u" : "d")]
          .push_back(static_cast<int>(i));
  }
  for (auto& [k, ids] : scope_ends)
    for (int a : ids)
      for (int b : ids)
        if (a != b) w.g.matches[a].insert(b);
  w.g.seal();
  return std::move(w.g);
}

std::vector<WaViolation> check_well_annotated_dpoc(const EventGraph& g) {
  std::vector<WaViolation> out;
  auto ev = [&](int i) { return g.events[i].display(); };

  // C1: at most two communication events per global index, and matching
  std::map<std::string, std::vector<int>> by_gidx;
  for (size_t i = 0; i < g.events.size(); ++i)
    if (g.events[i].is_comm())
      by_gidx[gidx_key(g.events[i].gidx)].push_back(static_cast<int>(i));
  for (auto& [k, ids] : by_gidx) {
    if (ids.size() > 2) {
      out.push_back({"C1", "more than two communication events at index " + k});
    } else if (ids.size() == 2 &&
               g.events[ids[0]].kind == g.events[ids[1]].kind) {
      out.push_back({"C1", "non-matching pair at index " + k + ": " +
                               ev(ids[0]) + " / " + ev(ids[1])});
    }
  }

  // C3/C4: same-direction events in one role on one operation towards the
  // same partner must be ordered unless conflicting
  for (size_t a = 0; a < g.events.size(); ++a) {
    for (size_t b = a + 1; b < g.events.size(); ++b) {
      const Event& ea = g.events[a];
      const Event& eb = g.events[b];
      if (!ea.is_comm() || ea.kind != eb.kind) continue;
      if (ea.roles != eb.roles || !(*ea.op == *eb.op) || !(*ea.peer == *eb.peer))
        continue;
      if (gidx_key(ea.gidx) == gidx_key(eb.gidx)) continue;
      if (g.conflicting(static_cast<int>(a), static_cast<int>(b))) continue;
      if (!g.leq(static_cast<int>(a), static_cast<int>(b)) &&
          !g.leq(static_cast<int>(b), static_cast<int>(a)))
        out.push_back({ea.kind == Event::Kind::Sending ? "C3" : "C4",
                       "unordered events " + ev(static_cast<int>(a)) + " / " +
                           ev(static_cast<int>(b))});
    }
  }

  // C5: matching events lie within scopes of the same global indexes
  auto scope_set = [&](int i) {
    std::set<std::string> s;
    for (auto& gi : g.scopes[i]) s.insert(gidx_key(gi));
    return s;
  };
  for (size_t a = 0; a < g.events.size(); ++a)
    for (int b : g.matches[a])
      if (scope_set(static_cast<int>(a)) != scope_set(b)) {
        out.push_back({"C5", "matching events in different scopes: " +
                                 ev(static_cast<int>(a)) + " / " + ev(b)});
        break;
      }

  // C6: index reuse only across a while boundary, with the outer event
  // preceding the guard of the separating while
  std::map<std::string, std::vector<int>> by_own;
  for (size_t i = 0; i < g.events.size(); ++i)
    if (!g.events[i].gidx.path.empty())
      by_own[g.events[i].gidx.path.back().display()].push_back(
          static_cast<int>(i));
  for (auto& [k, ids] : by_own) {
    for (size_t x = 0; x < ids.size(); ++x) {
      for (size_t y = x + 1; y < ids.size(); ++y) {
        int a = ids[x], b = ids[y];
        if (gidx_key(g.events[a].gidx) == gidx_key(g.events[b].gidx)) continue;
        int deep = a, shallow = b;
        if (g.whiles[a].size() == g.whiles[b].size()) {
          out.push_back({"C6", "index " + k + " reused outside a while: " +
                                   ev(a) + " / " + ev(b)});
          continue;
        }
        if (g.whiles[a].size() < g.whiles[b].size()) std::swap(deep, shallow);
        // first while around `deep` that does not also enclose `shallow`
        std::set<std::string> sw;
        for (auto& gi : g.whiles[shallow]) sw.insert(gidx_key(gi));
        std::optional<GlobalIndex> sep;
        for (auto& gi : g.whiles[deep])
          if (!sw.count(gidx_key(gi))) {
            sep = gi;
            break;
          }
        if (!sep) {
          out.push_back({"C6", "index " + k + " reused without a separating " +
                                   "while: " + ev(a) + " / " + ev(b)});
          continue;
        }
        int guard = -1;
        for (size_t i = 0; i < g.events.size(); ++i)
          if (g.events[i].kind == Event::Kind::GuardWhile &&
              gidx_key(g.events[i].gidx) == gidx_key(*sep))
            guard = static_cast<int>(i);
        if (guard < 0 || !g.leq(shallow, guard))
          out.push_back({"C6", "outer event " + ev(shallow) +
                                   " not ordered before while guard for " +
                                   "reused index " + k});
      }
    }
  }
  return out;
}

std::vector<WaViolation> check_well_annotated_dpoc(const Network& n) {
  return check_well_annotated_dpoc(events_dpoc(n));
}

}  // namespace dioc
