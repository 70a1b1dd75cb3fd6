#include "dioc/verify.hpp"

#include <algorithm>
#include <sstream>

#include "dioc/connectedness.hpp"
#include "dioc/projection.hpp"

namespace dioc {

std::vector<Label> weaken(const std::vector<Label>& labels) {
  std::vector<Label> out;
  for (auto& l : labels)
    if (label_is_weak_visible(l)) out.push_back(label_weaken(l));
  return out;
}

// ---------------------------------------------------------------------------
// upd normalization
// ---------------------------------------------------------------------------

namespace {

using Ctx = std::function<DpocPtr(DpocPtr)>;

std::vector<DpocPtr> flatten_seq(const DpocPtr& p) {
  if (auto* s = std::get_if<PSeq>(&p->node)) {
    auto l = flatten_seq(s->left);
    auto r = flatten_seq(s->right);
    l.insert(l.end(), r.begin(), r.end());
    return l;
  }
  return {p};
}

DpocPtr seq_all(std::vector<DpocPtr> ps) {
  if (ps.empty()) return p_one();
  DpocPtr acc = ps.back();
  for (auto it = ps.rbegin() + 1; it != ps.rend(); ++it)
    acc = p_seq(*it, acc);
  return acc;
}

bool is_plain_private(const Operation& op) {
  return op.is_private() && op.prefixes.empty();
}

// while x_n { P ; o*!<ok> ; o*?(x_n) }: the closing-protocol shape produced
// for loop participants
struct AuxWhile {
  std::string var;
  Operation op;
  Role coord;
  DpocPtr inner;  // P
};

std::optional<AuxWhile> match_aux_while(const DpocPtr& p) {
  auto* w = std::get_if<PWhile>(&p->node);
  if (!w || w->guard->kind != Expr::Kind::Var) return {};
  auto parts = flatten_seq(w->body);
  if (parts.size() < 2) return {};
  auto* rc = std::get_if<PRecv>(&parts.back()->node);
  auto* sd = std::get_if<PSend>(&parts[parts.size() - 2]->node);
  if (!rc || !sd) return {};
  if (!is_plain_private(sd->op) || !(rc->op == sd->op)) return {};
  if (rc->var != w->guard->name) return {};
  if (sd->expr->kind != Expr::Kind::Lit || !(sd->expr->lit == Value::str("ok")))
    return {};
  parts.pop_back();
  parts.pop_back();
  return AuxWhile{w->guard->name, rc->op, rc->from, seq_all(std::move(parts))};
}

DpocPtr aux_while_unfold(const DpocPtr& w, const AuxWhile& aw) {
  return p_seq(aw.inner,
               p_seq(p_send(aw.op, Expr::literal(Value::str("ok")), aw.coord),
                     p_seq(p_recv(aw.op, aw.var, aw.coord), w)));
}

// first rewrite position in p, skipping while bodies
DpocPtr rewrite_no_while(const DpocPtr& p,
                         const std::function<DpocPtr(const DpocPtr&)>& f) {
  if (DpocPtr r = f(p)) return r;
  return std::visit(
      [&](auto& n) -> DpocPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PSeq>) {
          if (DpocPtr l = rewrite_no_while(n.left, f)) return p_seq(l, n.right);
          if (DpocPtr r = rewrite_no_while(n.right, f)) return p_seq(n.left, r);
        } else if constexpr (std::is_same_v<T, PPar>) {
          if (DpocPtr l = rewrite_no_while(n.left, f)) return p_par(l, n.right);
          if (DpocPtr r = rewrite_no_while(n.right, f)) return p_par(n.left, r);
        } else if constexpr (std::is_same_v<T, PIf>) {
          if (DpocPtr t = rewrite_no_while(n.then_branch, f))
            return p_if(n.guard, t, n.else_branch, p->index);
          if (DpocPtr e = rewrite_no_while(n.else_branch, f))
            return p_if(n.guard, n.then_branch, e, p->index);
        } else if constexpr (std::is_same_v<T, PScopeLead>) {
          if (DpocPtr b = rewrite_no_while(n.body, f))
            return p_scope_lead(n.coordinator, b, n.roles, n.name, p->index);
        } else if constexpr (std::is_same_v<T, PScopePlain>) {
          if (DpocPtr b = rewrite_no_while(n.body, f))
            return p_scope_plain(n.coordinator, b, n.name, p->index);
        }
        return nullptr;
      },
      p->node);
}

// positions that may fire next (front of the process)
void enabled_positions(const DpocPtr& p, const Ctx& ctx,
                       std::vector<std::pair<DpocPtr, Ctx>>& out) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PSeq>) {
          DpocPtr right = n.right;
          enabled_positions(n.left,
                            [ctx, right](DpocPtr x) {
                              return ctx(p_seq(std::move(x), right));
                            },
                            out);
          if (p_can_tick(n.left)) {
            DpocPtr left = n.left;
            enabled_positions(n.right,
                              [ctx, left](DpocPtr x) {
                                return ctx(p_seq(left, std::move(x)));
                              },
                              out);
          }
        } else if constexpr (std::is_same_v<T, PPar>) {
          DpocPtr right = n.right;
          enabled_positions(n.left,
                            [ctx, right](DpocPtr x) {
                              return ctx(p_par(std::move(x), right));
                            },
                            out);
          DpocPtr left = n.left;
          enabled_positions(n.right,
                            [ctx, left](DpocPtr x) {
                              return ctx(p_par(left, std::move(x)));
                            },
                            out);
        } else if constexpr (std::is_same_v<T, POne> ||
                             std::is_same_v<T, PZero>) {
          // nothing to fire
        } else {
          out.push_back({p, ctx});
        }
      },
      p->node);
}

// one pass of the pending-protocol resolution; true if anything changed
bool prop_step(Network& net) {
  for (auto& [r1, rp1] : net.roles) {
    std::vector<std::pair<DpocPtr, Ctx>> fronts;
    enabled_positions(rp1.proc, [](DpocPtr x) { return x; }, fronts);
    for (auto& [node, ctx] : fronts) {
      if (auto* sd = std::get_if<PSend>(&node->node)) {
        if (!is_plain_private(sd->op) || sd->expr->kind != Expr::Kind::Lit)
          continue;
        if (!sd->expr->lit.is_bool()) continue;
        bool b = sd->expr->lit.as_bool();
        auto tgt = net.roles.find(sd->to);
        if (tgt == net.roles.end()) continue;
        Operation op = sd->op;
        Role sender = r1;
        // pending guard broadcast: resolve the matching recv;while or
        // recv;if at the target
        DpocPtr rewritten = rewrite_no_while(
            tgt->second.proc, [&](const DpocPtr& q) -> DpocPtr {
              auto* s = std::get_if<PSeq>(&q->node);
              if (!s) return nullptr;
              auto* rc = std::get_if<PRecv>(&s->left->node);
              if (!rc || !(rc->op == op) || !(rc->from == sender))
                return nullptr;
              auto parts = flatten_seq(s->right);
              if (auto aw = match_aux_while(parts[0])) {
                if (!(aw->op == op)) return nullptr;
                parts[0] = b ? aux_while_unfold(parts[0], *aw) : p_one();
                return seq_all(std::move(parts));
              }
              if (auto* pif = std::get_if<PIf>(&parts[0]->node)) {
                if (pif->guard->kind != Expr::Kind::Var ||
                    pif->guard->name != rc->var)
                  return nullptr;
                parts[0] = b ? pif->then_branch : pif->else_branch;
                return seq_all(std::move(parts));
              }
              return nullptr;
            });
        if (rewritten) {
          tgt->second.proc = rewritten;
          rp1.proc = ctx(p_one());
          return true;
        }
      } else if (auto* sh = std::get_if<PSendHo>(&node->node)) {
        if (!is_plain_private(sh->op)) continue;
        auto tgt = net.roles.find(sh->to);
        if (tgt == net.roles.end()) continue;
        Operation op = sh->op;
        Role sender = r1;
        HoPayload pl = sh->payload;
        DpocPtr rewritten = rewrite_no_while(
            tgt->second.proc, [&](const DpocPtr& q) -> DpocPtr {
              auto* sp = std::get_if<PScopePlain>(&q->node);
              if (!sp || !(sp->coordinator == sender)) return nullptr;
              int base = q->index ? q->index->base : 0;
              if (op.name != "o*_" + std::to_string(base)) return nullptr;
              return pl.is_code ? pl.code : sp->body;
            });
        if (rewritten) {
          tgt->second.proc = rewritten;
          rp1.proc = ctx(p_one());
          return true;
        }
      } else if (std::get_if<PWhile>(&node->node)) {
        auto aw = match_aux_while(node);
        if (!aw) continue;
        auto it = rp1.local.find(aw->var);
        if (it == rp1.local.end() || !it->second.is_bool()) continue;
        rp1.proc = ctx(it->second.as_bool() ? aux_while_unfold(node, *aw)
                                            : p_one());
        return true;
      } else if (auto* pif = std::get_if<PIf>(&node->node)) {
        if (pif->guard->kind != Expr::Kind::Var ||
            pif->guard->name.rfind("x_", 0) != 0)
          continue;
        auto it = rp1.local.find(pif->guard->name);
        if (it == rp1.local.end() || !it->second.is_bool()) continue;
        rp1.proc =
            ctx(it->second.as_bool() ? pif->then_branch : pif->else_branch);
        return true;
      }
    }
  }
  return false;
}

DpocPtr strip_prefixes(const DpocPtr& p) {
  return std::visit(
      [&](auto& n) -> DpocPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PRecv>) {
          return p_recv(n.op.stripped(), n.var, n.from, p->index);
        } else if constexpr (std::is_same_v<T, PSend>) {
          return p_send(n.op.stripped(), n.expr, n.to, p->index);
        } else if constexpr (std::is_same_v<T, PSendHo>) {
          HoPayload pl = n.payload;
          if (pl.is_code) pl.code = strip_prefixes(pl.code);
          return p_send_ho(n.op.stripped(), std::move(pl), n.to, p->index);
        } else if constexpr (std::is_same_v<T, PSeq>) {
          return p_seq(strip_prefixes(n.left), strip_prefixes(n.right));
        } else if constexpr (std::is_same_v<T, PPar>) {
          return p_par(strip_prefixes(n.left), strip_prefixes(n.right));
        } else if constexpr (std::is_same_v<T, PIf>) {
          return p_if(n.guard, strip_prefixes(n.then_branch),
                      strip_prefixes(n.else_branch), p->index);
        } else if constexpr (std::is_same_v<T, PWhile>) {
          return p_while(n.guard, strip_prefixes(n.body), p->index);
        } else if constexpr (std::is_same_v<T, PScopeLead>) {
          return p_scope_lead(n.coordinator, strip_prefixes(n.body), n.roles,
                              n.name, p->index);
        } else if constexpr (std::is_same_v<T, PScopePlain>) {
          return p_scope_plain(n.coordinator, strip_prefixes(n.body), n.name,
                               p->index);
        } else {
          return p;
        }
      },
      p->node);
}

DpocPtr erase_acks(const DpocPtr& p) {
  // closing ok-sends / acknowledgement receives outside whiles become inert
  DpocPtr cur = p;
  for (;;) {
    DpocPtr next = rewrite_no_while(cur, [](const DpocPtr& q) -> DpocPtr {
      if (auto* sd = std::get_if<PSend>(&q->node)) {
        if (sd->op.is_private() && sd->expr->kind == Expr::Kind::Lit &&
            sd->expr->lit == Value::str("ok"))
          return p_one();
      }
      if (auto* rc = std::get_if<PRecv>(&q->node)) {
        if (rc->op.is_private() && rc->var == "_") return p_one();
      }
      return nullptr;
    });
    if (!next) return cur;
    cur = next;
  }
}

}  // namespace

Network upd_normalize(const Network& n) {
  Network net = n;
  for (int guard = 0; guard < 100000 && prop_step(net); ++guard) {
  }
  for (auto& [r, rp] : net.roles)
    rp.proc = p_collapse_ones(strip_prefixes(erase_acks(rp.proc)));
  return net;
}

// ---------------------------------------------------------------------------
// Bounded weak-trace sets
// ---------------------------------------------------------------------------

namespace {

using Traces = std::set<std::vector<std::string>>;

struct SubResult {
  Traces complete;
  Traces truncated;
};

void prepend_into(Traces& dst, const Traces& src, const std::string* label) {
  for (auto& t : src) {
    if (!label) {
      dst.insert(t);
    } else {
      std::vector<std::string> w;
      w.reserve(t.size() + 1);
      w.push_back(*label);
      w.insert(w.end(), t.begin(), t.end());
      dst.insert(std::move(w));
    }
  }
}

template <class Sys>
struct Explorer {
  const HostEnv& host;
  const Schedule& schedule;
  ExploreOpts opts;
  LeadUpFault fault = LeadUpFault::None;
  long nodes = 0;
  bool budget_exceeded = false;
  std::map<std::string, SubResult> memo;

  std::string loops_key(const std::map<std::string, int>& loops) const {
    std::string s;
    for (auto& [k, v] : loops) s += k + "=" + std::to_string(v) + ",";
    return s;
  }

  SubResult explore(const Sys& sys, int weak, size_t change_idx,
                    const std::map<std::string, int>& loops) {
    std::string key = state_key(sys) + "|w" + std::to_string(weak) + "|c" +
                      std::to_string(change_idx) + "|" + loops_key(loops);
    auto hit = memo.find(key);
    if (hit != memo.end()) return hit->second;
    if (++nodes > opts.state_budget) {
      budget_exceeded = true;
      return {{}, {{}}};
    }
    SubResult res;
    if (change_idx < schedule.changes.size() &&
        weak >= schedule.changes[change_idx].after_weak_label) {
      if (weak >= opts.bound) {
        res.truncated.emplace();
        memo[key] = res;
        return res;
      }
      Sys nx = sys;
      nx.updates = schedule.changes[change_idx].new_updates;
      std::string names;
      for (auto& u : nx.updates) names += (names.empty() ? "" : ",") + u.name;
      std::string lk = Label::updates_changed(names).key();
      SubResult sub = explore(nx, weak + 1, change_idx + 1, loops);
      prepend_into(res.complete, sub.complete, &lk);
      prepend_into(res.truncated, sub.truncated, &lk);
      memo[key] = res;
      return res;
    }
    auto ts = enabled(sys);
    if (ts.empty()) {
      res.complete.emplace();
      memo[key] = res;
      return res;
    }
    bool any = false;
    for (auto& t : ts) {
      auto uk = unfold_key(t);
      std::map<std::string, int> nl = loops;
      if (uk) {
        int& c = nl[*uk];
        if (c >= opts.loop_bound) {
          res.truncated.emplace();
          continue;
        }
        ++c;
      }
      bool vis = label_is_weak_visible(t.label);
      if (vis && weak >= opts.bound) {
        res.truncated.emplace();
        continue;
      }
      any = true;
      SubResult sub = explore(t.next, weak + (vis ? 1 : 0), change_idx, nl);
      std::string lk;
      if (vis) lk = label_weaken(t.label).key();
      prepend_into(res.complete, sub.complete, vis ? &lk : nullptr);
      prepend_into(res.truncated, sub.truncated, vis ? &lk : nullptr);
    }
    (void)any;
    memo[key] = res;
    return res;
  }

  std::string state_key(const DiocSystem& s) const { return dioc_state_key(s); }
  std::string state_key(const DpocSystem& s) const { return dpoc_state_key(s); }

  std::vector<DTransition> enabled(const DiocSystem& s) const {
    return dioc_enabled(s, host);
  }
  std::vector<PTransition> enabled(const DpocSystem& s) const {
    return system_enabled(s, host, fault);
  }

  std::optional<std::string> unfold_key(const DTransition& t) const {
    if (!t.unfold_index) return {};
    return std::to_string(*t.unfold_index);
  }
  std::optional<std::string> unfold_key(const PTransition& t) const {
    if (!t.unfold) return {};
    return t.unfold->first.name + ":" + std::to_string(t.unfold->second);
  }
};

template <class Sys>
TraceSet run_explore(Explorer<Sys>& e, const Sys& sys) {
  SubResult r = e.explore(sys, 0, 0, {});
  TraceSet out;
  out.complete = std::move(r.complete);
  out.truncated = std::move(r.truncated);
  out.states = e.nodes;
  out.budget_exceeded = e.budget_exceeded;
  return out;
}

}  // namespace

TraceSet dioc_trace_set(const DiocSystem& sys, const HostEnv& host,
                        const Schedule& schedule, const ExploreOpts& opts) {
  Explorer<DiocSystem> e{host, schedule, opts};
  return run_explore(e, sys);
}

TraceSet dpoc_trace_set(const DpocSystem& sys, const HostEnv& host,
                        const Schedule& schedule, const ExploreOpts& opts,
                        LeadUpFault fault) {
  Explorer<DpocSystem> e{host, schedule, opts, fault};
  return run_explore(e, sys);
}

// ---------------------------------------------------------------------------
// Equivalence
// ---------------------------------------------------------------------------

namespace {

std::string trace_text(const std::vector<std::string>& t) {
  std::string s;
  for (auto& l : t) s += (s.empty() ? "" : " ") + l;
  return s.empty() ? "<empty>" : s;
}

void compare_sets(EquivResult& res, const TraceSet& di, const TraceSet& dp) {
  res.dioc_states = di.states;
  res.dpoc_states = dp.states;
  res.truncated = !di.truncated.empty() || !dp.truncated.empty();
  auto diff = [&](const Traces& a, const Traces& b, const char* side)
      -> bool {
    for (auto& t : a)
      if (!b.count(t)) {
        res.equivalent = false;
        res.counterexample = t;
        res.side = side;
        return true;
      }
    return false;
  };
  res.equivalent = true;
  if (diff(di.complete, dp.complete, "dioc")) return;
  if (diff(dp.complete, di.complete, "dpoc")) return;
  if (diff(di.truncated, dp.truncated, "dioc")) return;
  if (diff(dp.truncated, di.truncated, "dpoc")) return;
}

}  // namespace

EquivResult check_equiv_against(const DiocSystem& sys, const DpocSystem& dp,
                                const HostEnv& host, const Schedule& schedule,
                                const ExploreOpts& opts, LeadUpFault fault) {
  EquivResult res;
  if (!is_initial(sys.proc)) {
    res.error = "process is not initial (contains 0)";
    return res;
  }
  if (!check_connected(sys.proc).connected) {
    res.error = "process is not connected";
    return res;
  }
  TraceSet di = dioc_trace_set(sys, host, schedule, opts);
  TraceSet dpt = dpoc_trace_set(dp, host, schedule, opts, fault);
  if (di.budget_exceeded || dpt.budget_exceeded) {
    res.error = "state budget exceeded";
    res.dioc_states = di.states;
    res.dpoc_states = dpt.states;
    return res;
  }
  compare_sets(res, di, dpt);
  return res;
}

EquivResult check_equiv(const DiocSystem& sys, const HostEnv& host,
                        const Schedule& schedule, const ExploreOpts& opts) {
  int counter = max_index(sys.proc) + 1;
  Network net = proj(sys.proc, sys.state, counter);
  DpocSystem dp = make_dpoc_system(net, sys.updates, sys.inputs, counter);
  return check_equiv_against(sys, dp, host, schedule, opts);
}

// ---------------------------------------------------------------------------
// Freedom properties
// ---------------------------------------------------------------------------

FreedomResult check_freedom(const DpocSystem& sys, const HostEnv& host,
                            const ExploreOpts& opts) {
  FreedomResult res;
  std::set<std::string> seen;
  long nodes = 0;

  struct Item {
    DpocSystem sys;
    std::map<std::string, int> loops;
  };
  std::vector<Item> stack;
  stack.push_back({sys, {}});

  auto offers_of = [&](const DpocSystem& s) {
    std::map<Role, std::vector<RoleOffer>> out;
    for (auto& [r, rp] : s.net.roles) {
      InputQueue q;
      auto it = s.inputs.find(r);
      if (it != s.inputs.end()) q = it->second;
      out[r] = role_offers(rp.proc, rp.local, q, r, s.updates, host);
    }
    return out;
  };

  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    std::string key = dpoc_state_key(it.sys);
    std::string lk;
    for (auto& [k, v] : it.loops) lk += k + "=" + std::to_string(v) + ",";
    if (!seen.insert(key + "|" + lk).second) continue;
    if (++nodes > opts.state_budget) {
      res.partial = true;
      break;
    }

    auto offers = offers_of(it.sys);

    // race freedom: every pending communication has at most one candidate
    // partner
    for (auto& [r, ofs] : offers) {
      for (auto& o : ofs) {
        if (o.kind != OfferKind::Recv && o.kind != OfferKind::RecvHo) continue;
        int senders = 0;
        auto pit = offers.find(o.peer);
        if (pit != offers.end())
          for (auto& po : pit->second)
            if ((po.kind == OfferKind::Send || po.kind == OfferKind::SendHo) &&
                po.peer == r && po.op == o.op)
              ++senders;
        if (senders > 1 && res.race_free) {
          res.race_free = false;
          res.race_witness = "receive on " + o.op.display() + " at " + r.name +
                             " has " + std::to_string(senders) +
                             " matching sends";
        }
      }
      for (auto& o : ofs) {
        if (o.kind != OfferKind::Send && o.kind != OfferKind::SendHo) continue;
        int receivers = 0;
        auto pit = offers.find(o.peer);
        if (pit != offers.end())
          for (auto& po : pit->second)
            if ((po.kind == OfferKind::Recv || po.kind == OfferKind::RecvHo) &&
                po.peer == r && po.op == o.op)
              ++receivers;
        if (receivers > 1 && res.race_free) {
          res.race_free = false;
          res.race_witness = "send on " + o.op.display() + " at " + r.name +
                             " has " + std::to_string(receivers) +
                             " matching receives";
        }
      }
    }

    auto ts = system_enabled(it.sys, host);
    if (ts.empty()) {
      if (!it.sys.ticked && res.deadlock_free) {
        res.deadlock_free = false;
        res.deadlock_witness = "stuck state: " + dump_network(it.sys.net);
      }
      continue;
    }
    for (auto& t : ts) {
      if (t.label.kind == Label::Kind::Tick) {
        // orphan freedom: nothing left to send after global termination
        auto post = offers_of(t.next);
        for (auto& [r, ofs] : post)
          for (auto& o : ofs)
            if ((o.kind == OfferKind::Send || o.kind == OfferKind::SendHo) &&
                res.orphan_free) {
              res.orphan_free = false;
              res.orphan_witness =
                  "send on " + o.op.display() + " at " + r.name +
                  " survives termination";
            }
      }
      std::map<std::string, int> nl = it.loops;
      if (t.unfold) {
        std::string k =
            t.unfold->first.name + ":" + std::to_string(t.unfold->second);
        int& c = nl[k];
        if (c >= opts.loop_bound) {
          res.partial = true;
          continue;
        }
        ++c;
      }
      stack.push_back({t.next, std::move(nl)});
    }
  }
  res.states = nodes;
  return res;
}

}  // namespace dioc
