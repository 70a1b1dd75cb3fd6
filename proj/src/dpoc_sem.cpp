#include "dioc/dpoc_sem.hpp"

#include <random>
#include <sstream>

#include "dioc/connectedness.hpp"
#include "dioc/projection.hpp"

namespace dioc {

DpocSystem make_dpoc_system(Network net, UpdateSet updates, InputQueues inputs,
                            int fresh_counter) {
  DpocSystem s;
  s.net = std::move(net);
  s.updates = std::move(updates);
  s.inputs = std::move(inputs);
  s.fresh_counter = fresh_counter;
  return s;
}

namespace {

using Ctx = std::function<DpocPtr(DpocPtr)>;

DpocPtr par_all(std::vector<DpocPtr> ps) {
  if (ps.empty()) return p_one();
  DpocPtr acc = ps.back();
  for (auto it = ps.rbegin() + 1; it != ps.rend(); ++it)
    acc = p_par(*it, acc);
  return acc;
}

bool eval_guard_p(const ExprPtr& g, const LocalState& local,
                  const HostEnv& host, InputQueue* q, const Role& r,
                  std::vector<std::string>* diags) {
  Value v = eval_expr(g, local, host, q);
  if (!v.is_bool()) {
    if (diags)
      diags->push_back("guard at role " + r.name +
                       " evaluated to non-boolean value " + v.display() +
                       "; treated as false");
    return false;
  }
  return v.as_bool();
}

struct RoleEnum {
  const LocalState& local;
  const InputQueue& queue;
  const Role& self;
  const UpdateSet& updates;
  const HostEnv& host;
  LeadUpFault fault;
  std::vector<std::string>* diags;
  std::vector<RoleOffer> out;

  RoleOffer base() const {
    RoleOffer o;
    o.next_local = local;
    o.next_queue = queue;
    return o;
  }

  void enum_proc(const DpocPtr& p, const Ctx& ctx) {
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, POne> || std::is_same_v<T, PZero>) {
            // termination is handled at role top level
          } else if constexpr (std::is_same_v<T, PSeq>) {
            if (p_can_tick(n.left)) {
              enum_proc(n.right, ctx);
            } else {
              DpocPtr right = n.right;
              enum_proc(n.left, [ctx, right](DpocPtr x) {
                return ctx(p_seq(std::move(x), right));
              });
            }
          } else if constexpr (std::is_same_v<T, PPar>) {
            if (!p_can_tick(n.left)) {
              DpocPtr right = n.right;
              enum_proc(n.left, [ctx, right](DpocPtr x) {
                return ctx(p_par(std::move(x), right));
              });
            }
            if (!p_can_tick(n.right)) {
              DpocPtr left = n.left;
              enum_proc(n.right, [ctx, left](DpocPtr x) {
                return ctx(p_par(left, std::move(x)));
              });
            }
          } else if constexpr (std::is_same_v<T, PAssign>) {
            RoleOffer o = base();
            o.kind = OfferKind::Tau;
            o.index = p->index;
            Value v = eval_expr(n.expr, local, host, &o.next_queue);
            o.next_local[n.var] = v;
            o.next_proc = ctx(p_one());
            out.push_back(std::move(o));
          } else if constexpr (std::is_same_v<T, PSend>) {
            RoleOffer o = base();
            o.kind = OfferKind::Send;
            o.op = n.op;
            o.peer = n.to;
            o.index = p->index;
            o.value = eval_expr(n.expr, local, host, &o.next_queue);
            o.next_proc = ctx(p_one());
            out.push_back(std::move(o));
          } else if constexpr (std::is_same_v<T, PSendHo>) {
            RoleOffer o = base();
            o.kind = OfferKind::SendHo;
            o.op = n.op;
            o.peer = n.to;
            o.index = p->index;
            o.payload = n.payload;
            o.next_proc = ctx(p_one());
            out.push_back(std::move(o));
          } else if constexpr (std::is_same_v<T, PRecv>) {
            RoleOffer o = base();
            o.kind = OfferKind::Recv;
            o.op = n.op;
            o.peer = n.from;
            o.var = n.var;
            o.index = p->index;
            std::string var = n.var;
            auto idx = p->index;
            o.recv_next = [ctx, var, idx](const Value& v) {
              return ctx(p_assign(var, Expr::literal(v), idx));
            };
            out.push_back(std::move(o));
          } else if constexpr (std::is_same_v<T, PIf>) {
            RoleOffer o = base();
            o.kind = OfferKind::Tau;
            o.index = p->index;
            bool b = eval_guard_p(n.guard, local, host, &o.next_queue, self,
                                  diags);
            o.next_proc = ctx(b ? n.then_branch : n.else_branch);
            out.push_back(std::move(o));
          } else if constexpr (std::is_same_v<T, PWhile>) {
            RoleOffer o = base();
            o.kind = OfferKind::Tau;
            o.index = p->index;
            bool b = eval_guard_p(n.guard, local, host, &o.next_queue, self,
                                  diags);
            if (b) {
              o.next_proc = ctx(p_seq(n.body, p));
              if (p->index) o.unfold_index = p->index->base;
            } else {
              o.next_proc = ctx(p_one());
            }
            out.push_back(std::move(o));
          } else if constexpr (std::is_same_v<T, PScopeLead>) {
            int scope_idx = p->index ? p->index->base : 0;
            std::set<Role> participants = n.roles;
            participants.erase(n.coordinator);
            for (size_t ui = 0; ui < updates.size(); ++ui) {
              const UpdateDef& u = updates[ui];
              if (!u.connected) continue;
              bool ok = true;
              for (auto& r : roles_of(u.body))
                if (!n.roles.count(r)) ok = false;
              if (!ok) continue;
              RoleOffer o = base();
              o.kind = OfferKind::LeadUp;
              o.index = p->index;
              o.update_name = u.name;
              DiocPtr upd_body = u.body;
              Role coord = n.coordinator;
              LeadUpFault f = fault;
              o.lead_next = [ctx, upd_body, scope_idx, participants, coord,
                             f](int& counter) {
                DiocPtr iprime = fresh_indexes(upd_body, scope_idx, counter);
                AuxScheme scheme = make_aux_scheme(iprime, counter);
                std::vector<DpocPtr> codes;
                for (auto& ri : participants)
                  codes.push_back(pi(iprime, ri, scheme));
                if (f == LeadUpFault::MisprefixOperation) {
                  int c2 = counter;
                  DiocPtr bad =
                      fresh_indexes(upd_body, scope_idx + 1000000, c2);
                  AuxScheme s2 = make_aux_scheme(bad, c2);
                  codes.clear();
                  for (auto& ri : participants)
                    codes.push_back(pi(bad, ri, s2));
                }
                if (f == LeadUpFault::SwapShippedCode && codes.size() >= 2)
                  std::swap(codes[0], codes[1]);
                std::vector<DpocPtr> sends, acks;
                size_t ci = 0;
                for (auto& ri : participants) {
                  IndexTag h{counter++};
                  IndexTag k{counter++};
                  sends.push_back(p_send_ho(aux_op(scope_idx),
                                            HoPayload::of(codes[ci++], k), ri,
                                            h));
                  acks.push_back(p_recv(aux_op(scope_idx), "_", ri, k));
                }
                DpocPtr own = pi(iprime, coord, scheme);
                return ctx(p_seq(par_all(std::move(sends)),
                                 p_seq(own, par_all(std::move(acks)))));
              };
              out.push_back(std::move(o));
            }
            {
              RoleOffer o = base();
              o.kind = OfferKind::LeadNoUp;
              o.index = p->index;
              DpocPtr body = n.body;
              o.lead_next = [ctx, body, scope_idx,
                             participants](int& counter) {
                std::vector<DpocPtr> sends, acks;
                for (auto& ri : participants) {
                  IndexTag h{counter++};
                  IndexTag k{counter++};
                  sends.push_back(
                      p_send_ho(aux_op(scope_idx), HoPayload::no(k), ri, h));
                  acks.push_back(p_recv(aux_op(scope_idx), "_", ri, k));
                }
                return ctx(p_seq(par_all(std::move(sends)),
                                 p_seq(body, par_all(std::move(acks)))));
              };
              out.push_back(std::move(o));
            }
          } else if constexpr (std::is_same_v<T, PScopePlain>) {
            int scope_idx = p->index ? p->index->base : 0;
            RoleOffer o = base();
            o.kind = OfferKind::RecvHo;
            o.op = aux_op(scope_idx);
            o.peer = n.coordinator;
            o.var = "_";
            o.index = p->index;
            DpocPtr body = n.body;
            Role coord = n.coordinator;
            o.recvho_next = [ctx, body, coord,
                             scope_idx](const HoPayload& pl) {
              DpocPtr cont = pl.is_code ? pl.code : body;
              DpocPtr ok = p_send(aux_op(scope_idx),
                                  Expr::literal(Value::str("ok")), coord,
                                  pl.ack_index);
              return ctx(p_seq(cont, ok));
            };
            out.push_back(std::move(o));
          }
        },
        p->node);
  }
};

}  // namespace

std::vector<RoleOffer> role_offers(const DpocPtr& proc, const LocalState& local,
                                   const InputQueue& queue, const Role& self,
                                   const UpdateSet& updates,
                                   const HostEnv& host, LeadUpFault fault,
                                   std::vector<std::string>* diags) {
  if (p_can_tick(proc)) {
    RoleOffer o;
    o.kind = OfferKind::Tick;
    o.next_local = local;
    o.next_queue = queue;
    o.next_proc = p_zero();
    return {std::move(o)};
  }
  RoleEnum e{local, queue, self, updates, host, fault, diags, {}};
  e.enum_proc(proc, [](DpocPtr x) { return x; });
  return std::move(e.out);
}

namespace {

const InputQueue kEmptyQueue;

const InputQueue& queue_of(const DpocSystem& sys, const Role& r) {
  auto it = sys.inputs.find(r);
  return it == sys.inputs.end() ? kEmptyQueue : it->second;
}

void apply_role(DpocSystem& sys, const Role& r, DpocPtr proc, LocalState local,
                InputQueue queue) {
  auto& rp = sys.net.roles.at(r);
  rp.proc = std::move(proc);
  rp.local = std::move(local);
  if (sys.inputs.count(r) || !queue.empty())
    sys.inputs[r] = std::move(queue);
}

}  // namespace

std::vector<PTransition> system_enabled(const DpocSystem& sys,
                                        const HostEnv& host,
                                        LeadUpFault fault) {
  std::vector<PTransition> out;
  if (sys.net.roles.empty()) {
    if (!sys.ticked) {
      DpocSystem nx = sys;
      nx.ticked = true;
      out.push_back({Label::tick(), std::move(nx), {}, {}});
    }
    return out;
  }
  std::map<Role, std::vector<RoleOffer>> offers;
  bool all_tick = true;
  for (auto& [r, rp] : sys.net.roles) {
    offers[r] =
        role_offers(rp.proc, rp.local, queue_of(sys, r), r, sys.updates, host,
                    fault);
    if (!(offers[r].size() == 1 && offers[r][0].kind == OfferKind::Tick))
      all_tick = false;
  }
  if (all_tick) {
    if (!sys.ticked) {
      DpocSystem nx = sys;
      for (auto& [r, rp] : nx.net.roles) rp.proc = p_zero();
      nx.ticked = true;
      out.push_back({Label::tick(), std::move(nx), {}, {}});
    }
    return out;
  }
  for (auto& [r, ofs] : offers) {
    for (auto& o : ofs) {
      switch (o.kind) {
        case OfferKind::Tau: {
          DpocSystem nx = sys;
          apply_role(nx, r, o.next_proc, o.next_local, o.next_queue);
          PTransition t{Label::tau(), std::move(nx), {}, {}};
          if (o.unfold_index) t.unfold = {{r, *o.unfold_index}};
          if (o.index) t.acted.push_back({r, *o.index});
          out.push_back(std::move(t));
          break;
        }
        case OfferKind::LeadUp:
        case OfferKind::LeadNoUp: {
          DpocSystem nx = sys;
          int counter = nx.fresh_counter;
          DpocPtr proc = o.lead_next(counter);
          nx.fresh_counter = counter;
          apply_role(nx, r, std::move(proc), o.next_local, o.next_queue);
          Label l = o.kind == OfferKind::LeadUp ? Label::update(o.update_name)
                                                : Label::noup();
          PTransition t{std::move(l), std::move(nx), {}, {}};
          if (o.index) t.acted.push_back({r, *o.index});
          out.push_back(std::move(t));
          break;
        }
        case OfferKind::Send: {
          auto pit = offers.find(o.peer);
          if (pit == offers.end()) break;
          for (auto& po : pit->second) {
            if (po.kind != OfferKind::Recv) continue;
            if (!(po.peer == r) || !(po.op == o.op)) continue;
            DpocSystem nx = sys;
            apply_role(nx, r, o.next_proc, o.next_local, o.next_queue);
            apply_role(nx, o.peer, po.recv_next(o.value), po.next_local,
                       po.next_queue);
            PTransition t{
                Label::interaction(o.op, r, o.value, o.peer, po.var),
                std::move(nx),
                {},
                {}};
            if (o.index) t.acted.push_back({r, *o.index});
            if (po.index) t.acted.push_back({o.peer, *po.index});
            out.push_back(std::move(t));
          }
          break;
        }
        case OfferKind::SendHo: {
          auto pit = offers.find(o.peer);
          if (pit == offers.end()) break;
          for (auto& po : pit->second) {
            if (po.kind != OfferKind::RecvHo) continue;
            if (!(po.peer == r) || !(po.op == o.op)) continue;
            DpocSystem nx = sys;
            apply_role(nx, r, o.next_proc, o.next_local, o.next_queue);
            apply_role(nx, o.peer, po.recvho_next(o.payload), po.next_local,
                       po.next_queue);
            PTransition t{Label::ho_interaction(o.op, r, o.peer),
                          std::move(nx),
                          {},
                          {}};
            if (o.index) t.acted.push_back({r, *o.index});
            if (po.index) t.acted.push_back({o.peer, *po.index});
            out.push_back(std::move(t));
          }
          break;
        }
        default:
          break;  // Recv / RecvHo are consumed by their matching send; Tick
                  // fires only when every role ticks
      }
    }
  }
  return out;
}

std::string dpoc_state_key(const DpocSystem& sys) {
  std::ostringstream os;
  os << dump_network(sys.net) << "#";
  for (auto& [r, q] : sys.inputs) {
    os << r.name << "[";
    for (auto& v : q) os << v.display() << ",";
    os << "]";
  }
  os << "#";
  for (auto& u : sys.updates) os << u.name << ",";
  os << "#" << (sys.ticked ? "t" : "f");
  return os.str();
}

DpocTraceResult dpoc_trace(DpocSystem sys, const HostEnv& host,
                           const Policy& policy, const Schedule& schedule,
                           int max_steps, LeadUpFault fault) {
  DpocTraceResult res;
  std::mt19937 rng(policy.seed);
  int weak_count = 0;
  size_t change_idx = 0;
  size_t script_idx = 0;
  for (int step = 0; step < max_steps; ++step) {
    if (change_idx < schedule.changes.size() &&
        weak_count >= schedule.changes[change_idx].after_weak_label) {
      const auto& ch = schedule.changes[change_idx++];
      sys.updates = ch.new_updates;
      std::string names;
      for (auto& u : sys.updates)
        names += (names.empty() ? "" : ",") + u.name;
      res.labels.push_back(Label::updates_changed(names));
      ++weak_count;
      continue;
    }
    auto ts = system_enabled(sys, host, fault);
    if (ts.empty()) {
      res.stopped_on_empty = true;
      break;
    }
    size_t pick = 0;
    switch (policy.kind) {
      case Policy::Kind::FirstEnabled:
        pick = 0;
        break;
      case Policy::Kind::Seeded:
        pick = std::uniform_int_distribution<size_t>(0, ts.size() - 1)(rng);
        break;
      case Policy::Kind::Scripted:
        if (script_idx < policy.script.size()) {
          int c = policy.script[script_idx++];
          if (c < 0 || static_cast<size_t>(c) >= ts.size()) {
            res.error = "invalid schedule: choice " + std::to_string(c) +
                        " out of range at step " + std::to_string(step);
            return res;
          }
          pick = static_cast<size_t>(c);
        }
        break;
    }
    if (label_is_weak_visible(ts[pick].label)) ++weak_count;
    res.labels.push_back(ts[pick].label);
    sys = std::move(ts[pick].next);
  }
  return res;
}

}  // namespace dioc
