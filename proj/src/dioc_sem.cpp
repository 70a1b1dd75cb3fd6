#include "dioc/dioc_sem.hpp"

#include <random>
#include <sstream>

#include "dioc/connectedness.hpp"

namespace dioc {

DiocSystem make_dioc_system(DiocPtr annotated, GlobalState state,
                            UpdateSet updates, InputQueues inputs) {
  DiocSystem s;
  s.proc = std::move(annotated);
  s.state = std::move(state);
  s.updates = std::move(updates);
  s.inputs = std::move(inputs);
  s.fresh_counter = max_index(s.proc) + 1;
  return s;
}

bool d_can_tick(const DiocPtr& p) {
  return std::visit(
      [](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, DOne>)
          return true;
        else if constexpr (std::is_same_v<T, DSeq> || std::is_same_v<T, DPar>)
          return d_can_tick(n.left) && d_can_tick(n.right);
        else
          return false;
      },
      p->node);
}

bool dioc_apply_update_rule_check(const DiocPtr& scope_body,
                                  const UpdateDef& upd) {
  if (!upd.connected) return false;
  auto body_roles = roles_of(scope_body);
  for (auto& r : roles_of(upd.body))
    if (!body_roles.count(r)) return false;
  return true;
}

namespace {

// Evaluate a guard; non-boolean results count as false.
bool eval_guard(const ExprPtr& g, const LocalState& local, const HostEnv& host,
                InputQueue* q, const Role& r,
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

struct Enumerator {
  const DiocSystem& sys;
  const HostEnv& host;
  std::vector<std::string>* diags;

  std::vector<DTransition> run() { return enum_proc(sys.proc); }

  DiocSystem base() const { return sys; }

  std::vector<DTransition> enum_proc(const DiocPtr& p) {
    std::vector<DTransition> out;
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, DOne>) {
            DiocSystem nx = base();
            nx.proc = d_zero();
            out.push_back({Label::tick(), std::move(nx), {}});
          } else if constexpr (std::is_same_v<T, DZero>) {
            // terminated
          } else if constexpr (std::is_same_v<T, DInteraction>) {
            DiocSystem nx = base();
            InputQueue* q = queue_of(nx, n.sender);
            Value v = eval_expr(n.expr, nx.state[n.sender], host, q);
            nx.proc = d_assign(n.var, n.receiver, Expr::literal(v), p->index);
            out.push_back(
                {Label::interaction(n.op, n.sender, v, n.receiver, n.var),
                 std::move(nx),
                 {}});
          } else if constexpr (std::is_same_v<T, DAssign>) {
            DiocSystem nx = base();
            InputQueue* q = queue_of(nx, n.role);
            Value v = eval_expr(n.expr, nx.state[n.role], host, q);
            nx.state[n.role][n.var] = v;
            nx.proc = d_one();
            out.push_back({Label::tau(), std::move(nx), {}});
          } else if constexpr (std::is_same_v<T, DSeq>) {
            if (d_can_tick(n.left)) {
              out = enum_proc(n.right);
            } else {
              for (auto& t : enum_proc(n.left)) {
                t.next.proc = d_seq(t.next.proc, n.right);
                out.push_back(std::move(t));
              }
            }
          } else if constexpr (std::is_same_v<T, DPar>) {
            bool lt = d_can_tick(n.left), rt = d_can_tick(n.right);
            if (lt && rt) {
              DiocSystem nx = base();
              nx.proc = d_zero();
              out.push_back({Label::tick(), std::move(nx), {}});
            } else {
              if (!lt)
                for (auto& t : enum_proc(n.left)) {
                  t.next.proc = d_par(t.next.proc, n.right);
                  out.push_back(std::move(t));
                }
              if (!rt)
                for (auto& t : enum_proc(n.right)) {
                  t.next.proc = d_par(n.left, t.next.proc);
                  out.push_back(std::move(t));
                }
            }
          } else if constexpr (std::is_same_v<T, DIf>) {
            DiocSystem nx = base();
            bool b = eval_guard(n.guard, nx.state[n.role], host,
                                queue_of(nx, n.role), n.role, diags);
            nx.proc = b ? n.then_branch : n.else_branch;
            out.push_back({Label::tau(), std::move(nx), {}});
          } else if constexpr (std::is_same_v<T, DWhile>) {
            DiocSystem nx = base();
            bool b = eval_guard(n.guard, nx.state[n.role], host,
                                queue_of(nx, n.role), n.role, diags);
            if (b) {
              nx.proc = d_seq(n.body, p);
              out.push_back({Label::tau(), std::move(nx), p->index});
            } else {
              nx.proc = d_one();
              out.push_back({Label::tau(), std::move(nx), {}});
            }
          } else if constexpr (std::is_same_v<T, DScope>) {
            for (auto& u : sys.updates) {
              if (!dioc_apply_update_rule_check(n.body, u)) continue;
              DiocSystem nx = base();
              nx.proc = reindex_fresh(u.body, nx.fresh_counter);
              out.push_back({Label::update(u.name), std::move(nx), {}});
            }
            DiocSystem nx = base();
            nx.proc = n.body;
            out.push_back({Label::noup(), std::move(nx), {}});
          }
        },
        p->node);
    return out;
  }

  static InputQueue* queue_of(DiocSystem& s, const Role& r) {
    auto it = s.inputs.find(r);
    return it == s.inputs.end() ? nullptr : &it->second;
  }
};

}  // namespace

std::vector<DTransition> dioc_enabled(const DiocSystem& sys,
                                      const HostEnv& host,
                                      std::vector<std::string>* diags) {
  Enumerator e{sys, host, diags};
  return e.run();
}

std::string dioc_state_key(const DiocSystem& sys) {
  std::ostringstream os;
  os << dump_dioc(sys.proc) << "#";
  for (auto& [r, ls] : sys.state) {
    os << r.name << "{";
    for (auto& [k, v] : ls) os << k << "=" << v.display() << ",";
    os << "}";
  }
  os << "#";
  for (auto& [r, q] : sys.inputs) {
    os << r.name << "[";
    for (auto& v : q) os << v.display() << ",";
    os << "]";
  }
  os << "#";
  for (auto& u : sys.updates) os << u.name << ",";
  return os.str();
}

TraceResult dioc_trace(DiocSystem sys, const HostEnv& host,
                       const Policy& policy, const Schedule& schedule,
                       int max_steps) {
  TraceResult res;
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
      Label l = Label::updates_changed(names);
      res.labels.push_back(l);
      ++weak_count;
      continue;
    }
    auto ts = dioc_enabled(sys, host);
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
