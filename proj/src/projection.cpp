#include "dioc/projection.hpp"

#include <stdexcept>

namespace dioc {

const std::pair<int, int>& AuxScheme::at(int construct, const Role& r) const {
  auto it = slots.find({construct, r});
  if (it == slots.end())
    throw std::runtime_error("aux scheme: no slot for construct " +
                             std::to_string(construct) + " at role " + r.name);
  return it->second;
}

Operation aux_op(int n) { return Operation{"o*_" + std::to_string(n)}; }

namespace {

void scheme_walk(const DiocPtr& p, AuxScheme& s, int& counter) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, DSeq> || std::is_same_v<T, DPar>) {
          scheme_walk(n.left, s, counter);
          scheme_walk(n.right, s, counter);
        } else if constexpr (std::is_same_v<T, DIf>) {
          std::set<Role> rs = roles_of(n.then_branch);
          auto er = roles_of(n.else_branch);
          rs.insert(er.begin(), er.end());
          rs.erase(n.role);
          for (auto& r : rs) s.slots[{*p->index, r}] = {counter++, 0};
          scheme_walk(n.then_branch, s, counter);
          scheme_walk(n.else_branch, s, counter);
        } else if constexpr (std::is_same_v<T, DWhile>) {
          std::set<Role> rs = roles_of(n.body);
          rs.erase(n.role);
          for (auto& r : rs) {
            int i = counter++;
            int j = counter++;
            s.slots[{*p->index, r}] = {i, j};
          }
          scheme_walk(n.body, s, counter);
        } else if constexpr (std::is_same_v<T, DScope>) {
          scheme_walk(n.body, s, counter);
        }
      },
      p->node);
}

std::string aux_var(int n) { return "x_" + std::to_string(n); }

// Parallel composition of the given processes; 1 when empty.
DpocPtr par_all(std::vector<DpocPtr> ps) {
  if (ps.empty()) return p_one();
  DpocPtr acc = ps.back();
  for (auto it = ps.rbegin() + 1; it != ps.rend(); ++it)
    acc = p_par(*it, acc);
  return acc;
}

struct Projector {
  const Role& s;
  const AuxScheme& scheme;

  DpocPtr walk(const DiocPtr& p) {
    return std::visit(
        [&](auto& n) -> DpocPtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, DOne>) {
            return p_one();
          } else if constexpr (std::is_same_v<T, DZero>) {
            return p_zero();
          } else if constexpr (std::is_same_v<T, DSeq>) {
            return p_seq(walk(n.left), walk(n.right));
          } else if constexpr (std::is_same_v<T, DPar>) {
            return p_par(walk(n.left), walk(n.right));
          } else if constexpr (std::is_same_v<T, DAssign>) {
            if (s == n.role)
              return p_assign(n.var, n.expr, IndexTag{*p->index});
            return p_one();
          } else if constexpr (std::is_same_v<T, DInteraction>) {
            if (s == n.sender)
              return p_send(n.op, n.expr, n.receiver, IndexTag{*p->index});
            if (s == n.receiver)
              return p_recv(n.op, n.var, n.sender, IndexTag{*p->index});
            return p_one();
          } else if constexpr (std::is_same_v<T, DIf>) {
            int idx = *p->index;
            std::set<Role> involved = roles_of(n.then_branch);
            auto er = roles_of(n.else_branch);
            involved.insert(er.begin(), er.end());
            involved.erase(n.role);
            if (s == n.role) {
              auto branch = [&](bool v, const DiocPtr& body) {
                std::vector<DpocPtr> sends;
                for (auto& r : involved)
                  sends.push_back(p_send(aux_op(idx),
                                         Expr::literal(Value::boolean(v)), r,
                                         IndexTag{scheme.at(idx, r).first, v}));
                DpocPtr b = walk(body);
                if (sends.empty()) return b;
                return p_seq(par_all(std::move(sends)), b);
              };
              return p_if(n.guard, branch(true, n.then_branch),
                          branch(false, n.else_branch), IndexTag{idx});
            }
            if (involved.count(s)) {
              DpocPtr inner =
                  p_if(Expr::var(aux_var(idx)), walk(n.then_branch),
                       walk(n.else_branch), IndexTag{idx});
              return p_seq(p_recv(aux_op(idx), aux_var(idx), n.role,
                                  IndexTag{scheme.at(idx, s).first}),
                           inner);
            }
            return p_one();
          } else if constexpr (std::is_same_v<T, DWhile>) {
            int idx = *p->index;
            std::set<Role> involved = roles_of(n.body);
            involved.erase(n.role);
            if (s == n.role) {
              std::vector<DpocPtr> trues, falses, acks;
              for (auto& r : involved) {
                auto [i, j] = scheme.at(idx, r);
                trues.push_back(p_send(aux_op(idx),
                                       Expr::literal(Value::boolean(true)), r,
                                       IndexTag{i, true}));
                falses.push_back(p_send(aux_op(idx),
                                        Expr::literal(Value::boolean(false)),
                                        r, IndexTag{i, false}));
                acks.push_back(p_recv(aux_op(idx), "_", r, IndexTag{j}));
              }
              DpocPtr body = walk(n.body);
              if (!involved.empty())
                body = p_seq(par_all(std::move(trues)),
                             p_seq(body, par_all(std::move(acks))));
              DpocPtr loop = p_while(n.guard, body, IndexTag{idx});
              if (involved.empty()) return loop;
              return p_seq(loop, par_all(std::move(falses)));
            }
            if (involved.count(s)) {
              auto [i, j] = scheme.at(idx, s);
              DpocPtr body =
                  p_seq(walk(n.body),
                        p_seq(p_send(aux_op(idx),
                                     Expr::literal(Value::str("ok")), n.role,
                                     IndexTag{j}),
                              p_recv(aux_op(idx), aux_var(idx), n.role,
                                     IndexTag{i})));
              return p_seq(
                  p_recv(aux_op(idx), aux_var(idx), n.role, IndexTag{i}),
                  p_while(Expr::var(aux_var(idx)), body, IndexTag{idx}));
            }
            return p_one();
          } else if constexpr (std::is_same_v<T, DScope>) {
            int idx = *p->index;
            std::set<Role> body_roles = roles_of(n.body);
            if (s == n.coordinator)
              return p_scope_lead(n.coordinator, walk(n.body), body_roles,
                                  n.name, IndexTag{idx});
            if (body_roles.count(s))
              return p_scope_plain(n.coordinator, walk(n.body), n.name,
                                   IndexTag{idx});
            return p_one();
          }
        },
        p->node);
  }
};

}  // namespace

AuxScheme make_aux_scheme(const DiocPtr& p, int& counter) {
  AuxScheme s;
  scheme_walk(p, s, counter);
  return s;
}

DpocPtr pi(const DiocPtr& p, const Role& s, const AuxScheme& scheme) {
  Projector pr{s, scheme};
  return pr.walk(p);
}

Network proj(const DiocPtr& p, const GlobalState& sigma, int& counter) {
  AuxScheme scheme = make_aux_scheme(p, counter);
  Network net;
  for (auto& r : roles_of(p)) {
    RoleProc rp;
    rp.proc = pi(p, r, scheme);
    auto it = sigma.find(r);
    if (it != sigma.end()) rp.local = it->second;
    net.roles[r] = std::move(rp);
  }
  return net;
}

Network proj(const DiocPtr& p, const GlobalState& sigma) {
  int counter = max_index(p) + 1;
  return proj(p, sigma, counter);
}

namespace {

DiocPtr prefix_ops(const DiocPtr& p, int n) {
  struct V {
    int n;
    DiocPtr walk(const DiocPtr& p) {
      return std::visit(
          [&](auto& nd) -> DiocPtr {
            using T = std::decay_t<decltype(nd)>;
            if constexpr (std::is_same_v<T, DInteraction>) {
              return d_interaction(nd.op.with_prefix(n), nd.sender, nd.expr,
                                   nd.receiver, nd.var, p->index);
            } else if constexpr (std::is_same_v<T, DSeq>) {
              return d_seq(walk(nd.left), walk(nd.right));
            } else if constexpr (std::is_same_v<T, DPar>) {
              return d_par(walk(nd.left), walk(nd.right));
            } else if constexpr (std::is_same_v<T, DIf>) {
              return d_if(nd.guard, nd.role, walk(nd.then_branch),
                          walk(nd.else_branch), p->index);
            } else if constexpr (std::is_same_v<T, DWhile>) {
              return d_while(nd.guard, nd.role, walk(nd.body), p->index);
            } else if constexpr (std::is_same_v<T, DScope>) {
              return d_scope(nd.coordinator, walk(nd.body), nd.name, p->index);
            } else {
              return p;
            }
          },
          p->node);
    }
  } v{n};
  return v.walk(p);
}

}  // namespace

DiocPtr fresh_indexes(const DiocPtr& upd, int scope_index, int& counter) {
  return prefix_ops(reindex_fresh(upd, counter), scope_index);
}

}  // namespace dioc
