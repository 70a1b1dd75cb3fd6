#include "dioc/dpoc.hpp"

#include <sstream>

namespace dioc {

namespace {
DpocPtr mk(DpocNode n) { return std::make_shared<DpocNode>(std::move(n)); }
}  // namespace

DpocPtr p_recv(Operation op, std::string var, Role from,
               std::optional<IndexTag> idx) {
  return mk({PRecv{std::move(op), std::move(var), std::move(from)}, idx});
}
DpocPtr p_send(Operation op, ExprPtr e, Role to, std::optional<IndexTag> idx) {
  return mk({PSend{std::move(op), std::move(e), std::move(to)}, idx});
}
DpocPtr p_send_ho(Operation op, HoPayload payload, Role to,
                  std::optional<IndexTag> idx) {
  return mk({PSendHo{std::move(op), std::move(payload), std::move(to)}, idx});
}
DpocPtr p_assign(std::string var, ExprPtr e, std::optional<IndexTag> idx) {
  return mk({PAssign{std::move(var), std::move(e)}, idx});
}
DpocPtr p_seq(DpocPtr l, DpocPtr r) {
  return mk({PSeq{std::move(l), std::move(r)}, {}});
}
DpocPtr p_par(DpocPtr l, DpocPtr r) {
  return mk({PPar{std::move(l), std::move(r)}, {}});
}
DpocPtr p_one() { return mk({POne{}, {}}); }
DpocPtr p_zero() { return mk({PZero{}, {}}); }
DpocPtr p_if(ExprPtr guard, DpocPtr t, DpocPtr e, std::optional<IndexTag> idx) {
  return mk({PIf{std::move(guard), std::move(t), std::move(e)}, idx});
}
DpocPtr p_while(ExprPtr guard, DpocPtr body, std::optional<IndexTag> idx) {
  return mk({PWhile{std::move(guard), std::move(body)}, idx});
}
DpocPtr p_scope_lead(Role coord, DpocPtr body, std::set<Role> roles,
                     std::string name, std::optional<IndexTag> idx) {
  return mk({PScopeLead{std::move(coord), std::move(body), std::move(roles),
                        std::move(name)},
             idx});
}
DpocPtr p_scope_plain(Role coord, DpocPtr body, std::string name,
                      std::optional<IndexTag> idx) {
  return mk(
      {PScopePlain{std::move(coord), std::move(body), std::move(name)}, idx});
}

bool p_can_tick(const DpocPtr& p) {
  return std::visit(
      [](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, POne>)
          return true;
        else if constexpr (std::is_same_v<T, PSeq> || std::is_same_v<T, PPar>)
          return p_can_tick(n.left) && p_can_tick(n.right);
        else
          return false;
      },
      p->node);
}

bool p_is_one_like(const DpocPtr& p) { return p_can_tick(p); }

DpocPtr p_collapse_ones(const DpocPtr& p) {
  struct V {
    DpocPtr walk(const DpocPtr& p) {
      return std::visit(
          [&](auto& n) -> DpocPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, PSeq>) {
              auto l = walk(n.left);
              auto r = walk(n.right);
              if (std::holds_alternative<POne>(l->node)) return r;
              if (std::holds_alternative<POne>(r->node)) return l;
              return p_seq(l, r);
            } else if constexpr (std::is_same_v<T, PPar>) {
              auto l = walk(n.left);
              auto r = walk(n.right);
              if (std::holds_alternative<POne>(l->node)) return r;
              if (std::holds_alternative<POne>(r->node)) return l;
              return p_par(l, r);
            } else if constexpr (std::is_same_v<T, PIf>) {
              return p_if(n.guard, walk(n.then_branch), walk(n.else_branch),
                          p->index);
            } else if constexpr (std::is_same_v<T, PWhile>) {
              return p_while(n.guard, walk(n.body), p->index);
            } else if constexpr (std::is_same_v<T, PScopeLead>) {
              return p_scope_lead(n.coordinator, walk(n.body), n.roles, n.name,
                                  p->index);
            } else if constexpr (std::is_same_v<T, PScopePlain>) {
              return p_scope_plain(n.coordinator, walk(n.body), n.name,
                                   p->index);
            } else {
              return p;
            }
          },
          p->node);
    }
  } v;
  return v.walk(p);
}

namespace {

void dump_walk(const DpocPtr& p, std::ostream& os, bool idx) {
  auto tag = [&] {
    if (idx && p->index) os << "[" << p->index->display() << "]";
  };
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PRecv>) {
          tag();
          os << "recv(" << n.op.display() << "," << n.var << "," << n.from.name
             << ")";
        } else if constexpr (std::is_same_v<T, PSend>) {
          tag();
          os << "send(" << n.op.display() << "," << expr_display(n.expr) << ","
             << n.to.name << ")";
        } else if constexpr (std::is_same_v<T, PSendHo>) {
          tag();
          os << "sendho(" << n.op.display() << ",";
          if (n.payload.is_code) {
            os << "code{";
            dump_walk(n.payload.code, os, idx);
            os << "}";
          } else {
            os << "no";
          }
          os << "," << n.to.name << ")";
        } else if constexpr (std::is_same_v<T, PAssign>) {
          tag();
          os << "assign(" << n.var << "," << expr_display(n.expr) << ")";
        } else if constexpr (std::is_same_v<T, PSeq>) {
          os << "seq(";
          dump_walk(n.left, os, idx);
          os << ",";
          dump_walk(n.right, os, idx);
          os << ")";
        } else if constexpr (std::is_same_v<T, PPar>) {
          os << "par(";
          dump_walk(n.left, os, idx);
          os << ",";
          dump_walk(n.right, os, idx);
          os << ")";
        } else if constexpr (std::is_same_v<T, POne>) {
          os << "1";
        } else if constexpr (std::is_same_v<T, PZero>) {
          os << "0";
        } else if constexpr (std::is_same_v<T, PIf>) {
          tag();
          os << "if(" << expr_display(n.guard) << ",";
          dump_walk(n.then_branch, os, idx);
          os << ",";
          dump_walk(n.else_branch, os, idx);
          os << ")";
        } else if constexpr (std::is_same_v<T, PWhile>) {
          tag();
          os << "while(" << expr_display(n.guard) << ",";
          dump_walk(n.body, os, idx);
          os << ")";
        } else if constexpr (std::is_same_v<T, PScopeLead>) {
          tag();
          os << "scopelead(" << n.coordinator.name << ",";
          dump_walk(n.body, os, idx);
          os << ",{";
          bool first = true;
          for (auto& r : n.roles) {
            if (!first) os << ",";
            first = false;
            os << r.name;
          }
          os << "})";
        } else if constexpr (std::is_same_v<T, PScopePlain>) {
          tag();
          os << "scopeplain(" << n.coordinator.name << ",";
          dump_walk(n.body, os, idx);
          os << ")";
        }
      },
      p->node);
}

void pretty_walk(const DpocPtr& p, std::ostream& os, int ind);

void pretty_block(const DpocPtr& p, std::ostream& os, int ind) {
  os << "{\n";
  pretty_walk(p, os, ind + 2);
  os << "\n" << std::string(ind, ' ') << "}";
}

// Sequencing prints one statement per line; parallel uses { A | B }.
void pretty_walk(const DpocPtr& p, std::ostream& os, int ind) {
  std::string pad(ind, ' ');
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PRecv>) {
          os << pad << n.op.display() << " : " << n.var << " from "
             << n.from.name;
        } else if constexpr (std::is_same_v<T, PSend>) {
          os << pad << n.op.display() << " : " << expr_display(n.expr) << " to "
             << n.to.name;
        } else if constexpr (std::is_same_v<T, PSendHo>) {
          os << pad << n.op.display() << " : ";
          if (n.payload.is_code) {
            os << "code ";
            pretty_block(n.payload.code, os, ind);
          } else {
            os << "no";
          }
          os << " to " << n.to.name;
        } else if constexpr (std::is_same_v<T, PAssign>) {
          os << pad << n.var << " = " << expr_display(n.expr);
        } else if constexpr (std::is_same_v<T, PSeq>) {
          pretty_walk(n.left, os, ind);
          os << ";\n";
          pretty_walk(n.right, os, ind);
        } else if constexpr (std::is_same_v<T, PPar>) {
          os << pad << "{\n";
          pretty_walk(n.left, os, ind + 2);
          os << "\n" << pad << "|\n";
          pretty_walk(n.right, os, ind + 2);
          os << "\n" << pad << "}";
        } else if constexpr (std::is_same_v<T, POne>) {
          os << pad << "1";
        } else if constexpr (std::is_same_v<T, PZero>) {
          os << pad << "0";
        } else if constexpr (std::is_same_v<T, PIf>) {
          os << pad << "if ( " << expr_display(n.guard) << " ) ";
          pretty_block(n.then_branch, os, ind);
          if (!p_is_one_like(n.else_branch)) {
            os << " else ";
            pretty_block(n.else_branch, os, ind);
          }
        } else if constexpr (std::is_same_v<T, PWhile>) {
          os << pad << "while ( " << expr_display(n.guard) << " ) ";
          pretty_block(n.body, os, ind);
        } else if constexpr (std::is_same_v<T, PScopeLead>) {
          os << pad;
          if (p->index) os << p->index->display() << " : ";
          os << "scope ";
          if (!n.name.empty()) os << n.name << " ";
          os << "@" << n.coordinator.name << " ";
          pretty_block(n.body, os, ind);
          os << " roles { ";
          bool first = true;
          for (auto& r : n.roles) {
            if (!first) os << ", ";
            first = false;
            os << r.name;
          }
          os << " }";
        } else if constexpr (std::is_same_v<T, PScopePlain>) {
          os << pad;
          if (p->index) os << p->index->display() << " : ";
          os << "scope ";
          if (!n.name.empty()) os << n.name << " ";
          os << "@" << n.coordinator.name << " ";
          pretty_block(n.body, os, ind);
        }
      },
      p->node);
}

}  // namespace

std::string dump_dpoc(const DpocPtr& p, bool with_indexes) {
  std::ostringstream os;
  dump_walk(p, os, with_indexes);
  return os.str();
}

std::string pretty_dpoc(const DpocPtr& p, int indent) {
  std::ostringstream os;
  pretty_walk(p, os, indent);
  return os.str();
}

std::string dump_network(const Network& n, bool with_indexes) {
  std::ostringstream os;
  for (auto& [role, rp] : n.roles) {
    os << role.name << "<";
    dump_walk(rp.proc, os, with_indexes);
    os << "|";
    for (auto& [k, v] : rp.local) os << k << "=" << v.display() << ",";
    os << ">";
  }
  return os.str();
}

}  // namespace dioc
