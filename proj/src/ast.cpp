#include "dioc/ast.hpp"

#include <sstream>
#include <stdexcept>

namespace dioc {

std::string Value::display() const {
  struct V {
    std::string operator()(const Null&) const { return "null"; }
    std::string operator()(const Error&) const { return "error"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      return "\"" + s + "\"";
    }
  };
  return std::visit(V{}, v);
}

std::string Operation::display() const {
  std::string s;
  for (int p : prefixes) s += std::to_string(p) + ".";
  return s + name;
}

ExprPtr Expr::literal(Value v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Lit;
  e->lit = std::move(v);
  return e;
}
ExprPtr Expr::var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->name = std::move(name);
  return e;
}
ExprPtr Expr::unary(std::string op, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Unary;
  e->op = std::move(op);
  e->args = {std::move(a)};
  return e;
}
ExprPtr Expr::binary(std::string op, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Binary;
  e->op = std::move(op);
  e->args = {std::move(l), std::move(r)};
  return e;
}
ExprPtr Expr::call(std::string name, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Call;
  e->name = std::move(name);
  e->args = std::move(args);
  return e;
}

namespace {

int prec_of(const std::string& op) {
  if (op == "or") return 1;
  if (op == "and") return 2;
  if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" ||
      op == ">=")
    return 3;
  if (op == "+" || op == "-") return 4;
  if (op == "*" || op == "/") return 5;
  return 6;
}

void expr_print(const ExprPtr& e, std::ostream& os, int parent_prec) {
  switch (e->kind) {
    case Expr::Kind::Lit:
      os << e->lit.display();
      break;
    case Expr::Kind::Var:
      os << e->name;
      break;
    case Expr::Kind::Call: {
      os << e->name << "(";
      bool first = true;
      for (auto& a : e->args) {
        if (!first) os << ", ";
        first = false;
        expr_print(a, os, 0);
      }
      os << ")";
      break;
    }
    case Expr::Kind::Unary:
      if (e->op == "not") {
        os << "not( ";
        expr_print(e->args[0], os, 0);
        os << " )";
      } else {  // neg
        os << "-";
        expr_print(e->args[0], os, 7);
      }
      break;
    case Expr::Kind::Binary: {
      int p = prec_of(e->op);
      bool need = p < parent_prec;
      if (need) os << "( ";
      expr_print(e->args[0], os, p);
      os << " " << e->op << " ";
      expr_print(e->args[1], os, p + 1);
      if (need) os << " )";
      break;
    }
  }
}

}  // namespace

std::string expr_display(const ExprPtr& e) {
  std::ostringstream os;
  expr_print(e, os, 0);
  return os.str();
}

namespace {
DiocPtr mk(DiocNode n) { return std::make_shared<DiocNode>(std::move(n)); }
}  // namespace

DiocPtr d_interaction(Operation op, Role sender, ExprPtr e, Role receiver,
                      std::string var, std::optional<int> index) {
  return mk({DInteraction{std::move(op), std::move(sender), std::move(e),
                          std::move(receiver), std::move(var)},
             index,
             {}});
}
DiocPtr d_assign(std::string var, Role role, ExprPtr e,
                 std::optional<int> index) {
  return mk({DAssign{std::move(var), std::move(role), std::move(e)}, index, {}});
}
DiocPtr d_seq(DiocPtr l, DiocPtr r) {
  return mk({DSeq{std::move(l), std::move(r)}, {}, {}});
}
DiocPtr d_par(DiocPtr l, DiocPtr r) {
  return mk({DPar{std::move(l), std::move(r)}, {}, {}});
}
DiocPtr d_one() { return mk({DOne{}, {}, {}}); }
DiocPtr d_zero() { return mk({DZero{}, {}, {}}); }
DiocPtr d_if(ExprPtr guard, Role role, DiocPtr then_b, DiocPtr else_b,
             std::optional<int> index) {
  return mk({DIf{std::move(guard), std::move(role), std::move(then_b),
                 std::move(else_b)},
             index,
             {}});
}
DiocPtr d_while(ExprPtr guard, Role role, DiocPtr body,
                std::optional<int> index) {
  return mk({DWhile{std::move(guard), std::move(role), std::move(body)},
             index,
             {}});
}
DiocPtr d_scope(Role coordinator, DiocPtr body, std::string name,
                std::optional<int> index) {
  return mk({DScope{std::move(coordinator), std::move(body), std::move(name)},
             index,
             {}});
}

DiocPtr with_index(const DiocPtr& p, std::optional<int> index) {
  DiocNode n = *p;
  n.index = index;
  return mk(std::move(n));
}

std::string IndexTag::display() const {
  if (!branch) return std::to_string(base);
  return "(" + std::to_string(base) + "," + (*branch ? "true" : "false") + ")";
}

std::string GlobalIndex::display() const {
  std::string s;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) s += ":";
    s += path[i].display();
  }
  return s;
}

std::set<Role> roles_of(const DiocPtr& p) {
  std::set<Role> out;
  struct V {
    std::set<Role>& out;
    void operator()(const DInteraction& n) {
      out.insert(n.sender);
      out.insert(n.receiver);
    }
    void operator()(const DAssign& n) { out.insert(n.role); }
    void operator()(const DSeq& n) {
      walk(n.left);
      walk(n.right);
    }
    void operator()(const DPar& n) {
      walk(n.left);
      walk(n.right);
    }
    void operator()(const DOne&) {}
    void operator()(const DZero&) {}
    void operator()(const DIf& n) {
      out.insert(n.role);
      walk(n.then_branch);
      walk(n.else_branch);
    }
    void operator()(const DWhile& n) {
      out.insert(n.role);
      walk(n.body);
    }
    void operator()(const DScope& n) {
      out.insert(n.coordinator);
      walk(n.body);
    }
    void walk(const DiocPtr& p) { std::visit(*this, p->node); }
  } v{out};
  v.walk(p);
  return out;
}

std::set<OpSignature> operations_of(const DiocPtr& p) {
  std::set<OpSignature> out;
  struct V {
    std::set<OpSignature>& out;
    void operator()(const DInteraction& n) {
      out.insert({n.op, n.sender, n.receiver});
    }
    void operator()(const DAssign&) {}
    void operator()(const DSeq& n) {
      walk(n.left);
      walk(n.right);
    }
    void operator()(const DPar& n) {
      walk(n.left);
      walk(n.right);
    }
    void operator()(const DOne&) {}
    void operator()(const DZero&) {}
    void operator()(const DIf& n) {
      walk(n.then_branch);
      walk(n.else_branch);
    }
    void operator()(const DWhile& n) { walk(n.body); }
    void operator()(const DScope& n) { walk(n.body); }
    void walk(const DiocPtr& p) { std::visit(*this, p->node); }
  } v{out};
  v.walk(p);
  return out;
}

bool is_initial(const DiocPtr& p) {
  struct V {
    bool operator()(const DZero&) const { return false; }
    bool operator()(const DOne&) const { return true; }
    bool operator()(const DInteraction&) const { return true; }
    bool operator()(const DAssign&) const { return true; }
    bool operator()(const DSeq& n) const {
      return walk(n.left) && walk(n.right);
    }
    bool operator()(const DPar& n) const {
      return walk(n.left) && walk(n.right);
    }
    bool operator()(const DIf& n) const {
      return walk(n.then_branch) && walk(n.else_branch);
    }
    bool operator()(const DWhile& n) const { return walk(n.body); }
    bool operator()(const DScope& n) const { return walk(n.body); }
    bool walk(const DiocPtr& p) const { return std::visit(*this, p->node); }
  } v;
  return v.walk(p);
}

namespace {

DiocPtr renumber(const DiocPtr& p, int& counter) {
  struct V {
    int& counter;
    DiocPtr operator()(const DInteraction& n, const DiocPtr& p) {
      return with_index(p, counter++);
    }
    DiocPtr operator()(const DAssign&, const DiocPtr& p) {
      return with_index(p, counter++);
    }
    DiocPtr operator()(const DSeq& n, const DiocPtr&) {
      auto l = walk(n.left);
      auto r = walk(n.right);
      return d_seq(l, r);
    }
    DiocPtr operator()(const DPar& n, const DiocPtr&) {
      auto l = walk(n.left);
      auto r = walk(n.right);
      return d_par(l, r);
    }
    DiocPtr operator()(const DOne&, const DiocPtr& p) { return p; }
    DiocPtr operator()(const DZero&, const DiocPtr& p) { return p; }
    DiocPtr operator()(const DIf& n, const DiocPtr&) {
      int idx = counter++;
      auto t = walk(n.then_branch);
      auto e = walk(n.else_branch);
      return d_if(n.guard, n.role, t, e, idx);
    }
    DiocPtr operator()(const DWhile& n, const DiocPtr&) {
      int idx = counter++;
      auto b = walk(n.body);
      return d_while(n.guard, n.role, b, idx);
    }
    DiocPtr operator()(const DScope& n, const DiocPtr&) {
      int idx = counter++;
      auto b = walk(n.body);
      return d_scope(n.coordinator, b, n.name, idx);
    }
    DiocPtr walk(const DiocPtr& p) {
      return std::visit([&](auto& n) { return (*this)(n, p); }, p->node);
    }
  } v{counter};
  return v.walk(p);
}

}  // namespace

DiocPtr annotate(const DiocPtr& p) {
  int counter = 1;
  return renumber(p, counter);
}

DiocPtr reindex_fresh(const DiocPtr& p, int& counter) {
  return renumber(p, counter);
}

int max_index(const DiocPtr& p) {
  int best = 0;
  struct V {
    int& best;
    void walk(const DiocPtr& p) {
      if (p->index && *p->index > best) best = *p->index;
      std::visit(
          [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, DSeq> || std::is_same_v<T, DPar>) {
              walk(n.left);
              walk(n.right);
            } else if constexpr (std::is_same_v<T, DIf>) {
              walk(n.then_branch);
              walk(n.else_branch);
            } else if constexpr (std::is_same_v<T, DWhile> ||
                                 std::is_same_v<T, DScope>) {
              walk(n.body);
            }
          },
          p->node);
    }
  } v{best};
  v.walk(p);
  return best;
}

bool is_well_annotated(const DiocPtr& p) {
  std::set<int> seen;
  bool ok = true;
  struct V {
    std::set<int>& seen;
    bool& ok;
    void visit_index(const DiocPtr& p) {
      if (!p->index) {
        ok = false;
        return;
      }
      if (!seen.insert(*p->index).second) ok = false;
    }
    void walk(const DiocPtr& p) {
      std::visit(
          [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, DSeq> || std::is_same_v<T, DPar>) {
              walk(n.left);
              walk(n.right);
            } else if constexpr (std::is_same_v<T, DIf>) {
              visit_index(p);
              walk(n.then_branch);
              walk(n.else_branch);
            } else if constexpr (std::is_same_v<T, DWhile>) {
              visit_index(p);
              walk(n.body);
            } else if constexpr (std::is_same_v<T, DScope>) {
              visit_index(p);
              walk(n.body);
            } else if constexpr (std::is_same_v<T, DInteraction> ||
                                 std::is_same_v<T, DAssign>) {
              visit_index(p);
            }
          },
          p->node);
    }
  } v{seen, ok};
  v.walk(p);
  return ok;
}

std::map<const DiocNode*, GlobalIndex> global_indexes(const DiocPtr& p) {
  std::map<const DiocNode*, GlobalIndex> out;
  std::map<GlobalIndex, int> seen;
  struct V {
    std::map<const DiocNode*, GlobalIndex>& out;
    std::map<GlobalIndex, int>& seen;
    void record(const DiocPtr& p, const std::vector<IndexTag>& while_path) {
      if (!p->index) throw std::runtime_error("global_indexes: missing index");
      GlobalIndex g;
      g.path = while_path;
      g.path.push_back(IndexTag{*p->index});
      if (++seen[g] > 1)
        throw std::runtime_error("global_indexes: duplicate global index " +
                                 g.display());
      out[p.get()] = std::move(g);
    }
    void walk(const DiocPtr& p, std::vector<IndexTag> while_path) {
      std::visit(
          [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, DSeq> || std::is_same_v<T, DPar>) {
              walk(n.left, while_path);
              walk(n.right, while_path);
            } else if constexpr (std::is_same_v<T, DIf>) {
              record(p, while_path);
              walk(n.then_branch, while_path);
              walk(n.else_branch, while_path);
            } else if constexpr (std::is_same_v<T, DWhile>) {
              record(p, while_path);
              auto inner = while_path;
              inner.push_back(IndexTag{*p->index});
              walk(n.body, inner);
            } else if constexpr (std::is_same_v<T, DScope>) {
              record(p, while_path);
              walk(n.body, while_path);
            } else if constexpr (std::is_same_v<T, DInteraction> ||
                                 std::is_same_v<T, DAssign>) {
              record(p, while_path);
            }
          },
          p->node);
    }
  } v{out, seen};
  v.walk(p, {});
  return out;
}

std::string dump_dioc(const DiocPtr& p, bool with_indexes) {
  std::ostringstream os;
  struct V {
    std::ostream& os;
    bool idx;
    void tag(const DiocPtr& p) {
      if (idx && p->index) os << "[" << *p->index << "]";
    }
    void walk(const DiocPtr& p) {
      std::visit(
          [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, DInteraction>) {
              tag(p);
              os << "comm(" << n.op.display() << "," << n.sender.name << ","
                 << expr_display(n.expr) << "," << n.receiver.name << ","
                 << n.var << ")";
            } else if constexpr (std::is_same_v<T, DAssign>) {
              tag(p);
              os << "assign(" << n.var << "," << n.role.name << ","
                 << expr_display(n.expr) << ")";
            } else if constexpr (std::is_same_v<T, DSeq>) {
              os << "seq(";
              walk(n.left);
              os << ",";
              walk(n.right);
              os << ")";
            } else if constexpr (std::is_same_v<T, DPar>) {
              os << "par(";
              walk(n.left);
              os << ",";
              walk(n.right);
              os << ")";
            } else if constexpr (std::is_same_v<T, DOne>) {
              os << "1";
            } else if constexpr (std::is_same_v<T, DZero>) {
              os << "0";
            } else if constexpr (std::is_same_v<T, DIf>) {
              tag(p);
              os << "if(" << expr_display(n.guard) << "@" << n.role.name << ",";
              walk(n.then_branch);
              os << ",";
              walk(n.else_branch);
              os << ")";
            } else if constexpr (std::is_same_v<T, DWhile>) {
              tag(p);
              os << "while(" << expr_display(n.guard) << "@" << n.role.name
                 << ",";
              walk(n.body);
              os << ")";
            } else if constexpr (std::is_same_v<T, DScope>) {
              tag(p);
              os << "scope(" << n.name << "@" << n.coordinator.name << ",";
              walk(n.body);
              os << ")";
            }
          },
          p->node);
    }
  } v{os, with_indexes};
  v.walk(p);
  return os.str();
}

}  // namespace dioc
