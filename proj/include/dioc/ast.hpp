#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace dioc {

/// A named participant of a choreography.
struct Role {
  std::string name;
  auto operator<=>(const Role&) const = default;
};

/// Runtime values. Error absorbs every operation applied to it.
struct Value {
  struct Null {
    auto operator<=>(const Null&) const = default;
  };
  struct Error {
    auto operator<=>(const Error&) const = default;
  };

  std::variant<Null, Error, std::int64_t, bool, std::string> v;

  Value() : v(Null{}) {}

  static Value null() { return Value{}; }
  static Value error() {
    Value x;
    x.v = Error{};
    return x;
  }
  static Value integer(std::int64_t i) {
    Value x;
    x.v = i;
    return x;
  }
  static Value boolean(bool b) {
    Value x;
    x.v = b;
    return x;
  }
  static Value str(std::string s) {
    Value x;
    x.v = std::move(s);
    return x;
  }

  bool is_null() const { return std::holds_alternative<Null>(v); }
  bool is_error() const { return std::holds_alternative<Error>(v); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_str() const { return std::holds_alternative<std::string>(v); }

  std::int64_t as_int() const { return std::get<std::int64_t>(v); }
  bool as_bool() const { return std::get<bool>(v); }
  const std::string& as_str() const { return std::get<std::string>(v); }

  auto operator<=>(const Value&) const = default;

  std::string display() const;
};

/// A communication operation name, possibly carrying stacked scope-index
/// prefixes (outermost first) added while shipping update code.
struct Operation {
  std::string name;
  std::vector<int> prefixes;

  Operation() = default;
  explicit Operation(std::string n) : name(std::move(n)) {}

  bool is_private() const { return name.rfind("o*_", 0) == 0; }

  Operation with_prefix(int n) const {
    Operation o = *this;
    o.prefixes.insert(o.prefixes.begin(), n);
    return o;
  }
  Operation stripped() const { return Operation{name}; }

  /// "6.offer", "o*_3", ...
  std::string display() const;

  auto operator<=>(const Operation&) const = default;
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Lit, Var, Unary, Binary, Call };

  Kind kind = Kind::Lit;
  Value lit;               // Lit
  std::string name;        // Var name, Call name
  std::string op;          // "+", "-", ..., "not", "neg" (Unary/Binary)
  std::vector<ExprPtr> args;

  static ExprPtr literal(Value v);
  static ExprPtr var(std::string name);
  static ExprPtr unary(std::string op, ExprPtr e);
  static ExprPtr binary(std::string op, ExprPtr l, ExprPtr r);
  static ExprPtr call(std::string name, std::vector<ExprPtr> args);
};

std::string expr_display(const ExprPtr& e);

// ---------------------------------------------------------------------------
// DIOC abstract syntax
// ---------------------------------------------------------------------------

struct SrcSpan {
  int line = 0;
  int column = 0;
  int length = 0;
};

struct DiocNode;
using DiocPtr = std::shared_ptr<const DiocNode>;

struct DInteraction {
  Operation op;
  Role sender;
  ExprPtr expr;
  Role receiver;
  std::string var;
};
struct DAssign {
  std::string var;
  Role role;
  ExprPtr expr;
};
struct DSeq {
  DiocPtr left, right;
};
struct DPar {
  DiocPtr left, right;
};
struct DOne {};
struct DZero {};
struct DIf {
  ExprPtr guard;
  Role role;
  DiocPtr then_branch, else_branch;
};
struct DWhile {
  ExprPtr guard;
  Role role;
  DiocPtr body;
};
struct DScope {
  Role coordinator;
  DiocPtr body;
  std::string name;  // the inert Delta annotation, possibly empty
};

struct DiocNode {
  std::variant<DInteraction, DAssign, DSeq, DPar, DOne, DZero, DIf, DWhile,
               DScope>
      node;
  std::optional<int> index;
  SrcSpan span;
};

DiocPtr d_interaction(Operation op, Role sender, ExprPtr e, Role receiver,
                      std::string var, std::optional<int> index = {});
DiocPtr d_assign(std::string var, Role role, ExprPtr e,
                 std::optional<int> index = {});
DiocPtr d_seq(DiocPtr l, DiocPtr r);
DiocPtr d_par(DiocPtr l, DiocPtr r);
DiocPtr d_one();
DiocPtr d_zero();
DiocPtr d_if(ExprPtr guard, Role role, DiocPtr then_b, DiocPtr else_b,
             std::optional<int> index = {});
DiocPtr d_while(ExprPtr guard, Role role, DiocPtr body,
                std::optional<int> index = {});
DiocPtr d_scope(Role coordinator, DiocPtr body, std::string name = "",
                std::optional<int> index = {});

/// Rebuild a node with a different index.
DiocPtr with_index(const DiocPtr& p, std::optional<int> index);

// ---------------------------------------------------------------------------
// Index machinery
// ---------------------------------------------------------------------------

/// A construct index: a natural, optionally tagged with a branch marker
/// (the (i,true)/(i,false) form used by auxiliary conditional outputs).
struct IndexTag {
  int base = 0;
  std::optional<bool> branch;

  IndexTag() = default;
  explicit IndexTag(int b) : base(b) {}
  IndexTag(int b, bool br) : base(b), branch(br) {}

  std::string display() const;
  auto operator<=>(const IndexTag&) const = default;
};

/// Path of enclosing-while indexes ending with the construct's own index.
struct GlobalIndex {
  std::vector<IndexTag> path;
  std::string display() const;
  auto operator<=>(const GlobalIndex&) const = default;
};

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

using LocalState = std::map<std::string, Value>;
using GlobalState = std::map<Role, LocalState>;

// ---------------------------------------------------------------------------
// Structural functions
// ---------------------------------------------------------------------------

std::set<Role> roles_of(const DiocPtr& p);

struct OpSignature {
  Operation op;
  Role sender;
  Role receiver;
  auto operator<=>(const OpSignature&) const = default;
};
std::set<OpSignature> operations_of(const DiocPtr& p);

/// True iff no Zero node occurs (an initial process).
bool is_initial(const DiocPtr& p);

/// Assign distinct indexes 1,2,... by preorder traversal, discarding any
/// existing annotation.
DiocPtr annotate(const DiocPtr& p);

/// Reassign fresh distinct indexes drawn from `counter` (preorder).
DiocPtr reindex_fresh(const DiocPtr& p, int& counter);

/// Largest index occurring in p (0 if none).
int max_index(const DiocPtr& p);

/// True iff every indexable construct carries an index and all are distinct.
bool is_well_annotated(const DiocPtr& p);

/// Global indexes of all indexed constructs. Throws std::runtime_error on a
/// duplicate index that is not explained by while-unfolding.
std::map<const DiocNode*, GlobalIndex> global_indexes(const DiocPtr& p);

/// Deterministic serialization used for structural comparison and state keys.
std::string dump_dioc(const DiocPtr& p, bool with_indexes = true);

inline bool struct_equal(const DiocPtr& a, const DiocPtr& b,
                         bool with_indexes = false) {
  return dump_dioc(a, with_indexes) == dump_dioc(b, with_indexes);
}

}  // namespace dioc
