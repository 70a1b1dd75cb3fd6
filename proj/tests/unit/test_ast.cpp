#include "doctest.h"

#include "dioc/ast.hpp"

using namespace dioc;

TEST_CASE("value comparisons and display") {
  CHECK(Value::integer(3) == Value::integer(3));
  CHECK(Value::integer(3) != Value::integer(4));
  CHECK(Value::null().is_null());
  CHECK(Value::error().is_error());
  CHECK(Value::boolean(true).as_bool());
  CHECK(Value::str("x").display() == "\"x\"");
  CHECK(Value::integer(-7).display() == "-7");
}

TEST_CASE("operation prefixes") {
  Operation o{"offer"};
  CHECK_FALSE(o.is_private());
  Operation p = o.with_prefix(6);
  CHECK(p.display() == "6.offer");
  Operation q = p.with_prefix(2);
  CHECK(q.display() == "2.6.offer");
  CHECK(q.stripped().display() == "offer");
  CHECK(Operation{"o*_3"}.is_private());
  CHECK(Operation{"o*_3"}.with_prefix(6).is_private());
}

static DiocPtr sample() {
  Role a{"a"}, b{"b"};
  return d_seq(
      d_assign("x", a, Expr::literal(Value::integer(1))),
      d_while(Expr::var("x"), a,
              d_interaction(Operation{"m"}, a, Expr::var("x"), b, "y")));
}

TEST_CASE("annotate assigns distinct preorder indexes") {
  DiocPtr p = annotate(sample());
  CHECK(is_well_annotated(p));
  auto& s = std::get<DSeq>(p->node);
  CHECK(std::get<DAssign>(s.left->node).var == "x");
  CHECK(s.left->index == 1);
  CHECK(s.right->index == 2);
  auto& w = std::get<DWhile>(s.right->node);
  CHECK(w.body->index == 3);
  CHECK(max_index(p) == 3);
}

TEST_CASE("reindex_fresh renumbers from the counter") {
  int c = 10;
  DiocPtr p = reindex_fresh(annotate(sample()), c);
  CHECK(c == 13);
  CHECK(max_index(p) == 12);
  CHECK(is_well_annotated(p));
}

TEST_CASE("is_initial rejects zero") {
  CHECK(is_initial(sample()));
  CHECK_FALSE(is_initial(d_seq(sample(), d_zero())));
}

TEST_CASE("roles_of collects every mentioned role") {
  auto rs = roles_of(sample());
  CHECK((rs == std::set<Role>{Role{"a"}, Role{"b"}}));
  DiocPtr sc = d_scope(Role{"c"}, sample());
  CHECK(roles_of(sc).count(Role{"c"}) == 1);
}

TEST_CASE("well-annotation detects duplicates and gaps") {
  DiocPtr bad = d_seq(d_assign("x", Role{"a"}, Expr::literal(Value::integer(0)), 1),
                      d_assign("y", Role{"a"}, Expr::literal(Value::integer(0)), 1));
  CHECK_FALSE(is_well_annotated(bad));
  DiocPtr gap = d_assign("x", Role{"a"}, Expr::literal(Value::integer(0)));
  CHECK_FALSE(is_well_annotated(gap));
}

TEST_CASE("global indexes track enclosing whiles") {
  DiocPtr p = annotate(sample());
  auto gi = global_indexes(p);
  auto& s = std::get<DSeq>(p->node);
  auto& w = std::get<DWhile>(s.right->node);
  GlobalIndex body_gi = gi.at(w.body.get());
  REQUIRE(body_gi.path.size() == 2);
  CHECK(body_gi.path[0].base == 2);
  CHECK(body_gi.path[1].base == 3);
  GlobalIndex top_gi = gi.at(s.left.get());
  CHECK(top_gi.path.size() == 1);
}

TEST_CASE("struct_equal ignores indexes unless asked") {
  DiocPtr a = annotate(sample());
  int c = 50;
  DiocPtr b = reindex_fresh(a, c);
  CHECK(struct_equal(a, b));
  CHECK_FALSE(struct_equal(a, b, true));
  CHECK(dump_dioc(a) != dump_dioc(b));
  CHECK(dump_dioc(a, false) == dump_dioc(b, false));
}
