#include "doctest.h"

#include "dioc/events.hpp"
#include "dioc/parser.hpp"
#include "dioc/projection.hpp"
#include "support/util.hpp"

using namespace dioc;
using namespace dioc::testsupport;

static DiocPtr parse_ann(const std::string& s) {
  auto r = parse_dioc(s);
  REQUIRE_MESSAGE(r.ok(), s);
  return annotate(r.program);
}

static int find_ev(const EventGraph& g, Event::Kind k, const std::string& op,
                   const Role& r) {
  for (size_t i = 0; i < g.events.size(); ++i) {
    auto& e = g.events[i];
    if (e.kind == k && e.op && e.op->name == op && e.in_role(r)) return (int)i;
  }
  return -1;
}

TEST_CASE("interaction yields a sending and a receiving event") {
  EventGraph g = events_dioc(parse_ann("m : a( 1 ) -> b( v )"));
  int f = find_ev(g, Event::Kind::Sending, "m", Role{"a"});
  int t = find_ev(g, Event::Kind::Receiving, "m", Role{"b"});
  REQUIRE(f >= 0);
  REQUIRE(t >= 0);
  CHECK(g.leq(f, t));
  CHECK_FALSE(g.leq(t, f));
  CHECK(g.leq(f, f));
}

TEST_CASE("choreography sequencing orders events across roles") {
  EventGraph g =
      events_dioc(parse_ann("m : a( 1 ) -> b( x ); n : b( x ) -> c( y )"));
  int fm = find_ev(g, Event::Kind::Sending, "m", Role{"a"});
  int fn = find_ev(g, Event::Kind::Sending, "n", Role{"b"});
  REQUIRE(fm >= 0);
  REQUIRE(fn >= 0);
  CHECK(g.leq(fm, fn));
  CHECK_FALSE(g.leq(fn, fm));
}

TEST_CASE("network sequencing is per role, closed under synchronisation") {
  DiocPtr p = parse_ann("m : a( 1 ) -> b( x ); n : b( x ) -> c( y )");
  EventGraph g = events_dpoc(proj(p, {}));
  int fm = find_ev(g, Event::Kind::Sending, "m", Role{"a"});
  int tm = find_ev(g, Event::Kind::Receiving, "m", Role{"b"});
  int fn = find_ev(g, Event::Kind::Sending, "n", Role{"b"});
  REQUIRE(fm >= 0);
  REQUIRE(tm >= 0);
  REQUIRE(fn >= 0);
  CHECK(g.leq(tm, fn));  // same role
  CHECK(g.leq(fm, fn));  // via the match of tm
}

TEST_CASE("scope start and end bracket the body") {
  EventGraph g = events_dioc(parse_ann("scope @a { m : a( 1 ) -> b( v ) }"));
  int init = -1, term = -1, f = find_ev(g, Event::Kind::Sending, "m", Role{"a"});
  for (size_t i = 0; i < g.events.size(); ++i) {
    if (g.events[i].kind == Event::Kind::ScopeInit) init = (int)i;
    if (g.events[i].kind == Event::Kind::ScopeTerm) term = (int)i;
  }
  REQUIRE(init >= 0);
  REQUIRE(term >= 0);
  REQUIRE(f >= 0);
  CHECK(g.leq(init, f));
  CHECK(g.leq(f, term));
  CHECK(g.events[init].roles.size() == 2);
}

TEST_CASE("events in different branches conflict") {
  EventGraph g = events_dioc(parse_ann(
      "if ( x )@a { m : a( 1 ) -> b( v ) } else { n : a( 2 ) -> b( w ) }"));
  int fm = find_ev(g, Event::Kind::Sending, "m", Role{"a"});
  int fn = find_ev(g, Event::Kind::Sending, "n", Role{"a"});
  REQUIRE(fm >= 0);
  REQUIRE(fn >= 0);
  CHECK(g.conflicting(fm, fn));
  CHECK_FALSE(g.leq(fm, fn));
  int guard = -1;
  for (size_t i = 0; i < g.events.size(); ++i)
    if (g.events[i].kind == Event::Kind::GuardIf) guard = (int)i;
  REQUIRE(guard >= 0);
  CHECK_FALSE(g.conflicting(guard, fm));
  CHECK(g.leq(guard, fm));
}

TEST_CASE("minimality tracks strict predecessors") {
  // at the choreography level the send precedes its receive
  DiocPtr p = parse_ann("m : a( 1 ) -> b( v )");
  EventGraph g = events_dioc(p);
  int f = find_ev(g, Event::Kind::Sending, "m", Role{"a"});
  int t = find_ev(g, Event::Kind::Receiving, "m", Role{"b"});
  CHECK(g.minimal(f));
  CHECK_FALSE(g.minimal(t));
  CHECK((g.minimal(t, {f})));

  // at the network level the two ends are independent until matched
  EventGraph gp = events_dpoc(proj(p, {}));
  int pf = find_ev(gp, Event::Kind::Sending, "m", Role{"a"});
  REQUIRE(pf >= 0);
  CHECK(gp.minimal(pf));
  auto found = gp.find_by_own_index(Role{"a"}, IndexTag{1});
  REQUIRE(found.size() == 1);
  CHECK(found[0] == pf);
}

TEST_CASE("projections of the fixtures are well annotated") {
  for (auto* name : {"buying.dioc", "corpus/c05_while.dioc",
                     "corpus/c06_scope3.dioc", "corpus/c11_scope_if.dioc"}) {
    DiocPtr p = parse_ann(read_file(fixture(name)));
    auto v = check_well_annotated_dpoc(proj(p, {}));
    CHECK_MESSAGE(v.empty(), name);
  }
}

TEST_CASE("duplicate communication indexes are flagged") {
  Network n;
  n.roles[Role{"a"}].proc = p_send(Operation{"m"}, Expr::literal(Value::integer(1)),
                                   Role{"b"}, IndexTag{1});
  n.roles[Role{"c"}].proc = p_send(Operation{"m"}, Expr::literal(Value::integer(2)),
                                   Role{"b"}, IndexTag{1});
  n.roles[Role{"b"}].proc =
      p_seq(p_recv(Operation{"m"}, "x", Role{"a"}, IndexTag{2}),
            p_recv(Operation{"m"}, "y", Role{"c"}, IndexTag{3}));
  auto v = check_well_annotated_dpoc(n);
  bool c1 = false;
  for (auto& w : v) c1 |= (w.condition == "C1");
  CHECK(c1);
}

TEST_CASE("incomparable same-signature sends are flagged") {
  Network n;
  n.roles[Role{"a"}].proc =
      p_par(p_send(Operation{"m"}, Expr::literal(Value::integer(1)), Role{"b"},
                   IndexTag{1}),
            p_send(Operation{"m"}, Expr::literal(Value::integer(2)), Role{"b"},
                   IndexTag{2}));
  n.roles[Role{"b"}].proc =
      p_seq(p_recv(Operation{"m"}, "x", Role{"a"}, IndexTag{3}),
            p_recv(Operation{"m"}, "y", Role{"a"}, IndexTag{4}));
  auto v = check_well_annotated_dpoc(n);
  CHECK_FALSE(v.empty());
}
