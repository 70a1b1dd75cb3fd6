#include "doctest.h"

#include "dioc/projection.hpp"
#include "dioc/parser.hpp"
#include "support/util.hpp"

using namespace dioc;
using namespace dioc::testsupport;

static DiocPtr parse_ann(const std::string& s) {
  auto r = parse_dioc(s);
  REQUIRE_MESSAGE(r.ok(), s);
  return annotate(r.program);
}

TEST_CASE("interaction projects to matching send and receive") {
  DiocPtr p = parse_ann("m : a( 1 + 1 ) -> b( v )");
  Network n = proj(p, {});
  REQUIRE(n.roles.size() == 2);
  auto& pa = std::get<PSend>(n.roles[Role{"a"}].proc->node);
  CHECK(pa.op.name == "m");
  CHECK(pa.to == Role{"b"});
  auto& pb = std::get<PRecv>(n.roles[Role{"b"}].proc->node);
  CHECK(pb.op.name == "m");
  CHECK(pb.var == "v");
  CHECK(pb.from == Role{"a"});
}

TEST_CASE("uninvolved constructs project to one") {
  DiocPtr p = parse_ann("x@a = 1; m : b( 1 ) -> c( v )");
  Network n = proj(p, {});
  auto& seq = std::get<PSeq>(n.roles[Role{"c"}].proc->node);
  CHECK(std::holds_alternative<POne>(seq.left->node));
}

TEST_CASE("conditional coordinator broadcasts inside both branches") {
  DiocPtr p = parse_ann(
      "if ( x )@a { m : a( 1 ) -> b( v ) } else { n : b( 2 ) -> a( w ) }");
  Network n = proj(p, {});
  std::string a = pretty_dpoc(n.roles[Role{"a"}].proc);
  CHECK(a.find("o*_1 : true to b") != std::string::npos);
  CHECK(a.find("o*_1 : false to b") != std::string::npos);
  std::string b = pretty_dpoc(n.roles[Role{"b"}].proc);
  CHECK(b.find("o*_1 : x_1 from a") != std::string::npos);
  auto& seq = std::get<PSeq>(n.roles[Role{"b"}].proc->node);
  auto& bi = std::get<PIf>(seq.right->node);
  CHECK(expr_display(bi.guard) == "x_1");
}

TEST_CASE("branch broadcasts carry branch-tagged indexes") {
  DiocPtr p = parse_ann("if ( x )@a { m : a( 1 ) -> b( v ) }");
  int counter = max_index(p) + 1;
  AuxScheme sc = make_aux_scheme(p, counter);
  // one slot for participant b of conditional 1
  auto& slot = sc.at(1, Role{"b"});
  CHECK(slot.first >= 3);
  Network n = proj(p, {});
  auto& pa = std::get<PIf>(n.roles[Role{"a"}].proc->node);
  auto& then_seq = std::get<PSeq>(pa.then_branch->node);
  REQUIRE(std::holds_alternative<PSend>(then_seq.left->node));
  REQUIRE(then_seq.left->index.has_value());
  CHECK(then_seq.left->index->base == slot.first);
  CHECK(then_seq.left->index->branch == true);
}

TEST_CASE("iteration protocol at coordinator and participant") {
  DiocPtr p = parse_ann("while ( x )@a { k : a( 3 ) -> b( u ) }");
  Network n = proj(p, {});
  std::string a = pretty_dpoc(n.roles[Role{"a"}].proc);
  // guard broadcast, body, ack receive inside the loop; exit broadcast after
  CHECK(a.find("o*_1 : true to b") != std::string::npos);
  CHECK(a.find("o*_1 : _ from b") != std::string::npos);
  CHECK(a.find("o*_1 : false to b") != std::string::npos);
  std::string b = pretty_dpoc(n.roles[Role{"b"}].proc);
  CHECK(b.find("o*_1 : \"ok\" to a") != std::string::npos);
  auto& seq = std::get<PSeq>(n.roles[Role{"b"}].proc->node);
  auto& w = std::get<PWhile>(seq.right->node);
  CHECK(expr_display(w.guard) == "x_1");
}

TEST_CASE("aux scheme is deterministic and preorder-allocated") {
  DiocPtr p = parse_ann(
      "if ( x )@a { m : a( 1 ) -> b( v ) }; while ( y )@a { k : a( 1 ) -> c( u ) }");
  int c1 = max_index(p) + 1, c2 = max_index(p) + 1;
  AuxScheme s1 = make_aux_scheme(p, c1);
  AuxScheme s2 = make_aux_scheme(p, c2);
  CHECK(c1 == c2);
  CHECK(s1.slots == s2.slots);
  // if 1: one index for b; while 3: two for c
  int if_idx = s1.at(1, Role{"b"}).first;
  auto wh = s1.at(3, Role{"c"});
  CHECK(if_idx < wh.first);
  CHECK(wh.first < wh.second);
}

TEST_CASE("scope projects to lead and plain forms") {
  DiocPtr p = parse_ann("scope @a { m : a( 1 ) -> b( v ) }");
  Network n = proj(p, {});
  auto& lead = std::get<PScopeLead>(n.roles[Role{"a"}].proc->node);
  CHECK(lead.coordinator == Role{"a"});
  CHECK((lead.roles == std::set<Role>{Role{"a"}, Role{"b"}}));
  auto& plain = std::get<PScopePlain>(n.roles[Role{"b"}].proc->node);
  CHECK(plain.coordinator == Role{"a"});
  CHECK(std::holds_alternative<PRecv>(plain.body->node));
}

TEST_CASE("state slices follow the roles") {
  GlobalState g;
  g[Role{"a"}]["x"] = Value::integer(1);
  g[Role{"b"}]["y"] = Value::integer(2);
  DiocPtr p = parse_ann("m : a( x ) -> b( v )");
  Network n = proj(p, g);
  CHECK(n.roles[Role{"a"}].local.at("x") == Value::integer(1));
  CHECK(n.roles[Role{"a"}].local.count("y") == 0);
  CHECK(n.roles[Role{"b"}].local.at("y") == Value::integer(2));
}

TEST_CASE("projection matches the frozen buying listings") {
  DiocPtr p = parse_ann(read_file(fixture("buying.dioc")));
  Network n = proj(p, {});
  for (auto* r : {"buyer", "seller", "bank"}) {
    std::string got = pretty_dpoc(n.roles[Role{r}].proc);
    std::string want = read_file(fixture(std::string("golden/buying.") + r + ".dpoc"));
    while (!want.empty() && want.back() == '\n') want.pop_back();
    CHECK_MESSAGE(got == want, r);
  }
}

TEST_CASE("fresh_indexes prefixes every operation with the scope index") {
  auto r = parse_update("m : a( 1 ) -> b( v ); n : b( v ) -> a( w )");
  REQUIRE(r.ok());
  int counter = 30;
  DiocPtr f = fresh_indexes(r.program, 6, counter);
  CHECK(counter > 30);
  CHECK(is_well_annotated(f));
  auto& s = std::get<DSeq>(f->node);
  CHECK(std::get<DInteraction>(s.left->node).op.display() == "6.m");
  CHECK(std::get<DInteraction>(s.right->node).op.display() == "6.n");
  CHECK(*s.left->index >= 30);
}
