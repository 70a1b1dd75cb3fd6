#include "doctest.h"

#include "dioc/host.hpp"
#include "support/util.hpp"

using namespace dioc;
using namespace dioc::testsupport;

TEST_CASE("arithmetic and comparison evaluation") {
  LocalState st{{"x", Value::integer(6)}};
  HostEnv host;
  ExprPtr e = Expr::binary("+", Expr::var("x"),
                           Expr::binary("*", Expr::literal(Value::integer(2)),
                                        Expr::literal(Value::integer(5))));
  CHECK(eval_expr(e, st, host, nullptr) == Value::integer(16));
  CHECK(eval_expr(Expr::binary("<", Expr::var("x"),
                               Expr::literal(Value::integer(7))),
                  st, host, nullptr) == Value::boolean(true));
  CHECK(eval_expr(Expr::unary("not", Expr::literal(Value::boolean(false))), st,
                  host, nullptr) == Value::boolean(true));
}

TEST_CASE("errors absorb") {
  LocalState st;
  HostEnv host;
  // unbound variable evaluates to error and propagates
  ExprPtr e = Expr::binary("+", Expr::var("nope"),
                           Expr::literal(Value::integer(1)));
  CHECK(eval_expr(e, st, host, nullptr).is_error());
  ExprPtr dz = Expr::binary("/", Expr::literal(Value::integer(1)),
                            Expr::literal(Value::integer(0)));
  CHECK(eval_expr(dz, st, host, nullptr).is_error());
  // type confusion
  ExprPtr tc = Expr::binary("+", Expr::literal(Value::boolean(true)),
                            Expr::literal(Value::integer(1)));
  CHECK(eval_expr(tc, st, host, nullptr).is_error());
}

TEST_CASE("getInput pops the role queue") {
  LocalState st;
  HostEnv host;
  InputQueue q{Value::str("book"), Value::boolean(false)};
  ExprPtr e = Expr::call("getInput", {});
  CHECK(eval_expr(e, st, host, &q) == Value::str("book"));
  CHECK(q.size() == 1);
  CHECK(eval_expr(e, st, host, &q) == Value::boolean(false));
  CHECK(eval_expr(e, st, host, &q).is_error());  // exhausted
  CHECK(eval_expr(e, st, host, nullptr).is_error());
}

TEST_CASE("host functions from json") {
  HostEnv h = host_env_from_json(read_file(fixture("host.json")));
  CHECK(h.functions.at("getPrice")({Value::str("pen")}) == Value::integer(100));
  CHECK(h.functions.at("payDesc")({Value::integer(90)}) ==
        Value::str("pay:90"));
  CHECK(h.functions.at("isValid")({Value::str("c")}) == Value::boolean(true));
  // unknown host function
  LocalState st;
  CHECK((eval_expr(Expr::call("mystery", {}), st, h, nullptr).is_error()));
  CHECK_THROWS(host_env_from_json("{\"functions\": {\"f\": {\"kind\": \"wat\"}}}"));
}

TEST_CASE("input queues from json") {
  InputQueues qs = input_queues_from_json(read_file(fixture("inputs.json")));
  REQUIRE(qs.count(Role{"buyer"}));
  CHECK(qs[Role{"buyer"}].front() == Value::str("book"));
  CHECK(qs[Role{"buyer"}].size() == 7);
}
