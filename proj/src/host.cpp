#include "dioc/host.hpp"

#include <stdexcept>

#include "json.hpp"

namespace dioc {

namespace {

using nlohmann::json;

Value value_from_json(const json& j) {
  if (j.is_null()) return Value::null();
  if (j.is_boolean()) return Value::boolean(j.get<bool>());
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  if (j.is_string()) return Value::str(j.get<std::string>());
  throw std::runtime_error("unsupported JSON value: " + j.dump());
}

std::string display_raw(const Value& v) {
  if (v.is_str()) return v.as_str();
  return v.display();
}

Value apply_binary(const std::string& op, const Value& l, const Value& r) {
  if (l.is_error() || r.is_error()) return Value::error();
  if (op == "==") return Value::boolean(l == r);
  if (op == "!=") return Value::boolean(!(l == r));
  if (op == "and" || op == "or") {
    if (!l.is_bool() || !r.is_bool()) return Value::error();
    return Value::boolean(op == "and" ? (l.as_bool() && r.as_bool())
                                      : (l.as_bool() || r.as_bool()));
  }
  if (op == "+") {
    if (l.is_int() && r.is_int()) return Value::integer(l.as_int() + r.as_int());
    if (l.is_str() && r.is_str()) return Value::str(l.as_str() + r.as_str());
    return Value::error();
  }
  if (op == "-" || op == "*" || op == "/") {
    if (!l.is_int() || !r.is_int()) return Value::error();
    if (op == "-") return Value::integer(l.as_int() - r.as_int());
    if (op == "*") return Value::integer(l.as_int() * r.as_int());
    if (r.as_int() == 0) return Value::error();
    return Value::integer(l.as_int() / r.as_int());
  }
  // comparisons
  if (l.is_int() && r.is_int()) {
    auto a = l.as_int(), b = r.as_int();
    if (op == "<") return Value::boolean(a < b);
    if (op == "<=") return Value::boolean(a <= b);
    if (op == ">") return Value::boolean(a > b);
    if (op == ">=") return Value::boolean(a >= b);
  }
  if (l.is_str() && r.is_str()) {
    const auto &a = l.as_str(), &b = r.as_str();
    if (op == "<") return Value::boolean(a < b);
    if (op == "<=") return Value::boolean(a <= b);
    if (op == ">") return Value::boolean(a > b);
    if (op == ">=") return Value::boolean(a >= b);
  }
  return Value::error();
}

}  // namespace

Value eval_expr(const ExprPtr& e, const LocalState& local, const HostEnv& host,
                InputQueue* queue) {
  switch (e->kind) {
    case Expr::Kind::Lit:
      return e->lit;
    case Expr::Kind::Var: {
      auto it = local.find(e->name);
      return it == local.end() ? Value::error() : it->second;
    }
    case Expr::Kind::Unary: {
      Value v = eval_expr(e->args[0], local, host, queue);
      if (v.is_error()) return v;
      if (e->op == "not")
        return v.is_bool() ? Value::boolean(!v.as_bool()) : Value::error();
      if (e->op == "neg")
        return v.is_int() ? Value::integer(-v.as_int()) : Value::error();
      return Value::error();
    }
    case Expr::Kind::Binary: {
      Value l = eval_expr(e->args[0], local, host, queue);
      Value r = eval_expr(e->args[1], local, host, queue);
      return apply_binary(e->op, l, r);
    }
    case Expr::Kind::Call: {
      std::vector<Value> args;
      bool bad = false;
      for (auto& a : e->args) {
        args.push_back(eval_expr(a, local, host, queue));
        if (args.back().is_error()) bad = true;
      }
      if (e->name == "getInput") {
        if (!queue || queue->empty()) return Value::error();
        Value v = queue->front();
        queue->pop_front();
        return v;
      }
      if (bad) return Value::error();
      auto it = host.functions.find(e->name);
      if (it == host.functions.end()) return Value::error();
      return it->second(args);
    }
  }
  return Value::error();
}

HostEnv host_env_from_json(const std::string& json_text) {
  HostEnv env;
  json j = json::parse(json_text);
  if (!j.is_object()) throw std::runtime_error("host spec must be an object");
  const json& fns = j.contains("functions") ? j.at("functions") : j;
  for (auto& [name, spec] : fns.items()) {
    if (!spec.is_object() || !spec.contains("kind"))
      throw std::runtime_error("host function '" + name + "': missing kind");
    std::string kind = spec.at("kind").get<std::string>();
    if (kind == "const") {
      Value v = value_from_json(spec.at("value"));
      env.functions[name] = [v](const std::vector<Value>&) { return v; };
    } else if (kind == "identity") {
      env.functions[name] = [](const std::vector<Value>& a) {
        return a.empty() ? Value::error() : a[0];
      };
    } else if (kind == "mult") {
      std::int64_t f = spec.at("factor").get<std::int64_t>();
      env.functions[name] = [f](const std::vector<Value>& a) {
        if (a.empty() || !a[0].is_int()) return Value::error();
        return Value::integer(a[0].as_int() * f);
      };
    } else if (kind == "concat") {
      std::string prefix =
          spec.contains("prefix") ? spec.at("prefix").get<std::string>() : "";
      env.functions[name] = [prefix](const std::vector<Value>& a) {
        std::string out = prefix;
        for (auto& v : a) out += display_raw(v);
        return Value::str(out);
      };
    } else {
      throw std::runtime_error("host function '" + name + "': unknown kind '" +
                               kind + "'");
    }
  }
  return env;
}

InputQueues input_queues_from_json(const std::string& json_text) {
  InputQueues qs;
  json j = json::parse(json_text);
  if (!j.is_object()) throw std::runtime_error("inputs spec must be an object");
  for (auto& [role, arr] : j.items()) {
    if (!arr.is_array())
      throw std::runtime_error("inputs for role '" + role +
                               "' must be an array");
    InputQueue q;
    for (auto& v : arr) q.push_back(value_from_json(v));
    qs[Role{role}] = std::move(q);
  }
  return qs;
}

}  // namespace dioc
