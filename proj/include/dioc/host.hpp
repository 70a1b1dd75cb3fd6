#pragma once

#include <deque>
#include <functional>
#include <map>
#include <string>

#include "dioc/ast.hpp"

namespace dioc {

using InputQueue = std::deque<Value>;
using InputQueues = std::map<Role, InputQueue>;

/// Named deterministic host functions. getInput is not listed here: it is
/// resolved against the caller role's input queue.
struct HostEnv {
  std::map<std::string, std::function<Value(const std::vector<Value>&)>>
      functions;
};

/// Total evaluation; failures yield Value::error(). queue may be null (then
/// getInput yields Error).
Value eval_expr(const ExprPtr& e, const LocalState& local, const HostEnv& host,
                InputQueue* queue);

/// Builds a HostEnv from a JSON spec:
///   {"functions": {"name": {"kind": "const"|"identity"|"mult"|"concat",
///                           "value": ..., "factor": ...}}}
/// Throws std::runtime_error on malformed input.
HostEnv host_env_from_json(const std::string& json_text);

/// {"role": [values...]} -> queues.
InputQueues input_queues_from_json(const std::string& json_text);

}  // namespace dioc
