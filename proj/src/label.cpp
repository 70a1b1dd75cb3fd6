#include "dioc/label.hpp"

#include "json.hpp"

namespace dioc {

namespace {

using nlohmann::json;

json value_to_json(const Value& v) {
  if (v.is_null()) return nullptr;
  if (v.is_error()) return "<error>";
  if (v.is_int()) return v.as_int();
  if (v.is_bool()) return v.as_bool();
  return v.as_str();
}

}  // namespace

std::string Label::key() const {
  switch (kind) {
    case Kind::Tau:
      return "tau";
    case Kind::Tick:
      return "tick";
    case Kind::Interaction:
      return "i(" + op.display() + "," + from.name + "," + value.display() +
             "," + to.name + "," + var + ")";
    case Kind::HoInteraction:
      return "ho(" + op.display() + "," + from.name + "," + to.name + ")";
    case Kind::Update:
      return "up(" + update_name + ")";
    case Kind::NoUp:
      return "noup";
    case Kind::UpdatesChanged:
      return "chg(" + update_name + ")";
    case Kind::Send:
      return "send(" + op.display() + "," + from.name + "," + value.display() +
             "," + to.name + ")";
    case Kind::Recv:
      return "recv(" + op.display() + "," + from.name + "," + to.name + "," +
             var + ")";
    case Kind::SendHo:
      return "sendho(" + op.display() + "," + from.name + "," + to.name + ")";
  }
  return "?";
}

std::string Label::json() const {
  ::nlohmann::json j;
  switch (kind) {
    case Kind::Tau:
      j["kind"] = "tau";
      break;
    case Kind::Tick:
      j["kind"] = "tick";
      break;
    case Kind::Interaction:
      j["kind"] = "interaction";
      j["op"] = op.display();
      j["from"] = from.name;
      j["to"] = to.name;
      j["value"] = value_to_json(value);
      j["var"] = var;
      break;
    case Kind::HoInteraction:
      j["kind"] = "ho-interaction";
      j["op"] = op.display();
      j["from"] = from.name;
      j["to"] = to.name;
      break;
    case Kind::Update:
      j["kind"] = "update";
      j["name"] = update_name;
      break;
    case Kind::NoUp:
      j["kind"] = "noup";
      break;
    case Kind::UpdatesChanged:
      j["kind"] = "updates-changed";
      j["updates"] = update_name;
      break;
    case Kind::Send:
      j["kind"] = "send";
      j["op"] = op.display();
      j["at"] = from.name;
      j["to"] = to.name;
      j["value"] = value_to_json(value);
      break;
    case Kind::Recv:
      j["kind"] = "recv";
      j["op"] = op.display();
      j["at"] = to.name;
      j["from"] = from.name;
      j["var"] = var;
      break;
    case Kind::SendHo:
      j["kind"] = "sendho";
      j["op"] = op.display();
      j["at"] = from.name;
      j["to"] = to.name;
      break;
  }
  return j.dump();
}

bool label_is_weak_visible(const Label& l) {
  switch (l.kind) {
    case Label::Kind::Tau:
    case Label::Kind::Send:
    case Label::Kind::Recv:
    case Label::Kind::SendHo:
      return false;
    case Label::Kind::Interaction:
    case Label::Kind::HoInteraction:
      return !l.op.is_private();
    default:
      return true;
  }
}

Label label_weaken(const Label& l) {
  Label w = l;
  w.op = l.op.stripped();
  return w;
}

}  // namespace dioc
