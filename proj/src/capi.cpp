#include "dioc/dioc_c.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dioc/connectedness.hpp"
#include "dioc/parser.hpp"
#include "dioc/projection.hpp"
#include "dioc/verify.hpp"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

struct dioc_ctx {
  dioc::DiocPtr program;  // annotated
  std::vector<dioc::Diagnostic> parse_diags;
  dioc::UpdateSet updates;
  dioc::HostEnv host;
  dioc::InputQueues inputs;
  dioc::Schedule schedule;
  std::vector<int> schedule_script;  // scripted choices from the schedule file

  int max_steps = 64;
  int loop_bound = 2;
  long state_budget = 2000000;
  unsigned seed = 0;
  dioc::Policy::Kind policy = dioc::Policy::Kind::FirstEnabled;
  std::vector<int> script;
  bool json_out = false;
  bool weak = false;
  bool force = false;

  std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int fail(dioc_ctx* ctx, int code, std::string msg) {
  ctx->last_error = std::move(msg);
  return code;
}

bool read_file(const char* path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

dioc::Policy make_policy(const dioc_ctx* ctx) {
  dioc::Policy p;
  p.kind = ctx->policy;
  p.seed = ctx->seed;
  p.script = ctx->script.empty() ? ctx->schedule_script : ctx->script;
  if (!p.script.empty() && p.kind == dioc::Policy::Kind::FirstEnabled)
    p.kind = dioc::Policy::Kind::Scripted;
  return p;
}

int require_program(dioc_ctx* ctx) {
  if (!ctx->program) return fail(ctx, DIOC_IO_ERROR, "no program loaded");
  return DIOC_OK;
}

}  // namespace

extern "C" {

dioc_ctx* dioc_ctx_new(void) { return new dioc_ctx; }

void dioc_ctx_free(dioc_ctx* ctx) { delete ctx; }

const char* dioc_last_error(const dioc_ctx* ctx) {
  return ctx->last_error.c_str();
}

void dioc_string_free(char* s) { std::free(s); }

int dioc_load_program_text(dioc_ctx* ctx, const char* text) {
  auto r = dioc::parse_dioc(text);
  ctx->parse_diags = r.diagnostics;
  if (!r.ok()) {
    std::string msg;
    for (auto& d : r.diagnostics) msg += d.display() + "\n";
    return fail(ctx, DIOC_PARSE_ERROR, msg);
  }
  ctx->program = dioc::annotate(r.program);
  return DIOC_OK;
}

int dioc_load_program_file(dioc_ctx* ctx, const char* path) {
  std::string text;
  if (!read_file(path, text))
    return fail(ctx, DIOC_IO_ERROR, std::string("cannot read ") + path);
  return dioc_load_program_text(ctx, text.c_str());
}

int dioc_load_updates_dir(dioc_ctx* ctx, const char* dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    return fail(ctx, DIOC_IO_ERROR, std::string("not a directory: ") + dir);
  ctx->updates.clear();
  std::vector<fs::path> files;
  for (auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".upd") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (auto& f : files) {
    std::string text;
    if (!read_file(f.c_str(), text))
      return fail(ctx, DIOC_IO_ERROR, "cannot read " + f.string());
    auto r = dioc::parse_update(text);
    if (!r.ok()) {
      std::string msg = f.string() + ": ";
      for (auto& d : r.diagnostics) msg += d.display() + "\n";
      return fail(ctx, DIOC_PARSE_ERROR, msg);
    }
    dioc::UpdateDef u;
    u.name = f.stem().string();
    u.body = r.program;
    u.connected = dioc::check_connected(dioc::annotate(r.program)).connected;
    ctx->updates.push_back(std::move(u));
  }
  return DIOC_OK;
}

int dioc_load_host_file(dioc_ctx* ctx, const char* path) {
  std::string text;
  if (!read_file(path, text))
    return fail(ctx, DIOC_IO_ERROR, std::string("cannot read ") + path);
  try {
    ctx->host = dioc::host_env_from_json(text);
  } catch (const std::exception& e) {
    return fail(ctx, DIOC_IO_ERROR, e.what());
  }
  return DIOC_OK;
}

int dioc_load_inputs_file(dioc_ctx* ctx, const char* path) {
  std::string text;
  if (!read_file(path, text))
    return fail(ctx, DIOC_IO_ERROR, std::string("cannot read ") + path);
  try {
    ctx->inputs = dioc::input_queues_from_json(text);
  } catch (const std::exception& e) {
    return fail(ctx, DIOC_IO_ERROR, e.what());
  }
  return DIOC_OK;
}

int dioc_load_schedule_file(dioc_ctx* ctx, const char* path) {
  std::string text;
  if (!read_file(path, text))
    return fail(ctx, DIOC_IO_ERROR, std::string("cannot read ") + path);
  try {
    json j = json::parse(text);
    dioc::Schedule sched;
    int prev = -1;
    for (auto& c : j.value("changes", json::array())) {
      dioc::ScheduleChange ch;
      ch.after_weak_label = c.at("afterWeakLabel").get<int>();
      if (ch.after_weak_label <= prev)
        return fail(ctx, DIOC_BAD_SCHEDULE,
                    "afterWeakLabel values must be strictly increasing");
      prev = ch.after_weak_label;
      for (auto& name : c.at("setUpdates")) {
        std::string want = name.get<std::string>();
        if (want.size() > 4 && want.substr(want.size() - 4) == ".upd")
          want = want.substr(0, want.size() - 4);
        bool found = false;
        for (auto& u : ctx->updates)
          if (u.name == want) {
            ch.new_updates.push_back(u);
            found = true;
          }
        if (!found)
          return fail(ctx, DIOC_BAD_SCHEDULE, "unknown update: " + want);
      }
      sched.changes.push_back(std::move(ch));
    }
    std::vector<int> script;
    for (auto& s : j.value("script", json::array())) {
      if (s.is_number_integer())
        script.push_back(s.get<int>());
      else
        script.push_back(s.at("choiceIndex").get<int>());
    }
    ctx->schedule = std::move(sched);
    ctx->schedule_script = std::move(script);
  } catch (const json::exception& e) {
    return fail(ctx, DIOC_BAD_SCHEDULE, e.what());
  }
  return DIOC_OK;
}

int dioc_set_option(dioc_ctx* ctx, const char* key, const char* value) {
  std::string k = key, v = value;
  try {
    if (k == "max-steps") {
      ctx->max_steps = std::stoi(v);
      if (ctx->max_steps < 1) throw std::runtime_error("max-steps must be >=1");
    } else if (k == "loop-bound") {
      ctx->loop_bound = std::stoi(v);
      if (ctx->loop_bound < 1)
        throw std::runtime_error("loop-bound must be >=1");
    } else if (k == "state-budget") {
      ctx->state_budget = std::stol(v);
    } else if (k == "seed") {
      ctx->seed = static_cast<unsigned>(std::stoul(v));
      ctx->policy = dioc::Policy::Kind::Seeded;
    } else if (k == "policy") {
      if (v == "first")
        ctx->policy = dioc::Policy::Kind::FirstEnabled;
      else if (v == "seeded")
        ctx->policy = dioc::Policy::Kind::Seeded;
      else if (v == "scripted")
        ctx->policy = dioc::Policy::Kind::Scripted;
      else
        throw std::runtime_error("unknown policy: " + v);
    } else if (k == "script") {
      ctx->script.clear();
      std::istringstream ss(v);
      std::string tok;
      while (std::getline(ss, tok, ','))
        if (!tok.empty()) ctx->script.push_back(std::stoi(tok));
      ctx->policy = dioc::Policy::Kind::Scripted;
    } else if (k == "json") {
      ctx->json_out = v == "1" || v == "true";
    } else if (k == "weak") {
      ctx->weak = v == "1" || v == "true";
    } else if (k == "force") {
      ctx->force = v == "1" || v == "true";
    } else {
      throw std::runtime_error("unknown option: " + k);
    }
  } catch (const std::exception& e) {
    return fail(ctx, DIOC_BAD_SCHEDULE, e.what());
  }
  return DIOC_OK;
}

int dioc_roles(dioc_ctx* ctx, char** out) {
  if (int rc = require_program(ctx)) return rc;
  std::string s;
  for (auto& r : dioc::roles_of(ctx->program))
    s += (s.empty() ? "" : ",") + r.name;
  *out = dup_string(s);
  return DIOC_OK;
}

int dioc_check(dioc_ctx* ctx, char** report) {
  if (int rc = require_program(ctx)) return rc;
  auto rep = dioc::check_connected(ctx->program);
  if (ctx->json_out) {
    json j;
    j["connected"] = rep.connected;
    j["violations"] = json::array();
    for (auto& d : rep.violations) {
      json v;
      v["code"] = d.code;
      v["message"] = d.message;
      v["line"] = d.span.line;
      v["column"] = d.span.column;
      j["violations"].push_back(v);
    }
    *report = dup_string(j.dump());
  } else {
    std::string s = rep.connected ? "connected\n" : "not connected\n";
    for (auto& d : rep.violations) s += d.display() + "\n";
    *report = dup_string(s);
  }
  return rep.connected ? DIOC_OK : DIOC_FAIL;
}

int dioc_project(dioc_ctx* ctx, const char* role, char** out) {
  if (int rc = require_program(ctx)) return rc;
  if (!ctx->force && !dioc::check_connected(ctx->program).connected)
    return fail(ctx, DIOC_FAIL, "program is not connected (use force=1)");
  auto roles = dioc::roles_of(ctx->program);
  if (!roles.count(dioc::Role{role}))
    return fail(ctx, DIOC_UNKNOWN_ROLE, std::string("unknown role: ") + role);
  dioc::Network net = dioc::proj(ctx->program, {});
  *out = dup_string(dioc::pretty_dpoc(net.roles.at(dioc::Role{role}).proc));
  return DIOC_OK;
}

int dioc_run(dioc_ctx* ctx, const char* level, char** trace) {
  if (int rc = require_program(ctx)) return rc;
  std::string lv = level;
  if (lv != "dioc" && lv != "dpoc")
    return fail(ctx, DIOC_BAD_SCHEDULE, "level must be dioc or dpoc");
  dioc::Policy pol = make_policy(ctx);
  std::vector<dioc::Label> labels;
  std::string err;
  if (lv == "dioc") {
    auto sys = dioc::make_dioc_system(ctx->program, {}, ctx->updates,
                                      ctx->inputs);
    auto res = dioc::dioc_trace(sys, ctx->host, pol, ctx->schedule,
                                ctx->max_steps);
    labels = std::move(res.labels);
    err = res.error;
  } else {
    int counter = dioc::max_index(ctx->program) + 1;
    dioc::Network net = dioc::proj(ctx->program, {}, counter);
    auto sys = dioc::make_dpoc_system(net, ctx->updates, ctx->inputs, counter);
    auto res = dioc::dpoc_trace(sys, ctx->host, pol, ctx->schedule,
                                ctx->max_steps);
    labels = std::move(res.labels);
    err = res.error;
  }
  if (!err.empty()) return fail(ctx, DIOC_BAD_SCHEDULE, err);
  if (ctx->weak) labels = dioc::weaken(labels);
  std::string s;
  for (auto& l : labels) s += l.json() + "\n";
  *trace = dup_string(s);
  return DIOC_OK;
}

namespace {

json equiv_report(const dioc::EquivResult& r, const dioc_ctx* ctx) {
  json j;
  j["verdict"] = !r.error.empty()        ? "error"
                 : r.equivalent          ? "equivalent"
                                         : "counterexample";
  j["bound"] = ctx->max_steps;
  j["loopBound"] = ctx->loop_bound;
  j["states"] = r.dioc_states + r.dpoc_states;
  j["truncated"] = r.truncated;
  if (!r.error.empty()) j["error"] = r.error;
  if (!r.equivalent && r.error.empty()) {
    j["counterexample"] = r.counterexample;
    j["side"] = r.side;
  }
  return j;
}

}  // namespace

int dioc_equiv(dioc_ctx* ctx, char** report) {
  if (int rc = require_program(ctx)) return rc;
  auto sys = dioc::make_dioc_system(ctx->program, {}, ctx->updates,
                                    ctx->inputs);
  dioc::ExploreOpts opts{ctx->max_steps, ctx->loop_bound, ctx->state_budget};
  auto res = dioc::check_equiv(sys, ctx->host, ctx->schedule, opts);
  *report = dup_string(equiv_report(res, ctx).dump());
  if (res.error == "state budget exceeded") return DIOC_BUDGET_EXCEEDED;
  if (!res.error.empty()) return fail(ctx, DIOC_FAIL, res.error);
  return res.equivalent ? DIOC_OK : DIOC_FAIL;
}

int dioc_props(dioc_ctx* ctx, char** report) {
  if (int rc = require_program(ctx)) return rc;
  int counter = dioc::max_index(ctx->program) + 1;
  dioc::Network net = dioc::proj(ctx->program, {}, counter);
  auto sys = dioc::make_dpoc_system(net, ctx->updates, ctx->inputs, counter);
  dioc::ExploreOpts opts{ctx->max_steps, ctx->loop_bound, ctx->state_budget};
  auto res = dioc::check_freedom(sys, ctx->host, opts);
  json j;
  j["deadlock"] = res.deadlock_free ? "pass" : "fail";
  j["race"] = res.race_free ? "pass" : "fail";
  j["orphan"] = res.orphan_free ? "pass" : "fail";
  j["states"] = res.states;
  j["partial"] = res.partial;
  if (!res.deadlock_free) j["deadlockWitness"] = res.deadlock_witness;
  if (!res.race_free) j["raceWitness"] = res.race_witness;
  if (!res.orphan_free) j["orphanWitness"] = res.orphan_witness;
  *report = dup_string(j.dump());
  bool ok = res.deadlock_free && res.race_free && res.orphan_free;
  return ok ? DIOC_OK : DIOC_FAIL;
}

}  // extern "C"
