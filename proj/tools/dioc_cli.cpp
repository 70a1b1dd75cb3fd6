#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dioc/dioc_c.h"

namespace {

struct Common {
  std::string program;
  std::string updates;
  std::string schedule;
  std::string host;
  std::string inputs;
  std::string script_file;
  unsigned seed = 0;
  bool seeded = false;
  bool explore = false;
  int max_steps = 64;
  int loop_bound = 2;
  bool json = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("program", c.program, "DIOC program file")->required();
  cmd->add_option("--updates", c.updates, "directory of .upd files");
  cmd->add_option("--schedule", c.schedule, "schedule JSON file");
  cmd->add_option("--host", c.host, "host function table JSON");
  cmd->add_option("--inputs", c.inputs, "per-role input queues JSON");
  cmd->add_option("--seed", c.seed, "seeded transition choice")
      ->each([&c](const std::string&) { c.seeded = true; });
  cmd->add_option("--script", c.script_file, "scripted choice list file");
  cmd->add_flag("--explore", c.explore, "exhaustive exploration");
  cmd->add_option("--max-steps", c.max_steps, "step / weak-label bound")
      ->default_val(64);
  cmd->add_option("--loop-bound", c.loop_bound, "while unfoldings per loop")
      ->default_val(2);
  cmd->add_flag("--json", c.json, "JSON output");
}

int die(dioc_ctx* ctx, int code) {
  std::string msg = dioc_last_error(ctx);
  if (!msg.empty()) std::cerr << msg << (msg.back() == '\n' ? "" : "\n");
  dioc_ctx_free(ctx);
  return code;
}

int setup(dioc_ctx* ctx, const Common& c) {
  int rc;
  if ((rc = dioc_load_program_file(ctx, c.program.c_str()))) return rc;
  if (!c.updates.empty() &&
      (rc = dioc_load_updates_dir(ctx, c.updates.c_str())))
    return rc;
  if (!c.host.empty() && (rc = dioc_load_host_file(ctx, c.host.c_str())))
    return rc;
  if (!c.inputs.empty() && (rc = dioc_load_inputs_file(ctx, c.inputs.c_str())))
    return rc;
  if (!c.schedule.empty() &&
      (rc = dioc_load_schedule_file(ctx, c.schedule.c_str())))
    return rc;
  auto set = [&](const char* k, const std::string& v) {
    return dioc_set_option(ctx, k, v.c_str());
  };
  if ((rc = set("max-steps", std::to_string(c.max_steps)))) return rc;
  if ((rc = set("loop-bound", std::to_string(c.loop_bound)))) return rc;
  if (c.json && (rc = set("json", "1"))) return rc;
  if (c.seeded && (rc = set("seed", std::to_string(c.seed)))) return rc;
  if (!c.script_file.empty()) {
    std::ifstream in(c.script_file);
    if (!in) {
      std::cerr << "cannot read " << c.script_file << "\n";
      return DIOC_IO_ERROR;
    }
    std::string choices, tok;
    while (in >> tok) choices += (choices.empty() ? "" : ",") + tok;
    if ((rc = set("script", choices))) return rc;
  }
  return DIOC_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"choreography compiler and simulator"};
  app.require_subcommand(1);

  Common c_check, c_project, c_run, c_equiv, c_props;
  std::string role, level = "dioc", out_dir = ".";
  bool force = false, weak = false;

  auto* cmd_check = app.add_subcommand("check", "connectedness check");
  add_common(cmd_check, c_check);

  auto* cmd_project = app.add_subcommand("project", "endpoint projection");
  add_common(cmd_project, c_project);
  cmd_project->add_option("--role", role, "project a single role to stdout");
  cmd_project->add_option("--out", out_dir, "output directory")
      ->default_val(".");
  cmd_project->add_flag("--force", force, "project even if not connected");

  auto* cmd_run = app.add_subcommand("run", "execute one trace");
  add_common(cmd_run, c_run);
  cmd_run->add_option("--level", level, "dioc | dpoc")->default_val("dioc");
  cmd_run->add_flag("--weak", weak, "weak labels only");

  auto* cmd_equiv = app.add_subcommand("equiv", "trace equivalence check");
  add_common(cmd_equiv, c_equiv);

  auto* cmd_props = app.add_subcommand("props", "freedom properties");
  add_common(cmd_props, c_props);

  CLI11_PARSE(app, argc, argv);

  dioc_ctx* ctx = dioc_ctx_new();
  int rc = DIOC_OK;
  char* out = nullptr;

  if (cmd_check->parsed()) {
    if ((rc = setup(ctx, c_check))) return die(ctx, rc);
    rc = dioc_check(ctx, &out);
    if (out) std::cout << out;
  } else if (cmd_project->parsed()) {
    if ((rc = setup(ctx, c_project))) return die(ctx, rc);
    if (force) dioc_set_option(ctx, "force", "1");
    if (!role.empty()) {
      rc = dioc_project(ctx, role.c_str(), &out);
      if (out) std::cout << out << "\n";
    } else {
      char* roles = nullptr;
      if ((rc = dioc_roles(ctx, &roles))) return die(ctx, rc);
      std::filesystem::path stem =
          std::filesystem::path(c_project.program).stem();
      std::istringstream ss(roles);
      std::string r;
      while (std::getline(ss, r, ',')) {
        char* text = nullptr;
        if ((rc = dioc_project(ctx, r.c_str(), &text))) {
          dioc_string_free(roles);
          return die(ctx, rc);
        }
        auto path =
            std::filesystem::path(out_dir) / (stem.string() + "." + r + ".dpoc");
        std::ofstream of(path);
        of << text << "\n";
        dioc_string_free(text);
        std::cout << path.string() << "\n";
      }
      dioc_string_free(roles);
    }
  } else if (cmd_run->parsed()) {
    if (c_run.explore) {
      std::cerr << "run does not support --explore; use equiv or props\n";
      dioc_ctx_free(ctx);
      return DIOC_BAD_SCHEDULE;
    }
    if ((rc = setup(ctx, c_run))) return die(ctx, rc);
    if (weak) dioc_set_option(ctx, "weak", "1");
    rc = dioc_run(ctx, level.c_str(), &out);
    if (out) std::cout << out;
  } else if (cmd_equiv->parsed()) {
    if ((rc = setup(ctx, c_equiv))) return die(ctx, rc);
    rc = dioc_equiv(ctx, &out);
    if (out) std::cout << out << "\n";
  } else if (cmd_props->parsed()) {
    if ((rc = setup(ctx, c_props))) return die(ctx, rc);
    rc = dioc_props(ctx, &out);
    if (out) std::cout << out << "\n";
  }

  if (rc != DIOC_OK && !out) {
    std::string msg = dioc_last_error(ctx);
    if (!msg.empty()) std::cerr << msg << (msg.back() == '\n' ? "" : "\n");
  }
  if (out) dioc_string_free(out);
  dioc_ctx_free(ctx);
  return rc;
}
