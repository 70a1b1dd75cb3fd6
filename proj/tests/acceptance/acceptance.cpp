// Acceptance runner: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "dioc/connectedness.hpp"
#include "dioc/events.hpp"
#include "dioc/projection.hpp"
#include "dioc/verify.hpp"
#include "support/gen.hpp"
#include "support/util.hpp"

using namespace dioc;
using namespace dioc::testsupport;
using Clock = std::chrono::steady_clock;

static int failed = 0;

static void report(int num, bool ok, const std::string& what,
                   const std::string& detail = "") {
  std::printf("criterion %d: %s - %s%s%s\n", num, ok ? "pass" : "FAIL",
              what.c_str(), detail.empty() ? "" : " (",
              detail.empty() ? "" : (detail + ")").c_str());
  if (!ok) ++failed;
}

static DiocPtr parse_ann(const std::string& s) {
  auto r = parse_dioc(s);
  if (!r.ok()) throw std::runtime_error("parse failed");
  return annotate(r.program);
}

static UpdateDef load_update(const std::string& path, const std::string& name) {
  auto r = parse_update(read_file(path));
  if (!r.ok()) throw std::runtime_error("update parse failed: " + path);
  return {name, r.program, check_connected(r.program).connected};
}

static const char* kCorpus[] = {
    "c01_single", "c02_chain",   "c03_par",      "c04_if",
    "c05_while",  "c06_scope3",  "c07_assigns",  "c08_nested",
    "c09_parscope", "c10_strings", "c11_scope_if"};

// ---------------------------------------------------------------------------
// 1: projection of the buying program matches the frozen listings
// ---------------------------------------------------------------------------

static void criterion1() {
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  try {
    DiocPtr p = parse_ann(read_file(fixture("buying.dioc")));
    Network n = proj(p, {});
    for (auto* r : {"buyer", "seller", "bank"}) {
      std::string got = pretty_dpoc(n.roles[Role{r}].proc);
      std::string want =
          read_file(fixture(std::string("golden/buying.") + r + ".dpoc"));
      while (!want.empty() && want.back() == '\n') want.pop_back();
      if (got != want) {
        ok = false;
        detail = std::string("mismatch for ") + r;
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  double sec = std::chrono::duration<double>(Clock::now() - t0).count();
  if (sec >= 1.0) {
    ok = false;
    detail = "took " + std::to_string(sec) + "s";
  }
  report(1, ok, "projection of the buying program matches the goldens", detail);
}

// ---------------------------------------------------------------------------
// 2: bounded trace equivalence across the corpus
// ---------------------------------------------------------------------------

static void criterion2() {
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  ExploreOpts opts;
  opts.bound = 40;
  opts.loop_bound = 2;
  HostEnv empty_host;
  try {
    for (auto* name : kCorpus) {
      DiocSystem s = make_dioc_system(
          parse_ann(read_file(fixture(std::string("corpus/") + name + ".dioc"))));
      EquivResult r = check_equiv(s, empty_host, {}, opts);
      if (!r.error.empty() || !r.equivalent) {
        ok = false;
        detail = std::string(name) + ": " +
                 (r.error.empty() ? "not equivalent" : r.error);
        break;
      }
    }
    HostEnv host = host_env_from_json(read_file(fixture("host.json")));
    InputQueues ins = input_queues_from_json(read_file(fixture("inputs.json")));
    DiocPtr buying = parse_ann(read_file(fixture("buying.dioc")));
    UpdateSet fid{load_update(fixture("updates/fidelity_card.upd"),
                              "fidelity_card")};
    for (int with_upd = 0; ok && with_upd < 2; ++with_upd) {
      DiocSystem s = make_dioc_system(buying, {}, with_upd ? fid : UpdateSet{},
                                      ins);
      EquivResult r = check_equiv(s, host, {}, opts);
      if (!r.error.empty() || !r.equivalent) {
        ok = false;
        detail = std::string("buying") + (with_upd ? "+update" : "") + ": " +
                 (r.error.empty() ? "not equivalent" : r.error);
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  double sec = std::chrono::duration<double>(Clock::now() - t0).count();
  if (sec >= 30.0) {
    ok = false;
    detail = "took " + std::to_string(sec) + "s";
  }
  report(2, ok, "corpus equivalence at bound 40, loop bound 2", detail);
}

// ---------------------------------------------------------------------------
// 3: seeded projection faults all break equivalence
// ---------------------------------------------------------------------------

// Recursive rewriters; they descend into every construct, including loops.

static DpocPtr rewrite(const DpocPtr& p,
                       const std::function<DpocPtr(const DpocPtr&)>& f) {
  if (DpocPtr r = f(p)) return r;
  // evaluation order of call arguments is unspecified; keep traversal
  // left-to-right so "first" means textual first
  if (auto* n = std::get_if<PSeq>(&p->node)) {
    DpocPtr l = rewrite(n->left, f);
    return p_seq(std::move(l), rewrite(n->right, f));
  }
  if (auto* n = std::get_if<PPar>(&p->node)) {
    DpocPtr l = rewrite(n->left, f);
    return p_par(std::move(l), rewrite(n->right, f));
  }
  if (auto* n = std::get_if<PIf>(&p->node)) {
    DpocPtr t = rewrite(n->then_branch, f);
    return p_if(n->guard, std::move(t), rewrite(n->else_branch, f), p->index);
  }
  if (auto* n = std::get_if<PWhile>(&p->node))
    return p_while(n->guard, rewrite(n->body, f), p->index);
  if (auto* n = std::get_if<PScopeLead>(&p->node))
    return p_scope_lead(n->coordinator, rewrite(n->body, f), n->roles, n->name,
                        p->index);
  if (auto* n = std::get_if<PScopePlain>(&p->node))
    return p_scope_plain(n->coordinator, rewrite(n->body, f), n->name, p->index);
  return p;
}

static DpocPtr drop_first_private_recv(const DpocPtr& p, bool& done) {
  return rewrite(p, [&done](const DpocPtr& q) -> DpocPtr {
    auto* r = std::get_if<PRecv>(&q->node);
    if (!done && r && r->op.is_private()) {
      done = true;
      return p_one();
    }
    return nullptr;
  });
}

static DpocPtr flip_first_broadcast(const DpocPtr& p, bool& done) {
  return rewrite(p, [&done](const DpocPtr& q) -> DpocPtr {
    auto* s = std::get_if<PSend>(&q->node);
    if (!done && s && s->op.is_private() && s->expr->kind == Expr::Kind::Lit &&
        s->expr->lit.is_bool()) {
      done = true;
      return p_send(s->op, Expr::literal(Value::boolean(!s->expr->lit.as_bool())),
                    s->to, q->index);
    }
    return nullptr;
  });
}

static DpocPtr drop_first_ack_send(const DpocPtr& p, bool& done) {
  return rewrite(p, [&done](const DpocPtr& q) -> DpocPtr {
    auto* s = std::get_if<PSend>(&q->node);
    if (!done && s && s->op.is_private() && s->expr->kind == Expr::Kind::Lit &&
        s->expr->lit.is_str()) {
      done = true;
      return p_one();
    }
    return nullptr;
  });
}

static bool broken(const std::string& program, const Role& victim,
                   DpocPtr (*mut)(const DpocPtr&, bool&), std::string& why) {
  HostEnv host;
  ExploreOpts opts;
  opts.bound = 40;
  DiocSystem ds = make_dioc_system(
      parse_ann(read_file(fixture("corpus/" + program + ".dioc"))));
  int c = ds.fresh_counter;
  Network n = proj(ds.proc, {}, c);
  bool done = false;
  n.roles[victim].proc = mut(n.roles[victim].proc, done);
  if (!done) {
    why = program + ": mutation found nothing to change";
    return false;
  }
  EquivResult r =
      check_equiv_against(ds, make_dpoc_system(n, {}, {}, c), host, {}, opts);
  if (!r.error.empty() || r.equivalent) {
    why = program + ": fault not detected";
    return false;
  }
  return true;
}

static bool broken_update(const std::string& prog_path,
                          const std::string& upd_path,
                          const std::string& upd_name, const HostEnv& host,
                          const InputQueues& ins, LeadUpFault fault,
                          std::string& why) {
  ExploreOpts opts;
  opts.bound = 40;
  UpdateSet us{load_update(upd_path, upd_name)};
  DiocSystem ds = make_dioc_system(parse_ann(read_file(prog_path)), {}, us, ins);
  int c = ds.fresh_counter;
  Network n = proj(ds.proc, {}, c);
  EquivResult r = check_equiv_against(ds, make_dpoc_system(n, us, ins, c), host,
                                      {}, opts, fault);
  if (!r.error.empty() || r.equivalent) {
    why = upd_name + ": fault not detected";
    return false;
  }
  return true;
}

static void criterion3() {
  bool ok = true;
  std::string detail;
  try {
    ok = ok && broken("c04_if", Role{"b"}, drop_first_private_recv, detail);
    ok = ok && broken("c04_if", Role{"a"}, flip_first_broadcast, detail);
    ok = ok && broken("c05_while", Role{"b"}, drop_first_ack_send, detail);
    if (ok) {
      HostEnv host = host_env_from_json(read_file(fixture("host.json")));
      InputQueues ins =
          input_queues_from_json(read_file(fixture("inputs.json")));
      ok = broken_update(fixture("buying.dioc"),
                         fixture("updates/fidelity_card.upd"), "fidelity_card",
                         host, ins, LeadUpFault::MisprefixOperation, detail);
      if (ok)
        ok = broken_update(fixture("corpus/c06_scope3.dioc"),
                           fixture("updates3/swap.upd"), "swap", HostEnv{}, {},
                           LeadUpFault::SwapShippedCode, detail);
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(3, ok, "five seeded faults all break equivalence", detail);
}

// ---------------------------------------------------------------------------
// 4: randomized agreement with the definitional oracles
// ---------------------------------------------------------------------------

static void criterion4() {
  bool ok = true;
  std::string detail;
  int yes = 0;
  for (unsigned seed = 0; seed < 1000 && ok; ++seed) {
    Gen g(seed);
    DiocPtr p = g.program(1 + (int)(seed % 200));
    bool fast = check_connected(p).connected;
    bool ref = naive_connected(p);
    if (fast != ref) {
      ok = false;
      detail = "program disagreement at seed " + std::to_string(seed);
    }
    yes += fast;
  }
  if (ok && (yes == 0 || yes == 1000)) {
    ok = false;
    detail = "degenerate generator: " + std::to_string(yes) + "/1000 connected";
  }
  for (unsigned seed = 5000; seed < 6000 && ok; ++seed) {
    Gen g(seed);
    PairSet a = g.pair_set(16);
    PairSet b = g.pair_set(16);
    if (pair_cover_check(a, b) != pair_cover_brute(a, b)) {
      ok = false;
      detail = "pair-set disagreement at seed " + std::to_string(seed);
    }
  }
  report(4, ok, "1000 random programs and 1000 pair sets agree with oracles",
         detail);
}

// ---------------------------------------------------------------------------
// 5: connectedness check scales
// ---------------------------------------------------------------------------

static double time_check(const DiocPtr& p) {
  // repeat until at least 50ms elapse, report per-run cost; median of 3
  std::vector<double> runs;
  for (int rep = 0; rep < 3; ++rep) {
    int iters = 0;
    auto t0 = Clock::now();
    double elapsed = 0;
    do {
      if (!check_connected(p).connected) throw std::runtime_error("chain broke");
      ++iters;
      elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    } while (elapsed < 0.05);
    runs.push_back(elapsed / iters);
  }
  std::sort(runs.begin(), runs.end());
  return runs[1];
}

static void criterion5() {
  bool ok = true;
  std::string detail;
  try {
    std::vector<int> sizes{2000, 4000, 8000, 16000};
    std::vector<double> times;
    std::ostringstream ds;
    for (int n : sizes) {
      DiocPtr p = chain_program(n);
      auto t0 = Clock::now();
      bool conn = check_connected(p).connected;
      double once = std::chrono::duration<double>(Clock::now() - t0).count();
      if (!conn) throw std::runtime_error("chain not connected");
      if (n == 16000 && once >= 10.0) {
        ok = false;
        detail = "16000 nodes took " + std::to_string(once) + "s";
      }
      times.push_back(time_check(p));
      ds << n << ":" << times.back() << "s ";
    }
    for (size_t i = 0; ok && i + 1 < times.size(); ++i) {
      double ratio = times[i + 1] / times[i];
      if (ratio > 4.4) {
        ok = false;
        detail = "ratio " + std::to_string(ratio) + " between " +
                 std::to_string(sizes[i]) + " and " + std::to_string(sizes[i + 1]);
      }
    }
    if (ok) detail = ds.str();
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(5, ok, "connectedness scaling on 2k/4k/8k/16k chains", detail);
}

// ---------------------------------------------------------------------------
// 6: deadlock, race, orphan freedom of projections
// ---------------------------------------------------------------------------

static void criterion6() {
  bool ok = true;
  std::string detail;
  HostEnv empty_host;
  ExploreOpts opts;
  try {
    auto run = [&](const std::string& path, const HostEnv& host,
                   const InputQueues& ins) {
      DiocPtr p = parse_ann(read_file(path));
      int c = max_index(p) + 1;
      FreedomResult f =
          check_freedom(make_dpoc_system(proj(p, {}, c), {}, ins, c), host, opts);
      if (!f.deadlock_free || !f.race_free || !f.orphan_free) {
        ok = false;
        detail = path + ": " +
                 (!f.deadlock_free  ? f.deadlock_witness
                  : !f.race_free    ? f.race_witness
                                    : f.orphan_witness);
      }
    };
    for (auto* name : kCorpus)
      run(fixture(std::string("corpus/") + name + ".dioc"), empty_host, {});
    HostEnv host = host_env_from_json(read_file(fixture("host.json")));
    InputQueues ins = input_queues_from_json(read_file(fixture("inputs.json")));
    run(fixture("buying.dioc"), host, ins);
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(6, ok, "no deadlocks, races or orphan messages on the corpus", detail);
}

// ---------------------------------------------------------------------------
// 7: normalization of a mid-update network matches the goldens
// ---------------------------------------------------------------------------

static void criterion7() {
  bool ok = true;
  std::string detail;
  try {
    HostEnv host = host_env_from_json(read_file(fixture("host.json")));
    DiocPtr p = parse_ann(read_file(fixture("scope_excerpt.dioc")));
    int c = max_index(p) + 1;
    UpdateSet us{load_update(fixture("updates/fidelity_card.upd"),
                             "fidelity_card")};
    DpocSystem s = make_dpoc_system(proj(p, {}, c), us, {}, c);
    auto ts = system_enabled(s, host);

    auto norm_text = [](const Network& n) {
      std::string out;
      for (auto& [r, rp] : n.roles)
        out += "-- " + r.name + "\n" +
               pretty_dpoc(p_collapse_ones(rp.proc)) + "\n";
      return out;
    };
    auto check_against = [&](const Network& got, const DiocPtr& want_src,
                             const std::string& golden_name,
                             const char* which) {
      Network want = proj(annotate(want_src), {});
      for (auto& [r, rp] : want.roles) {
        if (!got.roles.count(r) ||
            !p_struct_equal(p_collapse_ones(got.roles.at(r).proc),
                            p_collapse_ones(rp.proc))) {
          ok = false;
          detail = std::string(which) + ": role " + r.name + " differs";
        }
      }
      std::string want_text = read_file(fixture("golden/" + golden_name));
      if (norm_text(got) != want_text) {
        ok = false;
        detail = std::string(which) + ": golden text mismatch";
      }
    };

    bool saw_up = false, saw_noup = false;
    for (auto& t : ts) {
      if (t.label.kind == Label::Kind::Update) {
        saw_up = true;
        check_against(upd_normalize(t.next.net), us[0].body,
                      "scope_norm_up.txt", "after update");
      } else if (t.label.kind == Label::Kind::NoUp) {
        saw_noup = true;
        DiocPtr scope_body = std::get<DScope>(p->node).body;
        check_against(upd_normalize(t.next.net), scope_body,
                      "scope_norm_noup.txt", "after no-update");
      }
    }
    if (!saw_up || !saw_noup) {
      ok = false;
      detail = "scope offered no update/no-update decision";
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(7, ok, "mid-update normal forms match the goldens", detail);
}

// ---------------------------------------------------------------------------
// 8: event structure of projections
// ---------------------------------------------------------------------------

static bool events_ok(const DiocPtr& p, const HostEnv& host,
                      const InputQueues& ins, std::string& why) {
  EventGraph gd = events_dioc(p);
  int c = max_index(p) + 1;
  Network net = proj(p, {}, c);
  EventGraph gp = events_dpoc(net);

  // containment
  for (auto& e : gd.events)
    if (!gp.by_key.count(e.key())) {
      why = "missing event " + e.display();
      return false;
    }
  // order embedding
  for (size_t i = 0; i < gd.events.size(); ++i)
    for (size_t j = 0; j < gd.events.size(); ++j) {
      if (i == j || !gd.leq((int)i, (int)j)) continue;
      int pi_ = gp.by_key.at(gd.events[i].key());
      int pj = gp.by_key.at(gd.events[j].key());
      bool okpair = gp.leq(pi_, pj);
      for (int m : gp.matches[pj]) okpair = okpair || gp.leq(pi_, m);
      if (!okpair) {
        why = "order lost between " + gd.events[i].display() + " and " +
              gd.events[j].display();
        return false;
      }
    }
  // static well-annotatedness
  auto viol = check_well_annotated_dpoc(gp);
  if (!viol.empty()) {
    why = viol[0].condition + ": " + viol[0].detail;
    return false;
  }
  // dynamic minimality of fired transitions
  DpocSystem sys = make_dpoc_system(net, {}, ins, c);
  for (int step = 0; step < 250; ++step) {
    auto ts = system_enabled(sys, host);
    if (ts.empty()) break;
    PTransition& t = ts[0];
    if (!t.acted.empty()) {
      EventGraph g = events_dpoc(sys.net);
      std::set<int> exempt;
      std::vector<std::vector<int>> cands;
      for (auto& [r, idx] : t.acted) {
        cands.push_back(g.find_by_own_index(r, idx));
        for (int e : cands.back()) {
          exempt.insert(e);
          for (int m : g.matches[e]) exempt.insert(m);
        }
      }
      // an index can name several copies after a loop unfold; the one that
      // actually fired must be minimal, so at least one candidate is
      for (auto& cs : cands) {
        bool any = cs.empty();
        for (int e : cs) any = any || g.minimal(e, exempt);
        if (!any) {
          why = "non-minimal event fired: " + g.events[cs[0]].display();
          return false;
        }
      }
    }
    sys = std::move(t.next);
  }
  return true;
}

static void criterion8() {
  bool ok = true;
  std::string detail;
  try {
    HostEnv empty_host;
    for (auto* name : kCorpus) {
      DiocPtr p =
          parse_ann(read_file(fixture(std::string("corpus/") + name + ".dioc")));
      std::string why;
      if (!events_ok(p, empty_host, {}, why)) {
        ok = false;
        detail = std::string(name) + ": " + why;
        break;
      }
    }
    if (ok) {
      HostEnv host = host_env_from_json(read_file(fixture("host.json")));
      InputQueues ins =
          input_queues_from_json(read_file(fixture("inputs.json")));
      DiocPtr p = parse_ann(read_file(fixture("buying.dioc")));
      std::string why;
      if (!events_ok(p, host, ins, why)) {
        ok = false;
        detail = "buying: " + why;
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(8, ok, "projection preserves events, order and minimal firing",
         detail);
}

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  return failed ? 1 : 0;
}
