#pragma once

// Command-line front end. Every subcommand prints one JSON Report:
//   {"command", "inputs", "result", "provenance", "version"}
// Exit codes: 0 ok, 2 validation error, 3 guard exceeded, 64 unknown
// subcommand, 65 malformed JSON input.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tworank/bounds.hpp"
#include "tworank/error.hpp"
#include "tworank/forms.hpp"
#include "tworank/io.hpp"
#include "tworank/phigroup.hpp"
#include "tworank/polyalg.hpp"
#include "tworank/repaction.hpp"

namespace tworank::cli {

using json = nlohmann::json;

inline constexpr char const *kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kGuard = 3,
  kUnknownCommand = 64,
  kMalformedInput = 65,
};

inline std::vector<std::string> const &subcommands()
{
  static std::vector<std::string> const cmds{
    "forms gen",   "forms czero", "group info",  "group rank",     "group profile", "search olshanskii",
    "rep free",    "rep isotropy", "rep twocentral", "poly hilbert", "poly regseq",   "poly euler",
    "poly powertest", "bounds rp-rank", "bounds headline", "audit sn", "audit gl",
  };
  return cmds;
}

struct Report
{
  std::string command;
  json inputs = json::object();
  json result = json::object();
  json provenance = json::object();

  json to_json() const
  {
    return {{"command", command}, {"inputs", inputs}, {"result", result},
            {"provenance", provenance}, {"version", kVersion}};
  }
};

// Raised by a command that produced a report but ran into a guard.
class GuardedReport : public GuardExceeded
{
public:
  GuardedReport(Report r, std::string guard_name, std::string const &what)
  : GuardExceeded(std::move(guard_name), what), report(std::move(r))
  {}

  Report report;
};

// ---------------------------------------------------------------------------
// Loaders

/// Accepts a bare FormFamily object or a Report whose result carries "family".
inline FormFamily load_family(std::string const &path)
{
  auto const j = io::read_json_file(path);
  if (j.is_object() && j.contains("result") && j["result"].is_object() && j["result"].contains("family"))
    return io::family_from_json(j["result"]["family"]);
  return io::family_from_json(j);
}

inline GroupOracle load_table(std::string const &path) { return io::table_from_json(io::read_json_file(path)); }
inline IdealGens load_ideal(std::string const &path) { return io::ideal_from_json(io::read_json_file(path)); }

namespace detail {

struct GroupSource
{
  std::string table_path;
  std::string family_path;
};

inline void add_group_source(CLI::App &app, GroupSource &src)
{
  auto *t = app.add_option("--table", src.table_path, "Cayley table JSON file");
  auto *f = app.add_option("--family", src.family_path, "FormFamily JSON file (G_Phi, n + t <= 16)");
  t->excludes(f);
}

inline GroupPtr load_group(GroupSource const &src, json &inputs)
{
  if (!src.table_path.empty()) {
    inputs["table"] = src.table_path;
    return std::make_shared<GroupOracle const>(load_table(src.table_path));
  }
  if (!src.family_path.empty()) {
    inputs["family"] = src.family_path;
    return std::make_shared<GroupOracle const>(GroupOracle::from_phi_group(PhiGroup(load_family(src.family_path))));
  }
  throw ValidationError("one of --table or --family is required");
}

inline std::vector<std::string> split(std::string const &s, char sep)
{
  std::vector<std::string> out;
  if (s.empty())
    return out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    out.push_back(cur);
  return out;
}

/// Element token: a decimal id, or a1..an / b1..bt for G_Phi oracles.
inline ElementId parse_element(GroupOracle const &G, std::string const &tok)
{
  if (tok.empty())
    throw ValidationError("empty element token");
  if ((tok[0] == 'a' || tok[0] == 'b') && tok.size() > 1) {
    auto const *P = G.phi_group();
    if (!P)
      throw ValidationError("generator names need a --family group: " + tok);
    std::size_t idx = 0;
    try {
      idx = std::stoul(tok.substr(1));
    } catch (std::exception const &) {
      throw ValidationError("bad generator name: " + tok);
    }
    auto const limit = tok[0] == 'a' ? P->n() : P->t();
    if (idx < 1 || idx > limit)
      throw ValidationError("generator index out of range: " + tok);
    auto const g = tok[0] == 'a' ? P->a(idx - 1) : P->b(idx - 1);
    return static_cast<ElementId>(P->to_index(g));
  }
  std::size_t pos = 0;
  unsigned long id = 0;
  try {
    id = std::stoul(tok, &pos);
  } catch (std::exception const &) {
    throw ValidationError("bad element id: " + tok);
  }
  if (pos != tok.size() || id >= G.order())
    throw ValidationError("bad element id: " + tok);
  return static_cast<ElementId>(id);
}

inline std::vector<ElementId> parse_elements(GroupOracle const &G, std::string const &list)
{
  std::vector<ElementId> out;
  for (auto const &tok : split(list, ','))
    out.push_back(parse_element(G, tok));
  return out;
}

/// "GENS:CHARS", e.g. "b1:-1" or "1,2:-1,1"; ":" is the trivial subgroup.
inline MonomialRep parse_rep(GroupPtr const &G, std::string const &spec)
{
  auto const colon = spec.find(':');
  if (colon == std::string::npos)
    throw ValidationError("rep spec must look like GENS:CHARS, got " + spec);
  auto gens = parse_elements(*G, spec.substr(0, colon));
  std::vector<int> chars;
  for (auto const &tok : split(spec.substr(colon + 1), ',')) {
    if (tok == "1" || tok == "+1")
      chars.push_back(1);
    else if (tok == "-1")
      chars.push_back(-1);
    else
      throw ValidationError("character values must be 1 or -1, got " + tok);
  }
  return MonomialRep(G, std::move(gens), std::move(chars));
}

inline json rep_summary(MonomialRep const &r)
{
  return {{"dim", r.dim()}, {"subgroup_gens", r.subgroup_gens()}, {"character_on_gens", r.character_on_gens()},
          {"subgroup_order", r.subgroup().size()}};
}

inline SearchMode parse_mode(std::string const &m)
{
  if (m == "exhaustive")
    return SearchMode::exhaustive;
  if (m == "bnb")
    return SearchMode::branch_and_bound;
  throw ValidationError("--mode must be exhaustive or bnb");
}

inline json error_object(std::string const &command, std::string const &kind, std::string const &message,
                         std::vector<std::string> const &fields = {}, std::string const &guard_name = "")
{
  json err = {{"kind", kind}, {"message", message}};
  if (!fields.empty())
    err["fields"] = fields;
  if (!guard_name.empty())
    err["guard"] = guard_name;
  return {{"command", command}, {"error", err}, {"version", kVersion}};
}

} // namespace detail

// ---------------------------------------------------------------------------
// Commands. Each registers its options on `app` and returns the action that
// builds the Report once parsing succeeded.

using Action = std::function<Report()>;

namespace detail {

inline Action cmd_forms_gen(CLI::App &app)
{
  auto n = std::make_shared<std::size_t>(0);
  auto t = std::make_shared<std::size_t>(0);
  auto seed = std::make_shared<std::uint64_t>(0);
  app.add_option("--n", *n)->required();
  app.add_option("--t", *t)->required();
  app.add_option("--seed", *seed);
  return [=] {
    Report r;
    r.inputs = {{"n", *n}, {"t", *t}, {"seed", *seed}};
    auto const fam = random_family(*n, *t, *seed);
    r.result = {{"family", io::to_json(fam)}, {"radical_dim", common_radical(fam).dim()}};
    r.provenance = {{"seed", *seed}};
    return r;
  };
}

inline Action cmd_forms_czero(CLI::App &app)
{
  auto system = std::make_shared<std::string>();
  auto family = std::make_shared<std::string>();
  auto *s = app.add_option("--system", *system, "QuadraticSystem JSON file");
  auto *f = app.add_option("--family", *family, "use the quadratic refinements of a FormFamily");
  s->excludes(f);
  return [=] {
    Report r;
    QuadraticSystem sys;
    if (!system->empty()) {
      r.inputs["system"] = *system;
      sys = io::quadratic_system_from_json(io::read_json_file(*system));
    } else if (!family->empty()) {
      r.inputs["family"] = *family;
      sys = refinement_system(load_family(*family));
    } else {
      throw ValidationError("one of --system or --family is required");
    }
    auto const zero = common_zero_quadratics(sys);
    r.result = {{"v", sys.v}, {"q", sys.polys.size()}, {"found", zero.has_value()},
                {"zero", zero ? json(zero->to_string()) : json(nullptr)}};
    r.provenance = {{"exhaustive", true}};
    return r;
  };
}

inline Action cmd_group_info(CLI::App &app)
{
  auto family = std::make_shared<std::string>();
  app.add_option("--family", *family)->required();
  return [=] {
    Report r;
    r.inputs = {{"family", *family}};
    PhiGroup G(load_family(*family));
    auto const c = center(G);
    r.result = {{"n", G.n()},
                {"t", G.t()},
                {"order_exponent", G.order_exponent()},
                {"center",
                 {{"radical", io::to_json(c.radical)},
                  {"qzero_radical", io::to_json(c.qzero_radical)},
                  {"order_exponent", c.order_exponent},
                  {"elementary_rank", c.elementary_rank},
                  {"has_order4_central", c.has_order4_central}}},
                {"family", io::to_json(G.family())}};
    return r;
  };
}

inline Action cmd_group_rank(CLI::App &app, bool profile)
{
  auto family = std::make_shared<std::string>();
  auto mode = std::make_shared<std::string>("bnb");
  app.add_option("--family", *family)->required();
  app.add_option("--mode", *mode, "exhaustive or bnb");
  return [=] {
    Report r;
    r.inputs = {{"family", *family}, {"mode", *mode}};
    PhiGroup G(load_family(*family));
    auto const m = parse_mode(*mode);
    if (profile) {
      auto const p = extension_profile(G, m);
      r.result = {{"T", p.T}, {"N", p.N}, {"v_witness", io::to_json(p.v_witness)}};
    } else {
      auto const iso = max_isotropic_qzero(G.family(), m);
      r.result = {{"rank", G.t() + iso.dim}, {"isotropic_dim", iso.dim}, {"witness", io::to_json(iso.witness)}};
    }
    r.result["family"] = io::to_json(G.family());
    return r;
  };
}

inline Action cmd_search(CLI::App &app)
{
  auto n = std::make_shared<std::size_t>(0);
  auto t = std::make_shared<std::size_t>(0);
  auto k = std::make_shared<std::size_t>(0);
  auto trials = std::make_shared<std::uint64_t>(1000);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto threads = std::make_shared<unsigned>(1);
  app.add_option("--n", *n)->required();
  app.add_option("--t", *t)->required();
  app.add_option("--k", *k)->required();
  app.add_option("--trials", *trials);
  app.add_option("--seed", *seed);
  app.add_option("--threads", *threads, "worker threads (does not change the result)");
  return [=] {
    Report r;
    r.inputs = {{"n", *n}, {"t", *t}, {"k", *k}, {"trials", *trials}, {"seed", *seed}};
    auto const out = search_forms(*n, *t, *k, *trials, *seed, *threads);
    r.result = {{"condition_holds", out.condition_holds}, {"found", out.family.has_value()}};
    r.result["trial_index"] = out.trial_index ? json(*out.trial_index) : json(nullptr);
    r.result["trial_seed"] = out.trial_seed ? json(*out.trial_seed) : json(nullptr);
    if (out.family) {
      r.result["family"] = io::to_json(*out.family);
      r.result["isotropic_dim"] = max_isotropic_qzero(*out.family).dim;
    }
    r.provenance = {{"seed", *seed}, {"trials_budget", *trials}, {"trials_run", out.trials_run},
                    {"guards_hit", json::array()}};
    if (out.guard_hit) {
      r.provenance["guards_hit"].push_back(*out.guard_hit);
      throw GuardedReport(r, *out.guard_hit, "family dimension exceeds the isotropic search guard");
    }
    return r;
  };
}

inline Action cmd_rep(CLI::App &app, std::string which)
{
  auto src = std::make_shared<GroupSource>();
  auto specs = std::make_shared<std::vector<std::string>>();
  add_group_source(app, *src);
  if (which != "twocentral")
    app.add_option("--rep", *specs, "induced rep GENS:CHARS (repeatable)");
  return [=] {
    Report r;
    auto G = load_group(*src, r.inputs);
    r.inputs["reps"] = *specs;
    std::vector<MonomialRep> reps;
    for (auto const &s : *specs)
      reps.push_back(parse_rep(G, s));
    json summaries = json::array();
    for (auto const &rep : reps)
      summaries.push_back(rep_summary(rep));
    r.result["group_order"] = G->order();
    if (which == "free") {
      auto const f = is_free_on_product(*G, reps);
      r.result["free"] = f.free;
      r.result["witness"] = f.witness ? json(*f.witness) : json(nullptr);
      r.result["reps"] = summaries;
    } else if (which == "isotropy") {
      auto const iso = max_isotropy_rank(*G, reps);
      r.result["rank"] = iso.rank;
      r.result["witness_gens"] = iso.witness_gens;
      r.result["reps"] = summaries;
    } else {
      r.result["two_central"] = is_two_central(*G);
    }
    return r;
  };
}

inline Action cmd_poly_hilbert(CLI::App &app)
{
  auto ideal = std::make_shared<std::string>();
  auto degree = std::make_shared<std::size_t>(0);
  app.add_option("--ideal", *ideal)->required();
  app.add_option("--degree", *degree)->required();
  return [=] {
    Report r;
    r.inputs = {{"ideal", *ideal}, {"degree", *degree}};
    auto const I = load_ideal(*ideal);
    r.result = {{"degree", *degree}, {"value", hilbert_function(I, *degree)}};
    return r;
  };
}

inline Action cmd_poly_regseq(CLI::App &app)
{
  auto ideal = std::make_shared<std::string>();
  app.add_option("--ideal", *ideal)->required();
  return [=] {
    Report r;
    r.inputs = {{"ideal", *ideal}};
    auto const I = load_ideal(*ideal);
    auto const total = quotient_total_dim(I);
    r.result = {{"regular", total.has_value()}, {"total_dim", total ? json(*total) : json(nullptr)}};
    return r;
  };
}

inline Action cmd_poly_euler(CLI::App &app)
{
  auto src = std::make_shared<GroupSource>();
  auto specs = std::make_shared<std::vector<std::string>>();
  auto egens = std::make_shared<std::string>();
  add_group_source(app, *src);
  app.add_option("--rep", *specs, "induced rep GENS:CHARS (repeatable)")->required();
  app.add_option("--egens", *egens, "comma-separated basis of E")->required();
  return [=] {
    Report r;
    auto G = load_group(*src, r.inputs);
    r.inputs["reps"] = *specs;
    r.inputs["egens"] = *egens;
    auto const E = parse_elements(*G, *egens);
    std::vector<MonomialRep> reps;
    for (auto const &s : *specs)
      reps.push_back(parse_rep(G, s));
    json classes = json::array();
    for (auto const &rep : reps) {
      auto const c = euler_class_restriction(rep, E, E.size());
      classes.push_back({{"multiplicities", c.multiplicities},
                         {"euler", c.euler ? io::to_json(*c.euler) : json(nullptr)},
                         {"zero", !c.euler.has_value()}});
    }
    r.result["classes"] = classes;
    if (reps.size() == E.size() &&
        std::all_of(reps.begin(), reps.end(), [&](auto const &x) { return x.dim() == reps.front().dim(); }))
      r.result["transgression_regular"] = transgression_check(*G, reps, E).regular;
    else
      r.result["transgression_regular"] = nullptr;
    return r;
  };
}

inline Action cmd_poly_powertest(CLI::App &app)
{
  auto action = std::make_shared<std::string>();
  auto ys = std::make_shared<std::string>();
  auto p = std::make_shared<std::size_t>(2);
  app.add_option("--action", *action, "LinearAction JSON file")->required();
  app.add_option("--ys", *ys, "degree-one polynomials, IdealGens layout")->required();
  app.add_option("--p", *p);
  return [=] {
    Report r;
    r.inputs = {{"action", *action}, {"ys", *ys}, {"p", *p}};
    auto const act = io::action_from_json(io::read_json_file(*action));
    auto const Y = load_ideal(*ys);
    auto const res = power_span_test(act, Y.gens, *p);
    r.result = {{"stable", res.stable}, {"permuted", res.permuted}};
    return r;
  };
}

inline Action cmd_bounds_rp(CLI::App &app)
{
  auto m = std::make_shared<std::uint64_t>(0);
  auto n = std::make_shared<std::uint64_t>(0);
  app.add_option("--m", *m)->required();
  app.add_option("--n", *n)->required();
  return [=] {
    Report r;
    r.inputs = {{"m", *m}, {"n", *n}};
    auto const f = free_rank_rp(*m, *n);
    r.result = {{"free_rank", f.value}, {"small_m_caveat", f.small_m_caveat}};
    return r;
  };
}

inline Action cmd_bounds_headline(CLI::App &app)
{
  auto n = std::make_shared<std::uint64_t>(0);
  auto t = std::make_shared<std::uint64_t>(0);
  auto k = std::make_shared<std::uint64_t>(0);
  app.add_option("--n", *n)->required();
  app.add_option("--t", *t)->required();
  app.add_option("--k", *k)->required();
  return [=] {
    Report r;
    r.inputs = {{"n", *n}, {"t", *t}, {"k", *k}};
    auto const h = headline_report(*n, *t, *k);
    auto const sphere = io::to_decimal(h.sphere_dim);
    r.result = {{"condition_holds", h.condition_holds},
                {"T_bound", h.T_bound},
                {"N_bound", h.N_bound},
                {"sphere_dim", sphere},
                {"sphere_dim_expr", "2^" + std::to_string(h.n + h.t - 1) + "-1"},
                {"sphere_dim_digits", sphere.size()},
                {"browder_min_m", h.browder_min_m},
                {"carlsson_min_m", io::to_decimal(h.carlsson_min_m)},
                {"carlsson_paper_weak", io::to_decimal(h.carlsson_paper_weak)}};
    return r;
  };
}

inline Action cmd_audit(CLI::App &app, bool gl)
{
  auto n = std::make_shared<std::size_t>(0);
  app.add_option("--n", *n)->required();
  return [=] {
    Report r;
    r.inputs = {{"n", *n}};
    if (gl) {
      auto const a = gl_rank_audit(*n);
      json witness = json::array();
      for (auto const &m : a.witness)
        witness.push_back(io::to_json(m));
      r.result = {{"max_rank", a.max_rank}, {"bound", a.bound}, {"ok", a.ok}, {"witness", witness}};
    } else {
      auto const a = perm_rank_audit(*n);
      r.result = {{"ok", a.ok},
                  {"subgroups_checked", a.subgroups_checked},
                  {"tightest",
                   {{"rank", a.tightest.rank},
                    {"orbits", a.tightest.orbits},
                    {"slack", a.tightest.slack},
                    {"generators", a.tightest.generators}}}};
    }
    return r;
  };
}

inline Action register_command(std::string const &cmd, CLI::App &app)
{
  if (cmd == "forms gen") return cmd_forms_gen(app);
  if (cmd == "forms czero") return cmd_forms_czero(app);
  if (cmd == "group info") return cmd_group_info(app);
  if (cmd == "group rank") return cmd_group_rank(app, false);
  if (cmd == "group profile") return cmd_group_rank(app, true);
  if (cmd == "search olshanskii") return cmd_search(app);
  if (cmd == "rep free") return cmd_rep(app, "free");
  if (cmd == "rep isotropy") return cmd_rep(app, "isotropy");
  if (cmd == "rep twocentral") return cmd_rep(app, "twocentral");
  if (cmd == "poly hilbert") return cmd_poly_hilbert(app);
  if (cmd == "poly regseq") return cmd_poly_regseq(app);
  if (cmd == "poly euler") return cmd_poly_euler(app);
  if (cmd == "poly powertest") return cmd_poly_powertest(app);
  if (cmd == "bounds rp-rank") return cmd_bounds_rp(app);
  if (cmd == "bounds headline") return cmd_bounds_headline(app);
  if (cmd == "audit sn") return cmd_audit(app, false);
  return cmd_audit(app, true);
}

inline void emit(json const &j, std::string const &out_path, std::ostream &out)
{
  auto const text = j.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f)
    throw ValidationError("cannot write output file: " + out_path, {"--out"});
  f << text;
}

} // namespace detail

inline std::string usage()
{
  std::string s = "usage: tworank <group> <command> [--options]\ncommands:\n";
  for (auto const &c : subcommands())
    s += "  " + c + "\n";
  return s;
}

/// Runs one subcommand; `args` excludes the program name.
inline int dispatch(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
  if (args.size() < 2) {
    err << usage();
    out << detail::error_object("", "unknown_command", "missing subcommand").dump(2) << "\n";
    return kUnknownCommand;
  }
  auto const command = args[0] + " " + args[1];
  auto const &cmds = subcommands();
  if (std::find(cmds.begin(), cmds.end(), command) == cmds.end()) {
    err << "unknown subcommand: " << command << "\n" << usage();
    out << detail::error_object(command, "unknown_command", "unknown subcommand: " + command).dump(2) << "\n";
    return kUnknownCommand;
  }

  CLI::App app("tworank " + command, "tworank " + command);
  std::string out_path;
  app.add_option("--out", out_path, "write the report to this path");
  auto action = detail::register_command(command, app);

  std::vector<std::string> rest(args.rbegin(), args.rend() - 2);  // CLI11 wants reversed order
  try {
    app.parse(rest);
  } catch (CLI::CallForHelp const &) {
    out << app.help();
    return kOk;
  } catch (CLI::ParseError const &e) {
    err << e.what() << "\n";
    out << detail::error_object(command, "validation", e.what()).dump(2) << "\n";
    return kValidation;
  }

  try {
    auto report = action();
    report.command = command;
    detail::emit(report.to_json(), out_path, out);
    return kOk;
  } catch (GuardedReport const &e) {
    auto report = e.report;
    report.command = command;
    auto j = report.to_json();
    j["error"] = {{"kind", "guard_exceeded"}, {"guard", e.guard()}, {"message", e.what()}};
    detail::emit(j, out_path, out);
    err << "guard exceeded: " << e.guard() << "\n";
    return kGuard;
  } catch (GuardExceeded const &e) {
    err << "guard exceeded: " << e.guard() << "\n";
    out << detail::error_object(command, "guard_exceeded", e.what(), {}, e.guard()).dump(2) << "\n";
    return kGuard;
  } catch (io::MalformedInput const &e) {
    err << e.what() << "\n";
    out << detail::error_object(command, "malformed_input", e.what()).dump(2) << "\n";
    return kMalformedInput;
  } catch (ValidationError const &e) {
    err << e.what() << "\n";
    out << detail::error_object(command, "validation", e.what(), e.fields()).dump(2) << "\n";
    return kValidation;
  }
}

} // namespace tworank::cli
