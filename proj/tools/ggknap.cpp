// Command-line front end. Exit status: 0 solvable or true, 1 certified
// unsolvable or false, 2 unknown or over a limit, 3 bad input.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ggk/errors.hpp"
#include "ggk/io.hpp"

namespace {

  using namespace ggk;

  constexpr int kYes = 0, kNo = 1, kUnknown = 2, kBadInput = 3;

  struct Options {
    std::string              file;
    std::string              mode   = "auto";
    std::string              format = "text";
    std::string              assign;
    std::optional<std::size_t> cap;
    // mihailova
    std::string              gens, word, out;
    std::vector<std::string> rels;
    std::size_t              blocks = 1;
  };

  class Printer {
   public:
    Printer(std::ostream& os, bool machine) : os_(os), machine_(machine) {}
    void kv(std::string const& k, std::string const& v) {
      os_ << k << (machine_ ? "=" : ": ") << v << "\n";
    }
    bool machine() const { return machine_; }
    std::ostream& os() { return os_; }

   private:
    std::ostream& os_;
    bool          machine_;
  };

  std::optional<std::size_t> env_cap() {
    char const* s = std::getenv("GG_KNAPSACK_CAP");
    if (!s || !*s) {
      return std::nullopt;
    }
    try {
      return std::stoull(s);
    } catch (std::exception const&) {
      throw PreconditionError("GG_KNAPSACK_CAP must be a number");
    }
  }

  std::size_t cap_or(Options const& o, std::size_t fallback) {
    if (o.cap) {
      return *o.cap;
    }
    if (auto e = env_cap()) {
      return *e;
    }
    return fallback;
  }

  constexpr std::size_t kExpansionCap = 1000000;
  constexpr std::size_t kSearchCap    = 15;

  double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }

  int exit_for(SolveStatus s) {
    switch (s) {
      case SolveStatus::Solvable: return kYes;
      case SolveStatus::Unsolvable: return kNo;
      case SolveStatus::Unknown: return kUnknown;
    }
    return kUnknown;
  }

  SolveReport dispatch_mode(ExponentEquation const& e, Options const& o) {
    natural const     expansion = cap_or(o, kExpansionCap);
    std::size_t const search    = cap_or(o, kSearchCap);
    if (o.mode == "exact") {
      return solve_exact(e, {2, expansion});
    }
    if (o.mode == "search") {
      return solve_search(e, search);
    }
    if (o.mode == "relax") {
      return solve_relax(e);
    }
    // auto: certificate by relaxation, then exact, then bounded search.
    SolveReport r = solve_relax(e);
    if (r.status == SolveStatus::Unsolvable) {
      return r;
    }
    r = solve_exact(e, {2, natural(kExpansionCap)});
    if (r.status != SolveStatus::Unknown) {
      return r;
    }
    SolveReport s = solve_search(e, kSearchCap);
    if (s.status == SolveStatus::Unknown) {
      s.reason = r.reason + "; " + s.reason;
    }
    return s;
  }

  int solve_equation(Instance const& inst, Options const& o, Printer& p) {
    ExponentEquation e = build_equation(inst, cap_or(o, kExpansionCap));
    IntegerRewrite   rw;
    bool const       integer = e.has_integer_vars();
    if (integer) {
      rw = z_to_n_rewrite(e);
    }
    ExponentEquation const& solved = integer ? rw.equation : e;
    SolveReport             r      = dispatch_mode(solved, o);

    p.kv("status", to_string(r.status));
    p.kv("exhaustive", r.exhaustive ? "true" : "false");
    std::string names;
    for (VarId v = 0; v < e.num_vars(); ++v) {
      names += (v ? "," : "") + e.var_name(v);
    }
    p.kv("vars", names);
    if (r.witness) {
      Assignment w(r.witness->begin(),
                   r.witness->begin() + static_cast<std::ptrdiff_t>(e.num_vars()));
      for (auto [x, y] : rw.split) {
        w[x] -= (*r.witness)[y];
      }
      std::string s;
      for (VarId v = 0; v < w.size(); ++v) {
        s += (v ? "," : "") + w[v].str();
      }
      p.kv("witness", s);
    }
    if (r.solution_set) {
      if (integer) {
        std::string all;
        for (VarId v = 0; v < solved.num_vars(); ++v) {
          all += (v ? "," : "") + solved.var_name(v);
        }
        p.kv("solset_vars", all);
      }
      if (r.solution_set->empty()) {
        p.kv("solset", "empty");
      }
      for (auto const& c : r.solution_set->components) {
        p.kv("solset", format(c));
      }
    }
    if (!r.reason.empty()) {
      p.kv("reason", r.reason);
    }
    return exit_for(r.status);
  }

  int report_bool(Printer& p, bool yes, std::string const& key) {
    p.kv(key, yes ? "true" : "false");
    p.kv("status", yes ? "solvable" : "unsolvable");
    return yes ? kYes : kNo;
  }

  int solve_automaton(Instance const& inst, Options const& o, Printer& p) {
    GraphGroupOracle g(build_alphabet(inst), cap_or(o, kSearchCap));
    Word             target;
    auto             ka = build_automaton(inst, inst.gens, target);
    return report_bool(p, g.ka_membership(ka, target), "member");
  }

  int cmd_solve(Instance const& inst, Options const& o, Printer& p) {
    if (inst.hnn || inst.amalgam || inst.extension) {
      throw PreconditionError(
          "transfer instances are solved with the hnn, amalgam or finite-ext command");
    }
    if (inst.problem == Instance::Problem::Automaton) {
      return solve_automaton(inst, o, p);
    }
    return solve_equation(inst, o, p);
  }

  int cmd_verify(Instance const& inst, Options const& o, Printer& p) {
    natural const    cap = cap_or(o, kExpansionCap);
    ExponentEquation e   = build_equation(inst, cap);
    Assignment       a   = parse_assignment(o.assign, e);
    bool             ok  = verify(e, a, cap);
    p.kv("valid", ok ? "true" : "false");
    return ok ? kYes : kNo;
  }

  int cmd_bound(Instance const& inst, Options const& o, Printer& p) {
    BoundReport b = solution_bound(build_equation(inst, cap_or(o, kExpansionCap)));
    p.kv("label", b.label);
    p.kv("value", b.value ? b.value->str() : "too-large");
    p.kv("formula", b.formula);
    return kYes;
  }

  void print_stats(Printer& p, SaturationStats const& s) {
    p.kv("phase1_steps", std::to_string(s.phase1_steps));
    p.kv("phase2_edges", std::to_string(s.phase2_edges));
    p.kv("shape_checks", std::to_string(s.shape_checks));
  }

  int cmd_hnn(Instance const& inst, Options const&, Printer& p) {
    HnnPresentation h    = build_hnn(inst);
    Tokens          gens = h.base->gens();
    gens.push_back(h.stable);
    Word target;
    auto ka = build_automaton(inst, gens, target);
    if (!target.empty()) {
      ka = prepend(ka, invert(target));
    }
    SaturationStats s;
    bool            yes = hnn_saturate(h, ka, &s);
    print_stats(p, s);
    return report_bool(p, yes, "member");
  }

  int cmd_amalgam(Instance const& inst, Options const&, Printer& p) {
    Amalgam am   = build_amalgam(inst);
    Tokens  gens = am.g0->gens();
    gens.insert(gens.end(), am.g1->gens().begin(), am.g1->gens().end());
    Word target;
    auto ka = build_automaton(inst, gens, target);
    for (auto& e : ka.edges()) {
      e.label = amalgam_embed(am, e.label);
    }
    target = amalgam_embed(am, target);
    if (!target.empty()) {
      ka = prepend(ka, invert(target));
    }
    SaturationStats s;
    bool            yes = hnn_saturate(amalgam_to_hnn(am), ka, &s);
    print_stats(p, s);
    return report_bool(p, yes, "member");
  }

  int cmd_finite_ext(Instance const& inst, Options const&, Printer& p) {
    FiniteExtension fe = build_extension(inst);
    OraclePtr       g  = build_group(inst, inst.extension->base);
    FiniteExtStats  s;
    bool            yes = finite_ext_reduce(fe, build_word_equation(inst), *g, &s);
    p.kv("branches", std::to_string(s.branches));
    p.kv("g_calls", std::to_string(s.g_calls));
    return report_bool(p, yes, "solvable");
  }

  int run_file(std::string const& cmd, Options const& o, Printer& p) {
    Instance inst = load_instance(o.file);
    if (cmd == "solve") {
      return cmd_solve(inst, o, p);
    }
    if (cmd == "verify") {
      return cmd_verify(inst, o, p);
    }
    if (cmd == "bound") {
      return cmd_bound(inst, o, p);
    }
    if (cmd == "hnn") {
      return cmd_hnn(inst, o, p);
    }
    if (cmd == "amalgam") {
      return cmd_amalgam(inst, o, p);
    }
    return cmd_finite_ext(inst, o, p);
  }

  // Maps library exceptions onto the exit-status contract.
  int guarded(std::function<int()> const& f, Printer& p) {
    try {
      return f();
    } catch (LimitsExceeded const& e) {
      p.kv("status", "unknown");
      p.kv("reason", e.what());
      return kUnknown;
    } catch (ResourceExceeded const& e) {
      p.kv("status", "unknown");
      p.kv("reason", e.what());
      return kUnknown;
    } catch (Error const& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kBadInput;
    } catch (std::exception const& e) {
      std::cerr << "internal error: " << e.what() << "\n";
      return kBadInput + 1;
    }
  }

  std::string command_for(Instance const& inst) {
    if (inst.hnn) {
      return "hnn";
    }
    if (inst.amalgam) {
      return "amalgam";
    }
    if (inst.extension) {
      return "finite-ext";
    }
    return "solve";
  }

  int cmd_bench(Options const& o, Printer& p) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (auto const& entry : fs::directory_iterator(o.file)) {
      if (entry.path().extension() == ".ggk") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (auto const& f : files) {
      std::ostringstream sink;
      Printer            quiet(sink, true);
      auto const         t0   = std::chrono::steady_clock::now();
      Options            each = o;
      each.file             = f.string();
      int code = guarded(
          [&] {
            return run_file(command_for(load_instance(each.file)), each, quiet);
          },
          quiet);
      std::ostringstream line;
      line << "exit=" << code << " seconds=" << since(t0);
      p.kv(f.stem().string(), line.str());
    }
    return kYes;
  }

  int cmd_mihailova(Options const& o, Printer&) {
    Tokens sigma;
    std::stringstream ss(o.gens);
    for (std::string g; std::getline(ss, g, ',');) {
      if (!g.empty()) {
        sigma.push_back(g);
      }
    }
    std::vector<Tokens> rels;
    for (auto const& r : o.rels) {
      rels.push_back(split_tokens(r));
    }
    Tokens w = split_tokens(o.word);
    if (w.size() == 1 && w[0] == "_") {
      w.clear();
    }
    std::string text = print_instance(gen_mihailova(sigma, rels, w, o.blocks));
    if (o.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream(o.out) << text;
    }
    return kYes;
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knapsack and exponent equations over graph groups"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c, bool file = true) {
    if (file) {
      c->add_option("file", o.file, "instance file")->required();
    }
    c->add_option("--cap", o.cap,
                  "expansion cap (default 1000000) or search exponent cap (default 15)");
    c->add_option("--format", o.format, "text or machine")
        ->check(CLI::IsMember({"text", "machine"}));
  };
  auto* solve = app.add_subcommand("solve", "decide an equation, knapsack or automaton instance");
  common(solve);
  solve->add_option("--mode", o.mode, "auto, exact, search or relax")
      ->check(CLI::IsMember({"auto", "exact", "search", "relax"}));
  auto* verify = app.add_subcommand("verify", "check an assignment");
  common(verify);
  verify->add_option("--assign", o.assign, "x=3,y=1")->required();
  common(app.add_subcommand("bound", "print the solution-size bound"));
  common(app.add_subcommand("hnn", "membership over an HNN extension"));
  common(app.add_subcommand("amalgam", "membership over an amalgamated product"));
  common(app.add_subcommand("finite-ext", "solve an equation over a finite extension"));
  auto* bench = app.add_subcommand("bench", "run every .ggk instance in a directory");
  bench->add_option("dir", o.file, "corpus directory")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--format", o.format)->check(CLI::IsMember({"text", "machine"}));
  auto* mih = app.add_subcommand("mihailova", "emit a bounded submonoid instance");
  mih->add_option("--gens", o.gens, "comma-separated generators")->required();
  mih->add_option("--rel", o.rels, "relator word, repeatable");
  mih->add_option("--word", o.word, "word w, _ for empty")->required();
  mih->add_option("--cap", o.blocks, "number of factor blocks n");
  mih->add_option("--out", o.out, "output file");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kBadInput;
  }

  Printer p(std::cout, o.format == "machine");
  auto*   sub = app.get_subcommands().front();
  std::string const cmd = sub->get_name();
  auto const t0 = std::chrono::steady_clock::now();
  int        code;
  if (cmd == "bench") {
    code = guarded([&] { return cmd_bench(o, p); }, p);
  } else if (cmd == "mihailova") {
    code = guarded([&] { return cmd_mihailova(o, p); }, p);
    return code;
  } else {
    code = guarded([&] { return run_file(cmd, o, p); }, p);
  }
  p.kv("seconds", std::to_string(since(t0)));
  return code;
}
