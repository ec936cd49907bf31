#include <algorithm>
#include <set>

#include "ggk/errors.hpp"
#include "ggk/io.hpp"

namespace ggk {

  DoubledPtr build_alphabet(Instance const& inst) {
    auto base = std::make_shared<IndependenceAlphabet>(inst.gens);
    for (auto const& [a, b] : inst.indep) {
      base->set_independent(*base->find(a), *base->find(b));
    }
    return make_doubled(base);
  }

  Slp build_slp(SlpDecl const& d) {
    Slp g;
    for (auto const& [v, rhs] : d.rules) {
      if (g.find(v) >= 0) {
        throw StructureError("SLP variable " + v + " has two rules");
      }
      g.add_variable(v);
    }
    for (auto const& [v, rhs] : d.rules) {
      std::vector<SlpSymbol> syms;
      for (auto const& t : rhs) {
        if (std::isupper(static_cast<unsigned char>(t[0]))) {
          int var = g.find(t);
          if (var < 0) {
            throw StructureError("SLP variable " + t + " has no rule");
          }
          syms.push_back(SlpSymbol::variable(var));
        } else {
          syms.push_back(SlpSymbol::letter(t));
        }
      }
      g.set_rhs(g.find(v), std::move(syms));
    }
    int start = g.find(d.start);
    if (start < 0) {
      throw StructureError("SLP start " + d.start + " has no rule");
    }
    g.set_start(start);
    g.topological_order();
    return g;
  }

  namespace {
    SlpDecl const& find_slp(Instance const& inst, std::string const& name) {
      for (auto const& s : inst.slps) {
        if (s.start == name) {
          return s;
        }
      }
      throw PreconditionError("unknown slp " + name);
    }
  }  // namespace

  ExponentEquation build_equation(Instance const& inst, natural const& cap) {
    DoubledPtr  d       = build_alphabet(inst);
    auto const& letters = d->letters();
    auto        elem    = [&](Tokens const& w) {
      return reduce_word(letters, parse_word(w, inst.gens));
    };
    if (inst.problem == Instance::Problem::Knapsack) {
      std::vector<GroupElement> us;
      for (auto const& w : inst.elems) {
        us.push_back(elem(w));
      }
      return knapsack_to_equation(d, us, elem(inst.target));
    }
    if (inst.problem != Instance::Problem::Equation) {
      throw PreconditionError("instance has no equation or knapsack block");
    }
    ExponentEquation e(d);
    std::set<std::string> z(inst.zvars.begin(), inst.zvars.end());
    auto var = [&](std::string const& name) {
      if (auto v = e.find_var(name)) {
        return *v;
      }
      return e.add_var(name, z.count(name) > 0);
    };
    for (auto const& it : inst.items) {
      GroupElement g;
      if (it.kind == EqItem::ConstS || it.kind == EqItem::PowS) {
        g = elem(expand_capped(build_slp(find_slp(inst, it.slp)), cap));
      } else {
        g = elem(it.word);
      }
      if (it.kind == EqItem::Const || it.kind == EqItem::ConstS) {
        e.add_const(std::move(g));
      } else {
        e.add_power(std::move(g), var(it.var));
      }
    }
    for (auto const& name : inst.zvars) {
      if (!e.find_var(name)) {
        throw PreconditionError("integer variable " + name + " does not occur");
      }
    }
    return e;
  }

  OraclePtr build_group(Instance const& inst, std::string const& name) {
    for (auto const& g : inst.groups) {
      if (g.name != name) {
        continue;
      }
      if (g.kind == "cyclic") {
        return FiniteGroupOracle::cyclic(g.order, g.gens[0]);
      }
      if (g.kind == "integer") {
        return std::make_shared<IntegerOracle>(g.gens[0]);
      }
      if (g.kind == "free") {
        return std::make_shared<FreeGroupOracle>(g.gens);
      }
      if (g.kind == "graph") {
        return std::make_shared<GraphGroupOracle>(build_alphabet(inst));
      }
      return std::make_shared<FiniteGroupOracle>(g.gens, g.table, g.images);
    }
    throw PreconditionError("unknown group " + name);
  }

  KnapsackAutomaton build_automaton(Instance const& inst, Tokens const& gens,
                                    Word& target) {
    target = parse_word(inst.target, gens);
    if (inst.problem == Instance::Problem::Knapsack) {
      std::vector<Word> ws;
      for (auto const& w : inst.elems) {
        ws.push_back(parse_word(w, gens));
      }
      return knapsack_to_ka(ws);
    }
    if (inst.problem != Instance::Problem::Automaton) {
      throw PreconditionError("instance has no knapsack or ka block");
    }
    KnapsackAutomaton ka;
    for (std::size_t q = 0; q < inst.states; ++q) {
      ka.add_state();
    }
    ka.set_initial(static_cast<State>(inst.initial));
    for (auto q : inst.finals) {
      ka.set_final(static_cast<State>(q));
    }
    for (auto const& e : inst.edges) {
      ka.add_edge(static_cast<State>(e.from), parse_word(e.word, gens),
                  static_cast<State>(e.to));
    }
    if (auto err = ka.shape_error(); !err.empty()) {
      throw StructureError("not a knapsack automaton: " + err);
    }
    return ka;
  }

  HnnPresentation build_hnn(Instance const& inst) {
    if (!inst.hnn) {
      throw PreconditionError("instance has no hnn block");
    }
    auto const&     d = *inst.hnn;
    HnnPresentation h;
    h.base   = build_group(inst, d.base);
    h.stable = d.stable;
    for (auto const& w : d.plus) {
      h.sub_plus.push_back(parse_word(w, h.base->gens()));
    }
    for (auto const& w : d.minus) {
      h.sub_minus.push_back(parse_word(w, h.base->gens()));
    }
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    h.phi.assign(h.sub_plus.size(), kUnset);
    for (auto [i, j] : d.phi) {
      if (i >= h.phi.size() || h.phi[i] != kUnset) {
        throw StructureError("phi pair " + std::to_string(i) + " is out of range or repeated");
      }
      h.phi[i] = j;
    }
    if (std::count(h.phi.begin(), h.phi.end(), kUnset)) {
      throw StructureError("phi is not defined on all of A(+1)");
    }
    h.validate();
    return h;
  }

  Amalgam build_amalgam(Instance const& inst) {
    if (!inst.amalgam) {
      throw PreconditionError("instance has no amalgam block");
    }
    Amalgam am;
    am.g0 = build_group(inst, inst.amalgam->g0);
    am.g1 = build_group(inst, inst.amalgam->g1);
    for (auto const& n : am.g0->gens()) {
      if (am.g1->find_gen(n)) {
        throw PreconditionError("amalgam factors share the generator name " + n);
      }
    }
    for (auto const& [a, b] : inst.amalgam->f) {
      am.f0.push_back(parse_word(a, am.g0->gens()));
      am.f1.push_back(parse_word(b, am.g1->gens()));
    }
    return am;
  }

  FiniteExtension build_extension(Instance const& inst) {
    if (!inst.extension) {
      throw PreconditionError("instance has no extension block");
    }
    auto const&     d = *inst.extension;
    OraclePtr       g = build_group(inst, d.base);
    FiniteExtension fe;
    fe.gens   = d.hgens;
    fe.cosets = d.cosets;
    std::vector<std::vector<std::optional<std::pair<Word, std::size_t>>>> table(
        d.cosets.size(),
        std::vector<std::optional<std::pair<Word, std::size_t>>>(2 * d.hgens.size()));
    auto coset = [&](std::string const& c) {
      return static_cast<std::size_t>(
          std::find(d.cosets.begin(), d.cosets.end(), c) - d.cosets.begin());
    };
    for (auto const& r : d.rules) {
      Word  x = parse_word(Tokens{r.gen}, d.hgens);
      auto& slot = table[coset(r.coset)][x[0]];
      if (slot) {
        throw StructureError("two rules for coset " + r.coset + " gen " + r.gen);
      }
      slot.emplace(parse_word(r.gword, g->gens()), coset(r.target));
    }
    for (std::size_t c = 0; c < table.size(); ++c) {
      fe.rules.emplace_back();
      for (std::size_t x = 0; x < table[c].size(); ++x) {
        if (!table[c][x]) {
          throw StructureError("rewriting table lacks coset " + d.cosets[c] + " gen "
                               + format_word({static_cast<Letter>(x)}, d.hgens));
        }
        fe.rules.back().push_back(*table[c][x]);
      }
    }
    for (auto const& r : d.relations) {
      fe.relations.push_back(parse_word(r, d.hgens));
    }
    fe.validate(*g);
    return fe;
  }

  WordEquation build_word_equation(Instance const& inst) {
    if (!inst.extension || inst.problem != Instance::Problem::Equation) {
      throw PreconditionError("finite-extension instances need an extension and an eq block");
    }
    if (!inst.zvars.empty()) {
      throw PreconditionError("finite-extension instances take natural exponents only");
    }
    WordEquation          e;
    std::set<std::string> seen;
    e.consts.emplace_back();
    for (auto const& it : inst.items) {
      if (it.kind == EqItem::ConstS || it.kind == EqItem::PowS) {
        throw PreconditionError("compressed items are not supported over finite extensions");
      }
      Word w = parse_word(it.word, inst.extension->hgens);
      if (it.kind == EqItem::Const) {
        e.consts.back().insert(e.consts.back().end(), w.begin(), w.end());
        continue;
      }
      if (!seen.insert(it.var).second) {
        throw PreconditionError(
            "variable " + it.var
            + " repeats; finite-extension reduction needs each variable once, "
              "so substitute a fresh variable per occurrence and constrain them "
              "over the base group instead");
      }
      e.bases.push_back(std::move(w));
      e.consts.emplace_back();
    }
    return e;
  }

  Assignment parse_assignment(std::string_view text, ExponentEquation const& e) {
    Assignment        a(e.num_vars());
    std::vector<bool> given(e.num_vars(), false);
    std::string       s(text);
    std::size_t       pos = 0;
    while (pos < s.size()) {
      std::size_t comma = s.find(',', pos);
      std::string part  = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos);
      pos = comma == std::string::npos ? s.size() : comma + 1;
      std::size_t eq = part.find('=');
      if (eq == std::string::npos) {
        throw PreconditionError("assignment entries look like x=3");
      }
      std::string name = part.substr(0, eq);
      auto        v    = e.find_var(name);
      if (!v) {
        throw PreconditionError("unknown variable " + name);
      }
      try {
        a[*v] = natural(part.substr(eq + 1));
      } catch (std::exception const&) {
        throw PreconditionError("bad value for " + name);
      }
      if (a[*v] < 0 && !e.is_integer_var(*v)) {
        throw PreconditionError("variable " + name + " is natural");
      }
      given[*v] = true;
    }
    for (VarId v = 0; v < e.num_vars(); ++v) {
      if (!given[v]) {
        throw PreconditionError("no value for variable " + e.var_name(v));
      }
    }
    return a;
  }

  Instance gen_mihailova(Tokens const& sigma, std::vector<Tokens> const& rels,
                         Tokens const& w, std::size_t cap) {
    Instance inst;
    for (auto const& side : {"_l", "_r"}) {
      for (auto const& s : sigma) {
        inst.gens.push_back(s + side);
      }
    }
    for (auto const& a : sigma) {
      for (auto const& b : sigma) {
        inst.indep.emplace_back(a + "_l", b + "_r");
      }
    }
    auto copy = [&](Tokens const& word, std::string const& side, bool inverse) {
      Tokens out;
      for (auto const& t : word) {
        bool        inv  = !t.empty() && t.back() == '\'';
        std::string name = inv ? t.substr(0, t.size() - 1) : t;
        if (std::find(sigma.begin(), sigma.end(), name) == sigma.end()) {
          throw PreconditionError("unknown generator '" + name + "'");
        }
        out.push_back(name + side + ((inv != inverse) ? "'" : ""));
      }
      if (inverse) {
        std::reverse(out.begin(), out.end());
      }
      return out;
    };
    std::vector<Tokens> d;
    auto add = [&](Tokens t) {
      if (std::find(d.begin(), d.end(), t) == d.end()) {
        d.push_back(std::move(t));
      }
    };
    for (auto const& r : rels) {
      add(copy(r, "_l", false));
      add(copy(r, "_l", true));
    }
    for (auto const& a : sigma) {
      add({a + "_l", a + "_r"});
      add({a + "_l'", a + "_r'"});
    }
    inst.problem = Instance::Problem::Knapsack;
    for (std::size_t i = 0; i < cap; ++i) {
      inst.elems.insert(inst.elems.end(), d.begin(), d.end());
    }
    inst.target = copy(w, "_l", false);
    return inst;
  }

}  // namespace ggk
