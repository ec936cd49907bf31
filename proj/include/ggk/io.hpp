#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ggk/slp.hpp"
#include "ggk/solver.hpp"
#include "ggk/transfer.hpp"

namespace ggk {

  using Tokens = std::vector<std::string>;

  // Whitespace-separated generator names, inverses suffixed ', the empty
  // word spelled _. Generator g is letter 2g, its inverse 2g+1.
  Word        parse_word(Tokens const& tokens, Tokens const& gens);
  Word        parse_word(std::string_view text, Tokens const& gens);
  std::string format_word(Word const& w, Tokens const& gens);
  Tokens      split_tokens(std::string_view text);

  struct SlpDecl {
    std::string                                     start;
    std::vector<std::pair<std::string, Tokens>>     rules;
    bool operator==(SlpDecl const&) const = default;
  };

  struct GroupDecl {
    std::string                           name;
    std::string                           kind;  // cyclic integer free finite graph
    Tokens                                gens;
    std::size_t                           order = 0;
    std::vector<std::vector<std::size_t>> table;   // finite
    std::vector<std::size_t>              images;  // finite, per generator
    bool operator==(GroupDecl const&) const = default;
  };

  struct EqItem {
    enum Kind { Const, Pow, ConstS, PowS } kind = Const;
    Tokens      word;  // Const, Pow
    std::string slp;   // ConstS, PowS
    std::string var;   // Pow, PowS
    bool operator==(EqItem const&) const = default;
  };

  struct KaEdgeDecl {
    std::size_t from = 0, to = 0;
    Tokens      word;
    bool operator==(KaEdgeDecl const&) const = default;
  };

  struct HnnDecl {
    std::string         base;
    std::string         stable = "t";
    std::vector<Tokens> plus, minus;
    std::vector<std::pair<std::size_t, std::size_t>> phi;
    bool operator==(HnnDecl const&) const = default;
  };

  struct AmalgamDecl {
    std::string                          g0, g1;
    std::vector<std::pair<Tokens, Tokens>> f;
    bool operator==(AmalgamDecl const&) const = default;
  };

  struct ExtensionDecl {
    struct Rule {
      std::string coset, gen;  // gen may carry '
      Tokens      gword;
      std::string target;
      bool operator==(Rule const&) const = default;
    };
    std::string         base;
    Tokens              hgens;
    Tokens              cosets;
    std::vector<Rule>   rules;
    std::vector<Tokens> relations;
    bool operator==(ExtensionDecl const&) const = default;
  };

  struct Instance {
    enum class Problem { None, Equation, Knapsack, Automaton };

    Tokens                                       gens;
    std::vector<std::pair<std::string, std::string>> indep;
    Tokens                                       zvars;
    std::vector<SlpDecl>                         slps;
    std::vector<GroupDecl>                       groups;
    std::optional<HnnDecl>                       hnn;
    std::optional<AmalgamDecl>                   amalgam;
    std::optional<ExtensionDecl>                 extension;

    Problem             problem = Problem::None;
    std::vector<EqItem> items;    // Equation
    std::vector<Tokens> elems;    // Knapsack
    Tokens              target;   // Knapsack, Automaton
    std::size_t         states  = 0;  // Automaton
    std::size_t         initial = 0;
    std::vector<std::size_t> finals;
    std::vector<KaEdgeDecl>  edges;

    bool operator==(Instance const&) const = default;
  };

  // Throws ParseError with the line and column of the offending token.
  Instance    parse_instance(std::string_view text);
  std::string print_instance(Instance const& inst);
  Instance    load_instance(std::string const& path);

  // Builders from a parsed instance. Unknown names raise PreconditionError.
  DoubledPtr       build_alphabet(Instance const& inst);
  Slp              build_slp(SlpDecl const& d);
  // Equation or knapsack problems over the graph group; SLP constants are
  // expanded up to cap letters.
  ExponentEquation build_equation(Instance const& inst, natural const& cap);
  OraclePtr        build_group(Instance const& inst, std::string const& name);
  // Knapsack or automaton problems over the given letter names.
  KnapsackAutomaton build_automaton(Instance const& inst, Tokens const& gens,
                                    Word& target);
  HnnPresentation  build_hnn(Instance const& inst);
  Amalgam          build_amalgam(Instance const& inst);
  FiniteExtension  build_extension(Instance const& inst);
  // The equation over the extension's generators; variables must be
  // distinct.
  WordEquation     build_word_equation(Instance const& inst);

  // x=3,y=2 against the equation's variables.
  Assignment parse_assignment(std::string_view text, ExponentEquation const& e);

  // Asks whether (w,1) lies in D^n for n <= cap over F(sigma) x F(sigma).
  Instance gen_mihailova(Tokens const& sigma, std::vector<Tokens> const& rels,
                         Tokens const& w, std::size_t cap);

}  // namespace ggk
