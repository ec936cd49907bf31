#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ggk/automata.hpp"
#include "ggk/solver.hpp"

namespace ggk {

  // Words over a group's generators use letter 2g for generator g and
  // 2g+1 for its inverse, matching DoubledAlphabet.

  struct KaEdge {
    State from;
    Word  label;  // empty label is the empty word
    State to;
  };

  // Automaton with word labels whose strongly connected components are
  // singletons or induced cycles.
  class KnapsackAutomaton {
   public:
    State add_state(bool final = false);
    void  add_edge(State from, Word label, State to);
    void  set_initial(State q) { initial_ = q; }
    void  set_final(State q, bool f = true) { final_.at(q) = f; }

    std::size_t                num_states() const { return final_.size(); }
    State                      initial() const { return initial_; }
    bool                       is_final(State q) const { return final_[q]; }
    std::vector<KaEdge> const& edges() const { return edges_; }
    std::vector<KaEdge>&       edges() { return edges_; }

    // Component id per state; ids are in reverse topological order.
    std::vector<std::size_t> components() const;
    // Each nontrivial component as its states in cycle order, paired with
    // the indices of the cycle edges (edge k leaves states[k]).
    struct Cycle {
      std::vector<State>       states;
      std::vector<std::size_t> edges;
    };
    std::vector<Cycle> cycles() const;
    bool               on_cycle(State q) const;

    // Empty when the shape is valid, else a description of the violation.
    std::string shape_error() const;
    bool        valid_shape() const { return shape_error().empty(); }

    // Labels of accepted paths with at most max_edges edges, concatenated.
    std::vector<Word> accepted_upto(std::size_t max_edges) const;

    // Copy keeping only the edges satisfying keep.
    KnapsackAutomaton restricted(
        std::function<bool(KaEdge const&)> const& keep) const;
    // Copy with the given initial and single final state.
    KnapsackAutomaton between(State p, State q) const;

    std::string dump() const;

   private:
    std::vector<bool>   final_;
    std::vector<KaEdge> edges_;
    State               initial_ = 0;
  };

  // Accepts w1* ... wk*; membership of w decides the knapsack instance.
  KnapsackAutomaton knapsack_to_ka(std::vector<Word> const& ws);
  // Accepts v0 u1* v1 ... un* vn.
  KnapsackAutomaton chain_ka(std::vector<Word> const& consts,
                             std::vector<Word> const& bases);
  // First reads w, then behaves like ka.
  KnapsackAutomaton prepend(KnapsackAutomaton const& ka, Word const& w);

  // A run shape: v0 u1^x1 v1 ... un^xn vn with distinct variables.
  struct Skeleton {
    std::vector<Word> consts;  // n + 1 entries
    std::vector<Word> bases;   // n entries
  };
  // Calls visit on every skeleton until it returns true; returns whether
  // some call did.
  bool for_each_skeleton(KnapsackAutomaton const&                    ka,
                         Word const&                                 prefix,
                         std::function<bool(Skeleton const&)> const& visit);
  std::vector<ExponentEquation> skeleton_equations(KnapsackAutomaton const& ka,
                                                   Word const&    prefix,
                                                   DoubledPtr const& group);
  ExponentEquation skeleton_equation(Skeleton const& s, DoubledPtr const& group);

  class GroupOracle {
   public:
    explicit GroupOracle(std::vector<std::string> gens)
        : gens_(std::move(gens)) {}
    virtual ~GroupOracle() = default;

    std::size_t                      num_gens() const { return gens_.size(); }
    std::vector<std::string> const&  gens() const { return gens_; }
    std::optional<std::size_t>       find_gen(std::string const& name) const;

    virtual std::string kind() const = 0;
    virtual bool        is_identity(Word const& w) const = 0;
    // Does ka accept a word equal to target in the group?
    virtual bool ka_membership(KnapsackAutomaton const& ka,
                               Word const&              target) const = 0;

   private:
    std::vector<std::string> gens_;
  };

  using OraclePtr = std::shared_ptr<GroupOracle const>;

  class FiniteGroupOracle : public GroupOracle {
   public:
    // Elements 0..n-1 with identity 0; gen_images[g] is the element of g.
    FiniteGroupOracle(std::vector<std::string>              gens,
                      std::vector<std::vector<std::size_t>> table,
                      std::vector<std::size_t>              gen_images);
    static std::shared_ptr<FiniteGroupOracle> cyclic(std::size_t n,
                                                     std::string gen);

    std::string kind() const override { return "finite"; }
    bool        is_identity(Word const& w) const override;
    bool        ka_membership(KnapsackAutomaton const& ka,
                              Word const&              target) const override;

    std::size_t order() const { return table_.size(); }
    std::size_t evaluate(Word const& w) const;
    std::size_t multiply(std::size_t x, std::size_t y) const {
      return table_[x][y];
    }

   private:
    std::vector<std::vector<std::size_t>> table_;
    std::vector<std::size_t>              letter_;  // per letter
  };

  class IntegerOracle : public GroupOracle {
   public:
    explicit IntegerOracle(std::string gen = "a")
        : GroupOracle({std::move(gen)}) {}
    std::string  kind() const override { return "Z"; }
    bool         is_identity(Word const& w) const override;
    bool         ka_membership(KnapsackAutomaton const& ka,
                               Word const&              target) const override;
    std::int64_t value(Word const& w) const;
  };

  class FreeGroupOracle : public GroupOracle {
   public:
    explicit FreeGroupOracle(std::vector<std::string> gens);
    std::string kind() const override { return "free"; }
    bool        is_identity(Word const& w) const override;
    bool        ka_membership(KnapsackAutomaton const& ka,
                              Word const&              target) const override;
    Nfa         to_nfa(KnapsackAutomaton const& ka) const;

   private:
    DoubledPtr group_;
  };

  class GraphGroupOracle : public GroupOracle {
   public:
    explicit GraphGroupOracle(DoubledPtr group, std::size_t search_cap = 12);
    std::string kind() const override { return "graph"; }
    bool        is_identity(Word const& w) const override;
    // Throws LimitsExceeded when some skeleton is beyond the exact solver
    // and bounded search finds nothing.
    bool        ka_membership(KnapsackAutomaton const& ka,
                              Word const&              target) const override;
    DoubledPtr const& group() const { return group_; }

   private:
    DoubledPtr  group_;
    std::size_t search_cap_;
  };

  // G0 * G1 with the generators of G0 first.
  class FreeProductOracle : public GroupOracle {
   public:
    FreeProductOracle(OraclePtr g0, OraclePtr g1);
    std::string kind() const override { return "free-product"; }
    bool        is_identity(Word const& w) const override;
    bool        ka_membership(KnapsackAutomaton const& ka,
                              Word const&              target) const override;

    OraclePtr const& factor(int i) const { return i == 0 ? g0_ : g1_; }
    // Factor of a letter, or -1 for letters outside both.
    int  factor_of(Letter x) const;
    Word local(Word const& w) const;  // letters renumbered within a factor
    Word global(int factor, Word const& w) const;

   private:
    OraclePtr g0_, g1_;
  };

  // Step counters and assertions of a saturation run.
  struct SaturationStats {
    std::size_t phase1_steps   = 0;
    std::size_t phase2_edges   = 0;
    std::size_t shape_checks   = 0;
  };

  bool free_product_saturate(OraclePtr const& g0, OraclePtr const& g1,
                             KnapsackAutomaton const& ka,
                             SaturationStats*         stats = nullptr);

  // Enforces: no edge joins two distinct cycles, and the initial and final
  // states lie on no cycle. The accepted language is unchanged.
  KnapsackAutomaton hnn_normalize(KnapsackAutomaton const& ka);

  struct HnnPresentation {
    OraclePtr         base;
    std::vector<Word> sub_plus;   // A(+1), the domain of phi
    std::vector<Word> sub_minus;  // A(-1)
    std::vector<std::size_t> phi;  // sub_plus[i] maps to sub_minus[phi[i]]
    std::string       stable = "t";

    Letter t() const { return static_cast<Letter>(2 * base->num_gens()); }
    std::vector<Word> const& sub(int alpha) const {
      return alpha > 0 ? sub_plus : sub_minus;
    }
    // Index of the element of A(alpha) equal to w, if any.
    std::optional<std::size_t> classify(Word const& w, int alpha) const;
    // phi^alpha of the element with index i of A(alpha).
    Word const& image(std::size_t i, int alpha) const;
    // Throws StructureError when phi is not an isomorphism of subgroups.
    void validate() const;
  };

  bool hnn_saturate(HnnPresentation const& h, KnapsackAutomaton const& ka,
                    SaturationStats* stats = nullptr);

  // Base letters first, then t.
  class HnnOracle : public GroupOracle {
   public:
    explicit HnnOracle(HnnPresentation h);
    std::string kind() const override { return "hnn"; }
    bool        is_identity(Word const& w) const override;
    bool        ka_membership(KnapsackAutomaton const& ka,
                              Word const&              target) const override;
    HnnPresentation const& presentation() const { return h_; }

   private:
    HnnPresentation h_;
  };

  // Embeds G0 *_F G1 into <G0 * G1, t | t^-1 phi0(f) t = phi1(f)>.
  struct Amalgam {
    OraclePtr         g0, g1;
    std::vector<Word> f0;  // phi0(f) over G0, one per element of F
    std::vector<Word> f1;  // phi1(f) over G1, same order
  };
  HnnPresentation amalgam_to_hnn(Amalgam const& am);
  // g in G0 becomes t^-1 g t, g in G1 stays; letters are those of G0 * G1.
  Word amalgam_embed(Amalgam const& am, Word const& w);

  struct FiniteExtension {
    std::vector<std::string> gens;    // generators of H
    std::vector<std::string> cosets;  // cosets[0] is the trivial coset
    // rules[c][x] for letter x of H: c x = g c' with g over G's letters.
    std::vector<std::vector<std::pair<Word, std::size_t>>> rules;
    std::vector<Word>        relations;  // words over H equal to 1

    std::size_t index() const { return cosets.size(); }
    // Rewrites c w as g c'.
    std::pair<Word, std::size_t> rewrite(std::size_t c, Word const& w) const;
    // Throws StructureError when the table is partial or contradicts the
    // group relations.
    void validate(GroupOracle const& g) const;
    bool is_identity(GroupOracle const& g, Word const& w) const;
  };

  // The instance v0 u1^x1 v1 ... un^xn vn = 1 over H, variables distinct.
  struct WordEquation {
    std::vector<Word> consts;
    std::vector<Word> bases;
  };

  struct FiniteExtStats {
    std::size_t branches = 0;
    std::size_t g_calls  = 0;
  };

  bool finite_ext_reduce(FiniteExtension const& fe, WordEquation const& e,
                         GroupOracle const& g, FiniteExtStats* stats = nullptr);

}  // namespace ggk
