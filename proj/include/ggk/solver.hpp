#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ggk/group.hpp"
#include "ggk/natural.hpp"
#include "ggk/semilinear.hpp"

namespace ggk {

  using VarId      = std::size_t;
  using Assignment = std::vector<natural>;  // indexed by VarId

  struct EquationItem {
    GroupElement         element;
    std::optional<VarId> var;  // set for a power element^var

    bool is_power() const { return var.has_value(); }
  };

  // v0 u1^x1 v1 ... un^xn vn = 1 over a graph group.
  class ExponentEquation {
   public:
    ExponentEquation() = default;
    explicit ExponentEquation(DoubledPtr group) : group_(std::move(group)) {}

    DoubledPtr const&  group() const { return group_; }
    AlphabetPtr const& letters() const { return group_->letters(); }

    VarId add_var(std::string name, bool integer = false);
    std::optional<VarId> find_var(std::string const& name) const;
    std::size_t          num_vars() const { return names_.size(); }
    std::string const&   var_name(VarId v) const { return names_.at(v); }
    bool                 is_integer_var(VarId v) const { return integer_.at(v); }
    bool                 has_integer_vars() const;

    void add_const(GroupElement g);
    void add_power(GroupElement base, VarId var);

    std::vector<EquationItem> const& items() const { return items_; }
    std::size_t                      num_powers() const;

    // Bases and constants as words, for the abelian and brute-force views.
    std::string str() const;

   private:
    DoubledPtr                group_;
    std::vector<EquationItem> items_;
    std::vector<std::string>  names_;
    std::vector<bool>         integer_;
  };

  // Alternating view: consts.size() == powers.size() + 1.
  struct AlternatingForm {
    std::vector<GroupElement> consts;
    std::vector<EquationItem> powers;
  };
  AlternatingForm alternating(ExponentEquation const& e);

  // Cyclically reduced, connected, nontrivial power bases.
  ExponentEquation preprocess(ExponentEquation const& e);

  bool verify(ExponentEquation const& e, Assignment const& a,
              natural const& cap);

  // Letter balance per base generator; unknowns are the variables.
  DiophantineSystem abelian_relaxation(ExponentEquation const& e);

  std::vector<Assignment> brute_oracle(ExponentEquation const& e,
                                       std::size_t             cap);

  // Each integer variable x becomes x - y with a fresh natural y.
  struct IntegerRewrite {
    ExponentEquation                           equation;
    std::vector<std::pair<VarId, VarId>>       split;  // (x, y) per integer var
  };
  IntegerRewrite z_to_n_rewrite(ExponentEquation const& e);

  // u1^x1 ... un^xn = u with distinct variables x1..xn.
  ExponentEquation knapsack_to_equation(DoubledPtr                       group,
                                        std::vector<GroupElement> const& us,
                                        GroupElement const&              u);

  struct BoundReport {
    std::optional<natural> value;  // absent when too large to print
    std::string            formula;
    std::string            label = "HEURISTIC";
  };
  BoundReport solution_bound(ExponentEquation const& e);

  enum class SolveStatus { Solvable, Unsolvable, Unknown };

  struct SolveReport {
    SolveStatus                  status = SolveStatus::Unknown;
    std::optional<Assignment>    witness;
    std::optional<SemilinearSet> solution_set;
    bool                         exhaustive = false;
    std::string                  reason;
    double                       seconds = 0;
  };

  char const* to_string(SolveStatus s);

  struct ExactLimits {
    std::size_t max_powers = 2;
    natural     cap        = 1000000;
  };

  SolveReport solve_exact(ExponentEquation const& e,
                          ExactLimits const&      limits = {});
  SolveReport solve_search(ExponentEquation const& e, std::size_t cap,
                           natural const& verify_cap = 1000000);
  // Unsolvable iff the abelian relaxation has no solution, else Unknown.
  SolveReport solve_relax(ExponentEquation const& e);

  // Rewriting steps on sequences of irreducible traces.
  struct ReductionStep {
    enum Kind { Swap, Cancel, Drop } kind;
    std::size_t pos;  // Swap: pos,pos+1; Cancel: pos,pos+1; Drop: pos
  };

  struct Reduction {
    std::vector<ReductionStep> steps;
    // Cancelled pairs as indices into the original sequence.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
  };

  std::optional<Reduction> is_i_freely_reducible(
      std::vector<GroupElement> const& seq);
  // Replays steps; true iff every step is legal and the result is empty.
  bool check_reduction(std::vector<GroupElement> const&  seq,
                       std::vector<ReductionStep> const& steps);

  struct Refinement {
    std::vector<std::vector<GroupElement>> factors;  // one list per entry
    Reduction                              reduction;  // of the flattened list
    std::size_t                            parts() const;
    std::vector<GroupElement>              flattened() const;
  };

  std::optional<Refinement> refine_to_reducible(
      std::vector<GroupElement> const& seq);

  // For u^x = y1 y2: y1 = u^l s, y2 = p u^k, s p = u^c, l + k + c = x.
  struct PowerSplit {
    std::size_t l = 0, k = 0, c = 0;
    Trace       s, p;
  };
  std::optional<PowerSplit> power_two_factorization(Trace const& u,
                                                    std::size_t  x,
                                                    Trace const& y1,
                                                    Trace const& y2);

}  // namespace ggk
