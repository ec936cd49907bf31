#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ggk/trace.hpp"

namespace ggk {

  using State = std::uint32_t;

  constexpr int kEpsilon = -1;

  struct Transition {
    State from;
    int   label;  // letter index or kEpsilon
    State to;
    auto  operator<=>(Transition const&) const = default;
  };

  // Nondeterministic automaton over the letters of an independence
  // alphabet, or over a single unary letter when alphabet is null.
  class Nfa {
   public:
    Nfa() = default;
    explicit Nfa(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {}

    static Nfa unary();

    AlphabetPtr const& alphabet() const { return alphabet_; }
    std::size_t        num_letters() const {
      return alphabet_ ? alphabet_->size() : 1;
    }

    State add_state(bool final = false);
    void  add_transition(State from, int label, State to);
    void  set_initial(State q) { initial_ = q; }
    void  set_final(State q, bool f = true) { final_.at(q) = f; }

    std::size_t num_states() const { return out_.size(); }
    State       initial() const { return initial_; }
    bool        is_final(State q) const { return final_[q]; }
    std::vector<std::pair<int, State>> const& out(State q) const {
      return out_[q];
    }
    std::vector<Transition> transitions() const;
    std::size_t             num_transitions() const;
    bool                    has_epsilon() const;

    bool accepts(Word const& w) const;
    // All accepted words of length at most n, sorted.
    std::vector<Word> language_upto(std::size_t n) const;

    // Certificates, set by constructions and checked by the validators.
    bool i_diamond = false;
    std::optional<std::vector<LetterSet>> memorizing;

    std::string dump() const;

   private:
    AlphabetPtr                                     alphabet_;
    std::vector<std::vector<std::pair<int, State>>> out_;
    std::vector<bool>                               final_;
    State                                           initial_ = 0;
  };

  bool check_i_diamond(Nfa const& a);
  bool check_memorizing(Nfa const& a);

  Nfa prefix_nfa(Trace const& t);
  Nfa star_nfa(Trace const& u, bool memorize);
  Nfa concat_closure(Nfa const& a1, Nfa const& a2);
  Nfa power_closure_nfa(Trace const& p, Trace const& u, Trace const& s);

  // Full product with k·l states.
  Nfa intersect(Nfa const& a, Nfa const& b);
  // Product restricted to pairs reachable from the initial pair.
  Nfa intersect_reachable(Nfa const& a, Nfa const& b);
  // Keeps the initial state and the states that are both reachable and
  // co-reachable.
  Nfa trim(Nfa const& a);

  Nfa length_automaton(Nfa const& a);

  struct Progression {
    std::uint64_t offset = 0;
    std::uint64_t period = 0;  // 0 means the singleton {offset}
    bool contains(std::uint64_t n) const {
      return period == 0 ? n == offset
                         : n >= offset && (n - offset) % period == 0;
    }
    auto operator<=>(Progression const&) const = default;
  };

  std::vector<Progression> unary_progressions(Nfa const& u);

  // Free-group saturation; the alphabet must be a doubled alphabet with
  // empty independence.
  Nfa  benois_saturate(Nfa const& a);
  bool benois_member(Nfa const& a, Word const& w);

  // Words of a trace language: all linearizations of the given traces.
  std::vector<Word> linearizations(Trace const& t);

}  // namespace ggk
