#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ggk/natural.hpp"

namespace ggk {

  using Letter    = std::uint32_t;
  using Word      = std::vector<Letter>;
  using LetterSet = std::uint64_t;  // bitmask; alphabets hold at most 64 letters

  constexpr std::size_t kMaxLetters = 64;

  inline LetterSet bit(Letter a) { return LetterSet{1} << a; }

  // Finite ordered alphabet with an irreflexive symmetric independence
  // relation. Letter order is the index order.
  class IndependenceAlphabet {
   public:
    IndependenceAlphabet() = default;
    explicit IndependenceAlphabet(std::vector<std::string> names);

    Letter add_letter(std::string name);
    void   set_independent(Letter a, Letter b);

    std::size_t        size() const { return names_.size(); }
    std::string const& name(Letter a) const { return names_.at(a); }
    std::optional<Letter> find(std::string_view name) const;

    bool independent(Letter a, Letter b) const {
      return (indep_[a] >> b) & 1U;
    }
    // Every letter of x is independent of every letter of y.
    bool independent(LetterSet x, LetterSet y) const;
    LetterSet independent_of(Letter a) const { return indep_[a]; }
    // Letters dependent on a, including a itself.
    LetterSet dependent_on(Letter a) const {
      return ~indep_[a] & all_letters();
    }
    LetterSet all_letters() const;
    bool      has_independence() const;

    // Size of a largest set of pairwise independent letters.
    std::size_t max_independent_set() const;

    bool operator==(IndependenceAlphabet const& other) const {
      return names_ == other.names_ && indep_ == other.indep_;
    }

   private:
    std::vector<std::string> names_;
    std::vector<LetterSet>   indep_;
  };

  using AlphabetPtr = std::shared_ptr<IndependenceAlphabet const>;

  bool same_alphabet(AlphabetPtr const& a, AlphabetPtr const& b);

  // Canonical representative of a trace: the lexicographically least
  // linearization under the alphabet order.
  class Trace {
   public:
    Trace() = default;
    Trace(AlphabetPtr alphabet, Word const& raw);

    // Wraps a word already known to be canonical.
    static Trace from_canonical(AlphabetPtr alphabet, Word canonical);

    AlphabetPtr const& alphabet() const { return alphabet_; }
    Word const&        word() const { return word_; }
    std::size_t        size() const { return word_.size(); }
    bool               empty() const { return word_.empty(); }
    LetterSet          alph() const;
    std::string        str() const;

    bool operator==(Trace const& other) const { return word_ == other.word_; }
    bool operator!=(Trace const& other) const { return !(*this == other); }
    bool operator<(Trace const& other) const { return word_ < other.word_; }

    Trace operator*(Trace const& other) const;

   private:
    AlphabetPtr alphabet_;
    Word        word_;
  };

  struct TraceHash {
    std::size_t operator()(Trace const& t) const;
  };

  Trace normal_form(AlphabetPtr const& alphabet, Word const& raw);
  Word  canonical_word(IndependenceAlphabet const& alphabet, Word const& raw);

  // Throws PreconditionError when the alphabets differ.
  bool trace_equal(Trace const& s, Trace const& t);

  Trace power(Trace const& t, std::size_t k);

  // Result r with t = prefix r, if prefix is a prefix of t.
  std::optional<Trace> left_quotient(Trace const& prefix, Trace const& t);
  // Result r with t = r suffix, if suffix is a suffix of t.
  std::optional<Trace> right_quotient(Trace const& t, Trace const& suffix);

  natural            prefix_count(Trace const& t);
  std::vector<Trace> prefixes(Trace const& t);

  bool               is_connected(Trace const& t);
  std::vector<Trace> connected_components(Trace const& t);

  // cells(i, j) with column products us[i] and row products vs[j].
  struct LeviGrid {
    std::size_t        cols = 0;  // number of us
    std::size_t        rows = 0;  // number of vs
    std::vector<Trace> cells;
    Trace const&       at(std::size_t i, std::size_t j) const {
      return cells[i * rows + j];
    }
  };

  std::optional<LeviGrid> levi_decompose(std::vector<Trace> const& us,
                                         std::vector<Trace> const& vs);

  // Prefix lattice of a trace: prefixes keyed by their letter counts.
  struct PrefixLattice {
    std::vector<Trace> traces;  // traces[0] = empty, traces.back() = t
    // next[i][a] = index of traces[i]·a when that is a prefix, else -1
    std::vector<std::vector<int>> next;
    std::size_t                   full = 0;
  };

  PrefixLattice prefix_lattice(Trace const& t);

}  // namespace ggk
