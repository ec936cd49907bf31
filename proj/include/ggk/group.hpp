#pragma once

#include <memory>
#include <utility>

#include "ggk/natural.hpp"
#include "ggk/trace.hpp"

namespace ggk {

  // Base letters a_i become 2i, their inverses a_i' become 2i+1, so the
  // inverse of a doubled letter x is x ^ 1.
  class DoubledAlphabet {
   public:
    explicit DoubledAlphabet(AlphabetPtr base);

    AlphabetPtr const& base() const { return base_; }
    AlphabetPtr const& letters() const { return letters_; }
    std::size_t        size() const { return letters_->size(); }

    static Letter inverse(Letter x) { return x ^ 1U; }
    static Letter lift(Letter base_letter, bool inverted) {
      return 2 * base_letter + (inverted ? 1U : 0U);
    }
    static Letter base_of(Letter x) { return x >> 1U; }

   private:
    AlphabetPtr base_;
    AlphabetPtr letters_;
  };

  using DoubledPtr = std::shared_ptr<DoubledAlphabet const>;

  DoubledPtr make_doubled(AlphabetPtr base);

  Word invert(Word const& w);

  // An irreducible trace over a doubled alphabet.
  class GroupElement {
   public:
    GroupElement() = default;
    explicit GroupElement(AlphabetPtr letters)
        : trace_(Trace::from_canonical(std::move(letters), {})) {}

    // Caller guarantees irreducibility.
    static GroupElement from_irreducible(Trace t);

    Trace const&       trace() const { return trace_; }
    Word const&        word() const { return trace_.word(); }
    AlphabetPtr const& alphabet() const { return trace_.alphabet(); }
    std::size_t        size() const { return trace_.size(); }
    bool               is_identity() const { return trace_.empty(); }
    std::string        str() const { return trace_.str(); }

    bool operator==(GroupElement const& o) const { return trace_ == o.trace_; }
    bool operator!=(GroupElement const& o) const { return !(*this == o); }
    bool operator<(GroupElement const& o) const { return trace_ < o.trace_; }

   private:
    Trace trace_;
  };

  GroupElement invert(GroupElement const& g);
  Trace        invert(Trace const& t);

  GroupElement free_reduce(Trace const& t);
  GroupElement reduce_word(AlphabetPtr const& letters, Word const& w);
  bool         is_irreducible(Trace const& t);

  struct Product {
    GroupElement product;
    Trace        cancelled;  // p with g = u p, h = p^-1 v
  };

  Product      mult(GroupElement const& g, GroupElement const& h);
  GroupElement operator*(GroupElement const& g, GroupElement const& h);

  struct CyclicReduction {
    GroupElement conjugator;  // p
    GroupElement core;        // w, with g = p w p^-1
  };

  CyclicReduction cyclic_reduce(GroupElement const& g);
  bool            is_cyclically_reduced(GroupElement const& g);

  bool is_identity(AlphabetPtr const& letters, Word const& w);

  // g^k; throws ResourceExceeded when the length 2|p| + k|w| exceeds cap.
  GroupElement power_nf(GroupElement const& g,
                        natural const&      k,
                        natural const&      cap);

}  // namespace ggk
