#include "ggk/group.hpp"

#include <algorithm>
#include <bit>

#include "ggk/errors.hpp"

namespace ggk {

  DoubledAlphabet::DoubledAlphabet(AlphabetPtr base) : base_(std::move(base)) {
    if (base_->size() > kMaxLetters / 2) {
      throw PreconditionError("group alphabets hold at most 32 generators");
    }
    auto letters = std::make_shared<IndependenceAlphabet>();
    for (Letter a = 0; a < base_->size(); ++a) {
      letters->add_letter(base_->name(a));
      letters->add_letter(base_->name(a) + "'");
    }
    for (Letter a = 0; a < base_->size(); ++a) {
      for (Letter b = a + 1; b < base_->size(); ++b) {
        if (base_->independent(a, b)) {
          for (unsigned s = 0; s < 2; ++s) {
            for (unsigned t = 0; t < 2; ++t) {
              letters->set_independent(lift(a, s), lift(b, t));
            }
          }
        }
      }
    }
    letters_ = std::move(letters);
  }

  DoubledPtr make_doubled(AlphabetPtr base) {
    return std::make_shared<DoubledAlphabet const>(std::move(base));
  }

  Word invert(Word const& w) {
    Word out(w.rbegin(), w.rend());
    for (auto& x : out) {
      x = DoubledAlphabet::inverse(x);
    }
    return out;
  }

  GroupElement GroupElement::from_irreducible(Trace t) {
    GroupElement g;
    g.trace_ = std::move(t);
    return g;
  }

  Trace invert(Trace const& t) {
    return Trace(t.alphabet(), invert(t.word()));
  }

  GroupElement invert(GroupElement const& g) {
    return GroupElement::from_irreducible(invert(g.trace()));
  }

  namespace {
    LetterSet inverse_mask(LetterSet m) {
      constexpr LetterSet even = 0x5555555555555555ULL;
      return ((m & even) << 1U) | ((m >> 1U) & even);
    }

    // Reduces w in place: each new letter cancels against the nearest
    // earlier letter dependent on it when that letter is its inverse.
    Word reduce_raw(IndependenceAlphabet const& A, Word const& w) {
      Word out;
      out.reserve(w.size());
      for (Letter x : w) {
        LetterSet const dep = A.dependent_on(x);
        std::size_t     i   = out.size();
        while (i > 0 && (dep & bit(out[i - 1])) == 0) {
          --i;
        }
        if (i > 0 && out[i - 1] == DoubledAlphabet::inverse(x)) {
          out.erase(out.begin() + static_cast<std::ptrdiff_t>(i - 1));
        } else {
          out.push_back(x);
        }
      }
      return out;
    }

    // Letters that can be moved to the end of w, with the position of the
    // occurrence that would move.
    LetterSet maximal_letters(IndependenceAlphabet const& A,
                              Word const&                 w,
                              std::vector<std::size_t>&   where) {
      LetterSet result = 0, seen = 0, blocked = 0;
      LetterSet const all = A.all_letters();
      for (std::size_t i = w.size(); i > 0 && blocked != all; --i) {
        Letter a = w[i - 1];
        if ((seen & A.dependent_on(a)) == 0) {
          result |= bit(a);
          where[a] = i - 1;
        }
        if ((seen & bit(a)) == 0) {
          seen |= bit(a);
          blocked |= A.dependent_on(a);
        }
      }
      return result;
    }

    LetterSet minimal_letters(IndependenceAlphabet const& A,
                              Word const&                 w,
                              std::vector<std::size_t>&   where) {
      LetterSet result = 0, seen = 0, blocked = 0;
      LetterSet const all = A.all_letters();
      for (std::size_t i = 0; i < w.size() && blocked != all; ++i) {
        Letter a = w[i];
        if ((seen & A.dependent_on(a)) == 0) {
          result |= bit(a);
          where[a] = i;
        }
        if ((seen & bit(a)) == 0) {
          seen |= bit(a);
          blocked |= A.dependent_on(a);
        }
      }
      return result;
    }
  }  // namespace

  GroupElement reduce_word(AlphabetPtr const& letters, Word const& w) {
    Word r = reduce_raw(*letters, w);
    return GroupElement::from_irreducible(Trace(letters, r));
  }

  GroupElement free_reduce(Trace const& t) {
    return reduce_word(t.alphabet(), t.word());
  }

  bool is_irreducible(Trace const& t) {
    return reduce_raw(*t.alphabet(), t.word()).size() == t.size();
  }

  bool is_identity(AlphabetPtr const& letters, Word const& w) {
    return reduce_raw(*letters, w).empty();
  }

  Product mult(GroupElement const& g, GroupElement const& h) {
    if (!same_alphabet(g.alphabet(), h.alphabet())) {
      throw PreconditionError("group element alphabet mismatch");
    }
    auto const& letters = g.alphabet();
    if (!letters) {
      return {h, Trace()};
    }
    auto const&              A = *letters;
    Word                     u = g.word(), v = h.word(), p;
    std::vector<std::size_t> at_u(A.size()), at_v(A.size());
    while (!u.empty() && !v.empty()) {
      LetterSet cand = maximal_letters(A, u, at_u)
                       & inverse_mask(minimal_letters(A, v, at_v));
      if (cand == 0) {
        break;
      }
      auto a = static_cast<Letter>(std::countr_zero(cand));
      u.erase(u.begin() + static_cast<std::ptrdiff_t>(at_u[a]));
      v.erase(v.begin()
              + static_cast<std::ptrdiff_t>(at_v[DoubledAlphabet::inverse(a)]));
      p.insert(p.begin(), a);
    }
    u.insert(u.end(), v.begin(), v.end());
    return {GroupElement::from_irreducible(Trace(letters, u)),
            Trace(letters, p)};
  }

  GroupElement operator*(GroupElement const& g, GroupElement const& h) {
    return mult(g, h).product;
  }

  CyclicReduction cyclic_reduce(GroupElement const& g) {
    auto const& letters = g.alphabet();
    if (!letters || g.is_identity()) {
      return {g, g};
    }
    auto const&              A = *letters;
    Word                     w = g.word(), p;
    std::vector<std::size_t> first(A.size()), last(A.size());
    while (w.size() >= 2) {
      LetterSet cand = minimal_letters(A, w, first)
                       & inverse_mask(maximal_letters(A, w, last));
      if (cand == 0) {
        break;
      }
      auto   a    = static_cast<Letter>(std::countr_zero(cand));
      auto   back = last[DoubledAlphabet::inverse(a)];
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(back));
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(first[a]));
      p.push_back(a);
    }
    return {GroupElement::from_irreducible(Trace(letters, p)),
            GroupElement::from_irreducible(Trace(letters, w))};
  }

  bool is_cyclically_reduced(GroupElement const& g) {
    return cyclic_reduce(g).conjugator.is_identity();
  }

  GroupElement power_nf(GroupElement const& g,
                        natural const&      k,
                        natural const&      cap) {
    if (k == 0 || g.is_identity()) {
      return GroupElement(g.alphabet());
    }
    auto [p, w] = cyclic_reduce(g);
    natural required = 2 * natural(p.size()) + k * natural(w.size());
    if (required > cap) {
      throw ResourceExceeded(required);
    }
    auto const n = static_cast<std::size_t>(k);
    Word       out = p.word();
    out.reserve(static_cast<std::size_t>(required));
    for (std::size_t i = 0; i < n; ++i) {
      out.insert(out.end(), w.word().begin(), w.word().end());
    }
    Word pinv = invert(p.word());
    out.insert(out.end(), pinv.begin(), pinv.end());
    // p w^k p^-1 is already irreducible when g is; normalization suffices.
    return GroupElement::from_irreducible(Trace(g.alphabet(), out));
  }

}  // namespace ggk
