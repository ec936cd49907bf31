#include <stdexcept>

#include "ggk/errors.hpp"
#include "ggk/solver.hpp"

namespace ggk {

  namespace {
    bool pieces_independent(GroupElement const& x, GroupElement const& y) {
      return x.alphabet()->independent(x.trace().alph(), y.trace().alph());
    }
  }  // namespace

  // The pieces form the letters of a graph group in their own right: equal
  // pieces are one letter, inverse pieces inverse letters, and independence
  // is inherited from the alphabets. Reducibility is then the word problem
  // there, which the stack reduction below decides.
  std::optional<Reduction> is_i_freely_reducible(
      std::vector<GroupElement> const& seq) {
    Reduction                r;
    std::vector<std::size_t> stack;
    for (std::size_t idx = 0; idx < seq.size(); ++idx) {
      if (seq[idx].is_identity()) {
        r.steps.push_back({ReductionStep::Drop, stack.size()});
        continue;
      }
      std::size_t i = stack.size();
      while (i > 0 && pieces_independent(seq[stack[i - 1]], seq[idx])) {
        --i;
      }
      if (i > 0 && seq[stack[i - 1]] == invert(seq[idx])) {
        for (std::size_t pos = stack.size(); pos > i; --pos) {
          r.steps.push_back({ReductionStep::Swap, pos - 1});
        }
        r.steps.push_back({ReductionStep::Cancel, i - 1});
        r.pairs.emplace_back(stack[i - 1], idx);
        stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(i - 1));
      } else {
        stack.push_back(idx);
      }
    }
    if (!stack.empty()) {
      return std::nullopt;
    }
    return r;
  }

  bool check_reduction(std::vector<GroupElement> const&  seq,
                       std::vector<ReductionStep> const& steps) {
    std::vector<GroupElement> cur = seq;
    for (auto const& st : steps) {
      auto const at = static_cast<std::ptrdiff_t>(st.pos);
      switch (st.kind) {
        case ReductionStep::Drop:
          if (st.pos >= cur.size() || !cur[st.pos].is_identity()) {
            return false;
          }
          cur.erase(cur.begin() + at);
          break;
        case ReductionStep::Swap:
          if (st.pos + 1 >= cur.size()
              || !pieces_independent(cur[st.pos], cur[st.pos + 1])) {
            return false;
          }
          std::swap(cur[st.pos], cur[st.pos + 1]);
          break;
        case ReductionStep::Cancel:
          if (st.pos + 1 >= cur.size()
              || cur[st.pos] != invert(cur[st.pos + 1])) {
            return false;
          }
          cur.erase(cur.begin() + at, cur.begin() + at + 2);
          break;
      }
    }
    return cur.empty();
  }

  std::size_t Refinement::parts() const {
    std::size_t n = 0;
    for (auto const& f : factors) {
      n += f.size();
    }
    return n;
  }

  std::vector<GroupElement> Refinement::flattened() const {
    std::vector<GroupElement> out;
    for (auto const& f : factors) {
      out.insert(out.end(), f.begin(), f.end());
    }
    return out;
  }

  namespace {
    GroupElement piece(Trace t) {
      return GroupElement::from_irreducible(std::move(t));
    }

    Refinement finish(std::vector<std::vector<GroupElement>> factors) {
      Refinement r;
      r.factors = std::move(factors);
      auto red  = is_i_freely_reducible(r.flattened());
      if (!red) {
        throw std::logic_error("refined sequence is not freely reducible");
      }
      r.reduction = std::move(*red);
      return r;
    }
  }  // namespace

  // Merge the first two entries into their irreducible product, refine the
  // shorter sequence, then split the merged entry's pieces back along the
  // cancelled middle.
  std::optional<Refinement> refine_to_reducible(
      std::vector<GroupElement> const& seq) {
    std::size_t const n = seq.size();
    if (n == 0) {
      return Refinement{};
    }
    if (n == 1) {
      if (!seq[0].is_identity()) {
        return std::nullopt;
      }
      return finish({{seq[0]}});
    }
    if (n == 2) {
      if (seq[1] != invert(seq[0])) {
        return std::nullopt;
      }
      return finish({{seq[0]}, {seq[1]}});
    }
    auto [v, s] = mult(seq[0], seq[1]);
    auto p      = right_quotient(seq[0].trace(), s);
    auto t      = left_quotient(invert(s), seq[1].trace());
    if (!p || !t) {
      throw std::logic_error("product factorization inconsistent");
    }
    std::vector<GroupElement> shorter{v};
    shorter.insert(shorter.end(), seq.begin() + 2, seq.end());
    auto sub = refine_to_reducible(shorter);
    if (!sub) {
      return std::nullopt;
    }
    auto const&        vs = sub->factors[0];
    std::size_t const  k  = vs.size();
    std::vector<Trace> vt;
    for (auto const& x : vs) {
      vt.push_back(x.trace());
    }
    auto grid = levi_decompose({*p, *t}, vt);
    if (!grid) {
      throw std::logic_error("Levi decomposition of the merged entry failed");
    }
    // partner[i] = l when flattened piece i >= k cancels against v_l.
    std::vector<int> partner(sub->parts(), -1);
    for (auto [a, b] : sub->reduction.pairs) {
      if ((a < k) != (b < k)) {
        auto lo = std::min(a, b), hi = std::max(a, b);
        partner[hi] = static_cast<int>(lo);
      }
    }
    // Empty pieces are dropped; they only inflate the part count.
    std::vector<std::vector<GroupElement>> factors(n);
    auto add = [&](std::size_t i, Trace const& x) {
      if (!x.empty()) {
        factors[i].push_back(piece(x));
      }
    };
    for (std::size_t l = 0; l < k; ++l) {
      add(0, grid->at(0, l));
    }
    add(0, s);
    add(1, invert(s));
    for (std::size_t l = 0; l < k; ++l) {
      add(1, grid->at(1, l));
    }
    std::size_t flat = k;
    for (std::size_t i = 1; i < sub->factors.size(); ++i) {
      for (auto const& x : sub->factors[i]) {
        int l = partner[flat++];
        if (l >= 0) {
          add(i + 1, invert(grid->at(1, l)));
          add(i + 1, invert(grid->at(0, l)));
        } else {
          factors[i + 1].push_back(x);
        }
      }
    }
    return finish(std::move(factors));
  }

  std::optional<PowerSplit> power_two_factorization(Trace const& u,
                                                    std::size_t  x,
                                                    Trace const& y1,
                                                    Trace const& y2) {
    if (u.empty()) {
      throw PreconditionError("power base must be nonempty");
    }
    if (!trace_equal(power(u, x), y1 * y2)) {
      return std::nullopt;
    }
    // Taking l and k maximal leaves the smallest c.
    PowerSplit r;
    r.s = y1;
    while (auto q = left_quotient(u, r.s)) {
      r.s = *q;
      ++r.l;
    }
    r.p = y2;
    while (auto q = right_quotient(r.p, u)) {
      r.p = *q;
      ++r.k;
    }
    r.c = x - r.l - r.k;
    return r;
  }

}  // namespace ggk
