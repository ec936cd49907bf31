#include <bit>
#include <chrono>
#include <stdexcept>

#include "ggk/errors.hpp"
#include "ggk/solver.hpp"

namespace ggk {

  namespace {
    GroupElement product(AlphabetPtr const&                         letters,
                         std::initializer_list<GroupElement const*> xs) {
      Word w;
      for (auto const* x : xs) {
        w.insert(w.end(), x->word().begin(), x->word().end());
      }
      return reduce_word(letters, w);
    }

    GroupElement raw_power(GroupElement const& u, std::size_t k) {
      return GroupElement::from_irreducible(power(u.trace(), k));
    }

    // x with u^x = h, for u cyclically reduced and nontrivial.
    std::optional<std::size_t> single_power(GroupElement const& u,
                                            GroupElement const& h) {
      if (h.size() % u.size() != 0) {
        return std::nullopt;
      }
      std::size_t k = h.size() / u.size();
      if (power(u.trace(), k) != h.trace()) {
        return std::nullopt;
      }
      return k;
    }

    bool irreducible_concat(GroupElement const& s, GroupElement const& t) {
      Word w = s.word();
      w.insert(w.end(), t.word().begin(), t.word().end());
      return is_irreducible(Trace(s.alphabet(), w));
    }

    // Smallest x0 with NF(u^x m) = u^(x-x0) NF(u^x0 m) for every x >= x0.
    // A product s t of irreducibles reduces only through a letter maximal
    // in s, and u^j has the same maximal letters as u, so one irreducible
    // step u · NF(u^x0 m) certifies all larger exponents. Cancellation
    // with m is bounded, so the search stops within |m|/|u| + |alph(u)|.
    std::size_t stable_left(GroupElement const& u, GroupElement const& m,
                            GroupElement& g0) {
      std::size_t limit = m.size() / u.size()
                          + std::popcount(u.trace().alph()) + 2;
      for (std::size_t x0 = 0; x0 <= limit; ++x0) {
        GroupElement ux = raw_power(u, x0);
        g0              = product(u.alphabet(), {&ux, &m});
        if (irreducible_concat(u, g0)) {
          return x0;
        }
      }
      throw std::logic_error("cancellation with a power did not stabilize");
    }

    // Mirror image: NF(w v^-y) = NF(w v^-y0) (v^-1)^(y-y0) for y >= y0.
    std::size_t stable_right(GroupElement const& w, GroupElement const& vinv,
                             GroupElement& g1) {
      std::size_t limit = w.size() / vinv.size()
                          + std::popcount(vinv.trace().alph()) + 2;
      for (std::size_t y0 = 0; y0 <= limit; ++y0) {
        GroupElement vy = raw_power(vinv, y0);
        g1              = product(w.alphabet(), {&w, &vy});
        if (irreducible_concat(g1, vinv)) {
          return y0;
        }
      }
      throw std::logic_error("cancellation with a power did not stabilize");
    }

    LinearSet point(Vec v) { return LinearSet{std::move(v), {}}; }

    // Solutions (x, y) of u^x m v^y = w in the group.
    SemilinearSet two_item_set(GroupElement const& u, GroupElement const& m,
                               GroupElement const& v, GroupElement const& w) {
      auto const&  letters = u.alphabet();
      GroupElement vinv    = invert(v);
      GroupElement minv    = invert(m);
      GroupElement g0, g1;
      std::size_t  x0 = stable_left(u, m, g0);
      std::size_t  y0 = stable_right(w, vinv, g1);

      SemilinearSet out;
      out.dim = 2;
      // Large exponents: u^(x-x0) g0 = g1 (v^-1)^(y-y0) as traces.
      auto big = two_power_solutions(Trace::from_canonical(letters, {}),
                                     u.trace(), g0.trace(), g1.trace(),
                                     vinv.trace(),
                                     Trace::from_canonical(letters, {}));
      for (auto l : big.components) {
        l.base[0] += static_cast<std::int64_t>(x0);
        l.base[1] += static_cast<std::int64_t>(y0);
        out.add(std::move(l));
      }
      // x below x0: v^y = m^-1 u^-x w determines y.
      GroupElement uinv = invert(u);
      for (std::size_t x = 0; x < x0; ++x) {
        GroupElement ux = raw_power(uinv, x);
        auto         h  = product(letters, {&minv, &ux, &w});
        if (auto y = single_power(v, h)) {
          out.add(point({static_cast<std::int64_t>(x),
                         static_cast<std::int64_t>(*y)}));
        }
      }
      // y below y0 with x >= x0: u^x = w v^-y m^-1 determines x.
      for (std::size_t y = 0; y < y0; ++y) {
        GroupElement vy = raw_power(vinv, y);
        auto         h  = product(letters, {&w, &vy, &minv});
        if (auto x = single_power(u, h); x && *x >= x0) {
          out.add(point({static_cast<std::int64_t>(*x),
                         static_cast<std::int64_t>(y)}));
        }
      }
      return out;
    }

    // Solution set over the power items of a preprocessed equation.
    SemilinearSet item_set(AlternatingForm const& f,
                           AlphabetPtr const&     letters) {
      std::size_t const n = f.powers.size();
      SemilinearSet     out;
      out.dim = n;
      if (n == 0) {
        if (f.consts[0].is_identity()) {
          out.add(point({}));
        }
        return out;
      }
      // Rotate so the equation reads u1^x1 ... = w.
      GroupElement w = invert(product(letters, {&f.consts.back(), &f.consts[0]}));
      if (n == 1) {
        if (auto x = single_power(f.powers[0].element, w)) {
          out.add(point({static_cast<std::int64_t>(*x)}));
        }
        return out;
      }
      return two_item_set(f.powers[0].element, f.consts[1],
                          f.powers[1].element, w);
    }

    // Adds unconstrained coordinates for variables without a power item and
    // merges items sharing a variable.
    SemilinearSet to_variables(SemilinearSet const&   items,
                               AlternatingForm const& f,
                               std::size_t            num_vars) {
      std::vector<bool> used(num_vars, false);
      for (auto const& p : f.powers) {
        used[*p.var] = true;
      }
      std::vector<std::size_t> rep;
      for (auto const& p : f.powers) {
        rep.push_back(*p.var);
      }
      std::vector<std::size_t> free;
      for (std::size_t v = 0; v < num_vars; ++v) {
        if (!used[v]) {
          free.push_back(v);
          rep.push_back(v);
        }
      }
      SemilinearSet ext;
      ext.dim = rep.size();
      for (auto const& l : items.components) {
        LinearSet e;
        e.base = l.base;
        e.base.resize(ext.dim, 0);
        for (auto p : l.periods) {
          p.resize(ext.dim, 0);
          e.periods.push_back(std::move(p));
        }
        for (std::size_t j = 0; j < free.size(); ++j) {
          Vec unit(ext.dim, 0);
          unit[items.dim + j] = 1;
          e.periods.push_back(std::move(unit));
        }
        ext.add(std::move(e));
      }
      return identify_variables(ext, rep);
    }

    double since(std::chrono::steady_clock::time_point t0) {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
    }
  }  // namespace

  SolveReport solve_exact(ExponentEquation const& e, ExactLimits const& limits) {
    auto const t0 = std::chrono::steady_clock::now();
    if (e.has_integer_vars()) {
      throw PreconditionError("rewrite integer variables before solving");
    }
    SolveReport      r;
    ExponentEquation pe = preprocess(e);
    AlternatingForm  f  = alternating(pe);
    if (f.powers.size() > limits.max_powers) {
      r.reason = std::to_string(f.powers.size())
                 + " power items after preprocessing exceed the limit of "
                 + std::to_string(limits.max_powers);
      r.seconds = since(t0);
      return r;
    }
    try {
      SemilinearSet s = to_variables(item_set(f, pe.letters()), f, e.num_vars());
      r.exhaustive    = true;
      if (s.empty()) {
        r.status = SolveStatus::Unsolvable;
        r.reason = "solution set is empty";
      } else {
        Assignment w;
        for (auto x : s.components.front().base) {
          w.emplace_back(x);
        }
        try {
          if (!verify(e, w, limits.cap)) {
            throw std::logic_error("exact solver produced a non-solution");
          }
        } catch (ResourceExceeded const&) {
          // Too long to double-check; the set is exact regardless.
        }
        r.status  = SolveStatus::Solvable;
        r.witness = std::move(w);
      }
      r.solution_set = std::move(s);
    } catch (LimitsExceeded const& ex) {
      r.status     = SolveStatus::Unknown;
      r.exhaustive = false;
      r.reason     = ex.what();
    }
    r.seconds = since(t0);
    return r;
  }

}  // namespace ggk
