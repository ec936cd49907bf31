#include <functional>

#include "ggk/errors.hpp"
#include "ggk/transfer.hpp"

namespace ggk {

  std::pair<Word, std::size_t> FiniteExtension::rewrite(std::size_t c,
                                                        Word const& w) const {
    Word g;
    for (Letter x : w) {
      if (c >= rules.size() || x >= rules[c].size()) {
        throw PreconditionError("word leaves the rewriting table");
      }
      auto const& [gw, next] = rules[c][x];
      g.insert(g.end(), gw.begin(), gw.end());
      c = next;
    }
    return {std::move(g), c};
  }

  void FiniteExtension::validate(GroupOracle const& g) const {
    std::size_t const m       = index();
    std::size_t const letters = 2 * gens.size();
    if (m == 0 || rules.size() != m) {
      throw StructureError("rewriting table needs one row per coset");
    }
    for (std::size_t c = 0; c < m; ++c) {
      if (rules[c].size() != letters) {
        throw StructureError("rewriting table row " + cosets[c] + " is partial");
      }
      for (auto const& [gw, next] : rules[c]) {
        if (next >= m) {
          throw StructureError("rewriting rule targets an unknown coset");
        }
        for (Letter x : gw) {
          if (DoubledAlphabet::base_of(x) >= g.num_gens()) {
            throw StructureError("rewriting rule uses a letter outside G");
          }
        }
      }
    }
    auto trivial_from = [&](std::size_t c, Word const& w) {
      auto [gw, end] = rewrite(c, w);
      return end == c && g.is_identity(gw);
    };
    for (std::size_t c = 0; c < m; ++c) {
      for (Letter x = 0; x < letters; ++x) {
        if (!trivial_from(c, {x, DoubledAlphabet::inverse(x)})) {
          throw StructureError("rules for " + gens[x / 2] + " and its inverse "
                               "do not cancel at coset " + cosets[c]);
        }
      }
      for (auto const& r : relations) {
        if (!trivial_from(c, r)) {
          throw StructureError("a relation is not trivial at coset " + cosets[c]);
        }
      }
    }
  }

  bool FiniteExtension::is_identity(GroupOracle const& g, Word const& w) const {
    auto [gw, end] = rewrite(0, w);
    return end == 0 && g.is_identity(gw);
  }

  namespace {
    Word repeat(Word const& u, std::size_t k) {
      Word out;
      for (std::size_t i = 0; i < k; ++i) {
        out.insert(out.end(), u.begin(), u.end());
      }
      return out;
    }

    Word concat(Word a, Word const& b) {
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }

    // All exponents are at least m; the coset tuple is enumerated.
    bool large_branch(FiniteExtension const& fe, WordEquation const& e,
                      GroupOracle const& g, FiniteExtStats* stats) {
      std::size_t const m = fe.index();
      std::size_t const n = e.bases.size();
      auto f = [&](std::size_t i, std::size_t c) {
        return fe.rewrite(c, e.bases[i]).second;
      };
      auto [g0, d0] = fe.rewrite(0, e.consts[0]);
      std::vector<Word> consts{g0}, bases;
      std::function<bool(std::size_t, std::size_t)> go =
          [&](std::size_t i, std::size_t d) {
            if (i == n) {
              if (d != 0) {
                return false;
              }
              if (stats) {
                ++stats->branches;
                ++stats->g_calls;
              }
              return g.ka_membership(chain_ka(consts, bases), {});
            }
            std::size_t ei = d;
            for (std::size_t s = 0; s < m; ++s) {
              ei = f(i, ei);
            }
            // Least period k of ei under f.
            std::size_t k = 1;
            for (std::size_t c = f(i, ei); c != ei; c = f(i, c)) {
              ++k;
            }
            Word const& u     = e.bases[i];
            Word        into  = fe.rewrite(d, repeat(u, m)).first;
            Word        loop  = fe.rewrite(ei, repeat(u, k)).first;
            std::size_t ci    = ei;
            Word        saved = consts.back();
            for (std::size_t r = 0; r < k; ++r, ci = f(i, ci)) {
              auto [tail, di] = fe.rewrite(ei, concat(repeat(u, r), e.consts[i + 1]));
              consts.back()   = concat(saved, into);
              bases.push_back(loop);
              consts.push_back(tail);
              bool hit = go(i + 1, di);
              consts.pop_back();
              bases.pop_back();
              if (hit) {
                consts.back() = saved;
                return true;
              }
            }
            consts.back() = saved;
            return false;
          };
      return go(0, d0);
    }
  }  // namespace

  bool finite_ext_reduce(FiniteExtension const& fe, WordEquation const& e,
                         GroupOracle const& g, FiniteExtStats* stats) {
    if (e.consts.size() != e.bases.size() + 1) {
      throw PreconditionError("equation needs one more constant than bases");
    }
    fe.validate(g);
    std::size_t const m = fe.index();
    std::size_t const n = e.bases.size();
    // choice[i] < m fixes x_i to that value; choice[i] == m means x_i >= m.
    std::vector<std::size_t> choice(n, 0);
    while (true) {
      WordEquation reduced;
      reduced.consts.push_back(e.consts[0]);
      for (std::size_t i = 0; i < n; ++i) {
        if (choice[i] < m) {
          reduced.consts.back() = concat(reduced.consts.back(),
                                         concat(repeat(e.bases[i], choice[i]),
                                                e.consts[i + 1]));
        } else {
          reduced.bases.push_back(e.bases[i]);
          reduced.consts.push_back(e.consts[i + 1]);
        }
      }
      if (large_branch(fe, reduced, g, stats)) {
        return true;
      }
      std::size_t j = 0;
      while (j < n && choice[j] == m) {
        choice[j++] = 0;
      }
      if (j == n) {
        return false;
      }
      ++choice[j];
    }
  }

}  // namespace ggk
