#pragma once

// Test helpers and reference oracles. The oracles here deliberately avoid
// the library's normal forms so that agreement means something.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ggk/automata.hpp"
#include "ggk/group.hpp"
#include "ggk/trace.hpp"
#include "ggk/transfer.hpp"

namespace ggk::testing {

  using Rng = std::mt19937_64;

  // Single-character letter names in order; pairs name independent letters.
  inline AlphabetPtr alphabet(std::string const& letters,
                              std::vector<std::string> const& indep = {}) {
    auto a = std::make_shared<IndependenceAlphabet>();
    for (char c : letters) {
      a->add_letter(std::string(1, c));
    }
    for (auto const& p : indep) {
      a->set_independent(*a->find(p.substr(0, 1)), *a->find(p.substr(1, 1)));
    }
    return a;
  }

  inline AlphabetPtr random_alphabet(Rng& rng, std::size_t n, double p = 0.5) {
    auto a = std::make_shared<IndependenceAlphabet>();
    for (std::size_t i = 0; i < n; ++i) {
      a->add_letter(std::string(1, static_cast<char>('a' + i)));
    }
    std::bernoulli_distribution coin(p);
    for (Letter i = 0; i < n; ++i) {
      for (Letter j = i + 1; j < n; ++j) {
        if (coin(rng)) {
          a->set_independent(i, j);
        }
      }
    }
    return a;
  }

  // "abc" over single-character names.
  inline Word w(IndependenceAlphabet const& a, std::string const& s) {
    Word out;
    for (char c : s) {
      out.push_back(*a.find(std::string(1, c)));
    }
    return out;
  }
  inline Trace tr(AlphabetPtr const& a, std::string const& s) {
    return Trace(a, w(*a, s));
  }

  // "ab'c" over a doubled alphabet: a primed letter is the inverse.
  inline Word gw(std::string const& s) {
    Word out;
    for (char c : s) {
      if (c == '\'') {
        out.back() = DoubledAlphabet::inverse(out.back());
      } else if (c != ' ') {
        out.push_back(2 * static_cast<Letter>(c - 'a'));
      }
    }
    return out;
  }

  inline Word random_word(Rng& rng, std::size_t letters, std::size_t len) {
    std::uniform_int_distribution<Letter> pick(0, static_cast<Letter>(letters - 1));
    Word out(len);
    for (auto& x : out) {
      x = pick(rng);
    }
    return out;
  }

  inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  }

  inline Word cat(Word a, Word const& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }
  inline Word rep(Word const& u, std::size_t k) {
    Word out;
    for (std::size_t i = 0; i < k; ++i) {
      out.insert(out.end(), u.begin(), u.end());
    }
    return out;
  }

  // Every word over n letters of length at most len.
  inline std::vector<Word> all_words(std::size_t n, std::size_t len) {
    std::vector<Word> out{{}};
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i].size() < len) {
        for (Letter x = 0; x < n; ++x) {
          Word v = out[i];
          v.push_back(x);
          out.push_back(v);
        }
      }
    }
    return out;
  }

  // Projection criterion: u and v are trace-equivalent iff their
  // projections onto every pair of dependent letters coincide.
  inline bool equivalent(IndependenceAlphabet const& a, Word const& u,
                         Word const& v) {
    if (u.size() != v.size()) {
      return false;
    }
    for (Letter x = 0; x < a.size(); ++x) {
      for (Letter y = x; y < a.size(); ++y) {
        if (x != y && a.independent(x, y)) {
          continue;
        }
        auto proj = [&](Word const& s) {
          Word p;
          for (Letter c : s) {
            if (c == x || c == y) {
              p.push_back(c);
            }
          }
          return p;
        };
        if (proj(u) != proj(v)) {
          return false;
        }
      }
    }
    return true;
  }

  // The class of u under adjacent independent swaps.
  inline std::set<Word> trace_class(IndependenceAlphabet const& a, Word const& u) {
    std::set<Word>   seen{u};
    std::deque<Word> todo{u};
    while (!todo.empty()) {
      Word s = todo.front();
      todo.pop_front();
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (a.independent(s[i], s[i + 1])) {
          Word t = s;
          std::swap(t[i], t[i + 1]);
          if (seen.insert(t).second) {
            todo.push_back(t);
          }
        }
      }
    }
    return seen;
  }

  // Word problem of a graph group by pair deletion: x ... x^-1 cancels
  // when every letter in between commutes with x.
  inline Word graph_reduce(IndependenceAlphabet const& doubled, Word s) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < s.size() && !changed; ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
          if (s[j] == DoubledAlphabet::inverse(s[i])) {
            s.erase(s.begin() + static_cast<std::ptrdiff_t>(j));
            s.erase(s.begin() + static_cast<std::ptrdiff_t>(i));
            changed = true;
            break;
          }
          if (!doubled.independent(s[i], s[j])) {
            break;
          }
        }
      }
    }
    return s;
  }
  inline bool graph_identity(IndependenceAlphabet const& doubled, Word const& s) {
    return graph_reduce(doubled, s).empty();
  }

  // Generic bounded search over (state, element) pairs of a knapsack
  // automaton. step appends one letter to an element, returning nothing
  // when the element would exceed the search bound. Exact for finite
  // groups; otherwise an under-approximation that is complete for witnesses
  // whose prefixes stay within the bound.
  template <class Elem>
  bool bounded_membership(KnapsackAutomaton const& ka, Elem const& start,
                          std::function<std::optional<Elem>(Elem const&, Letter)> const& step,
                          std::function<bool(Elem const&)> const& is_one) {
    std::set<std::pair<State, Elem>>   seen;
    std::deque<std::pair<State, Elem>> todo;
    auto push = [&](State q, Elem const& e) {
      if (seen.insert({q, e}).second) {
        todo.push_back({q, e});
      }
    };
    push(ka.initial(), start);
    while (!todo.empty()) {
      auto [q, e] = todo.front();
      todo.pop_front();
      if (ka.is_final(q) && is_one(e)) {
        return true;
      }
      for (auto const& edge : ka.edges()) {
        if (edge.from != q) {
          continue;
        }
        std::optional<Elem> cur = e;
        for (Letter x : edge.label) {
          cur = step(*cur, x);
          if (!cur) {
            break;
          }
        }
        if (cur) {
          push(edge.to, *cur);
        }
      }
    }
    return false;
  }

  // Free-product normal forms: a stack of (factor, element) syllables for
  // free products of cyclic groups. Order 0 means infinite cyclic.
  struct CyclicFactor {
    std::size_t gens_before;  // global generator index of this factor
    std::int64_t order;
  };
  using Syllables = std::vector<std::pair<int, std::int64_t>>;

  inline std::optional<Syllables> syllable_step(std::vector<CyclicFactor> const& fs,
                                                Syllables s, Letter x,
                                                std::size_t bound) {
    std::size_t const g = DoubledAlphabet::base_of(x);
    int               f = -1;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (fs[i].gens_before == g) {
        f = static_cast<int>(i);
      }
    }
    std::int64_t d = (x & 1U) ? -1 : 1;
    auto norm = [&](std::int64_t v) {
      std::int64_t n = fs[f].order;
      return n == 0 ? v : ((v % n) + n) % n;
    };
    if (!s.empty() && s.back().first == f) {
      std::int64_t v = norm(s.back().second + d);
      if (v == 0) {
        s.pop_back();
      } else {
        s.back().second = v;
      }
    } else {
      s.push_back({f, norm(d)});
    }
    std::size_t len = 0;
    for (auto const& [ff, v] : s) {
      len += static_cast<std::size_t>(std::abs(v));
    }
    if (len > bound) {
      return std::nullopt;
    }
    return s;
  }

  // Random knapsack automaton: a chain of gadgets (single states or
  // induced cycles of length up to max_cycle) linked by forward edges.
  struct KaShape {
    std::size_t gadgets   = 3;
    std::size_t max_cycle = 3;
    std::size_t max_label = 2;
    std::size_t extra     = 2;  // additional forward edges
    bool        empty_labels = false;
  };

  inline KnapsackAutomaton random_ka(Rng& rng, std::size_t letters,
                                     KaShape const& shape) {
    KnapsackAutomaton                 ka;
    std::vector<std::vector<State>>   gadget;
    auto label = [&](bool allow_empty) {
      std::size_t lo = allow_empty ? 0 : 1;
      return random_word(rng, letters, uniform(rng, lo, shape.max_label));
    };
    for (std::size_t g = 0; g < shape.gadgets; ++g) {
      std::size_t const k = uniform(rng, 0, shape.max_cycle);
      std::vector<State> states;
      for (std::size_t i = 0; i < std::max<std::size_t>(k, 1); ++i) {
        states.push_back(ka.add_state(false));
      }
      for (std::size_t i = 0; i < k; ++i) {
        ka.add_edge(states[i], label(false), states[(i + 1) % k]);
      }
      gadget.push_back(states);
    }
    auto any_state = [&](std::size_t g) {
      return gadget[g][uniform(rng, 0, gadget[g].size() - 1)];
    };
    for (std::size_t g = 0; g + 1 < gadget.size(); ++g) {
      ka.add_edge(any_state(g), label(shape.empty_labels), any_state(g + 1));
    }
    for (std::size_t e = 0; e < shape.extra && gadget.size() > 1; ++e) {
      std::size_t i = uniform(rng, 0, gadget.size() - 2);
      std::size_t j = uniform(rng, i + 1, gadget.size() - 1);
      ka.add_edge(any_state(i), label(shape.empty_labels), any_state(j));
    }
    ka.set_initial(any_state(0));
    ka.set_final(any_state(gadget.size() - 1));
    if (uniform(rng, 0, 2) == 0) {
      ka.set_final(any_state(uniform(rng, 0, gadget.size() - 1)));
    }
    return ka;
  }

}  // namespace ggk::testing
