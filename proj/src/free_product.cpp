#include <algorithm>

#include "ggk/errors.hpp"
#include "ka_surgery.hpp"

namespace ggk {

  namespace {
    struct Factors {
      FreeProductOracle const& fp;

      // Factor of a nonempty single-factor label, -1 for the empty word.
      int of(Word const& w) const {
        if (w.empty()) {
          return -1;
        }
        int f = fp.factor_of(w[0]);
        for (Letter x : w) {
          if (fp.factor_of(x) != f) {
            throw std::logic_error("mixed label after splitting");
          }
        }
        return f;
      }

      bool within(KaEdge const& e, int i) const {
        int f = of(e.label);
        return f < 0 || f == i;
      }

      // The factor-i restriction, relabelled to the factor's own letters.
      KnapsackAutomaton local(KnapsackAutomaton const& ka, int i) const {
        KnapsackAutomaton out =
            ka.restricted([&](KaEdge const& e) { return within(e, i); });
        for (auto& e : out.edges()) {
          e.label = fp.local(e.label);
        }
        return out;
      }
    };

    std::size_t letters_on_cycles(KnapsackAutomaton const& ka) {
      std::size_t n = 0;
      for (auto const& c : ka.cycles()) {
        for (auto k : c.edges) {
          n += ka.edges()[k].label.empty() ? 0 : 1;
        }
      }
      return n;
    }

    // Every edge entering a cycle reads the empty word.
    void epsilon_entries(KnapsackAutomaton& ka) {
      auto const        comp = ka.components();
      std::vector<bool> cyc(ka.num_states(), false);
      for (auto const& e : ka.edges()) {
        if (comp[e.from] == comp[e.to]) {
          cyc[e.from] = true;
        }
      }
      auto& es = ka.edges();
      for (std::size_t k = 0, n = es.size(); k < n; ++k) {
        if (cyc[es[k].to] && comp[es[k].from] != comp[es[k].to]
            && !es[k].label.empty()) {
          State m  = ka.add_state();
          State to = es[k].to;
          es[k].to = m;
          ka.add_edge(m, {}, to);
        }
      }
    }

    // One surgery on a run inside a cycle that reads a trivial word of one
    // factor while the cycle also reads a letter of the other factor.
    bool phase1_step(Factors const& fs, KnapsackAutomaton& ka) {
      for (auto const& c : ka.cycles()) {
        std::size_t const m = c.states.size();
        std::vector<int>  f(m);
        bool              seen[2] = {false, false};
        for (std::size_t i = 0; i < m; ++i) {
          f[i] = fs.of(ka.edges()[c.edges[i]].label);
          if (f[i] >= 0) {
            seen[f[i]] = true;
          }
        }
        for (int i = 0; i < 2; ++i) {
          if (!seen[1 - i]) {
            continue;
          }
          for (std::size_t a = 0; a < m; ++a) {
            Word w;
            for (std::size_t len = 1; len < m; ++len) {
              std::size_t k = (a + len - 1) % m;
              if (f[k] == 1 - i) {
                break;
              }
              auto const& l = ka.edges()[c.edges[k]].label;
              w.insert(w.end(), l.begin(), l.end());
              if (w.empty() || !fs.fp.factor(i)->is_identity(fs.fp.local(w))) {
                continue;
              }
              detail::shortcut_cycle_run(ka, c, a, len, {}, true);
              return true;
            }
          }
        }
      }
      return false;
    }

    bool phase2_round(Factors const& fs, KnapsackAutomaton& ka,
                      SaturationStats* stats) {
      auto const comp    = ka.components();
      bool       changed = false;
      for (int i = 0; i < 2; ++i) {
        KnapsackAutomaton const sub = fs.local(ka, i);
        std::vector<bool>       has_out(ka.num_states(), false);
        for (auto const& e : sub.edges()) {
          has_out[e.from] = true;
        }
        for (State p = 0; p < ka.num_states(); ++p) {
          if (!has_out[p]) {
            continue;
          }
          auto reach = detail::reachable(sub, p, [](KaEdge const&) { return true; });
          for (State q = 0; q < ka.num_states(); ++q) {
            if (q == p || !reach[q] || comp[p] == comp[q]
                || detail::has_edge(ka, p, {}, q)) {
              continue;
            }
            if (fs.fp.factor(i)->ka_membership(sub.between(p, q), {})) {
              ka.add_edge(p, {}, q);
              changed = true;
              if (stats) {
                ++stats->phase2_edges;
              }
            }
          }
        }
      }
      return changed;
    }
  }  // namespace

  bool free_product_saturate(OraclePtr const& g0, OraclePtr const& g1,
                             KnapsackAutomaton const& in,
                             SaturationStats*         stats) {
    FreeProductOracle const fp(g0, g1);
    Factors const           fs{fp};
    for (auto const& e : in.edges()) {
      for (Letter x : e.label) {
        if (fp.factor_of(x) < 0) {
          throw PreconditionError("label letter outside both factors");
        }
      }
    }
    KnapsackAutomaton ka =
        detail::split_labels(in, [](Word const& w) { return w.size() > 1; });
    ka = hnn_normalize(ka);
    epsilon_entries(ka);

    std::size_t measure = letters_on_cycles(ka);
    while (phase1_step(fs, ka)) {
      std::size_t now = letters_on_cycles(ka);
      if (now >= measure) {
        throw std::logic_error("cycle surgery did not remove letters");
      }
      if (auto err = ka.shape_error(); !err.empty()) {
        throw std::logic_error("cycle surgery broke the shape: " + err);
      }
      measure = now;
      if (stats) {
        ++stats->phase1_steps;
        ++stats->shape_checks;
      }
    }
    while (phase2_round(fs, ka, stats)) {
    }
    for (int i = 0; i < 2; ++i) {
      if (fp.factor(i)->ka_membership(fs.local(ka, i), {})) {
        return true;
      }
    }
    return false;
  }

}  // namespace ggk
