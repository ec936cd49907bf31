#include <algorithm>

#include "ggk/errors.hpp"
#include "ka_surgery.hpp"

namespace ggk {

  namespace {
    Word concat(Word a, Word const& b) {
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
  }  // namespace

  std::optional<std::size_t> HnnPresentation::classify(Word const& w,
                                                       int         alpha) const {
    auto const& s = sub(alpha);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (base->is_identity(concat(w, invert(s[i])))) {
        return i;
      }
    }
    return std::nullopt;
  }

  Word const& HnnPresentation::image(std::size_t i, int alpha) const {
    if (alpha > 0) {
      return sub_minus.at(phi.at(i));
    }
    auto it = std::find(phi.begin(), phi.end(), i);
    if (it == phi.end()) {
      throw StructureError("associated subgroup element has no preimage");
    }
    return sub_plus[static_cast<std::size_t>(it - phi.begin())];
  }

  void HnnPresentation::validate() const {
    if (!base) {
      throw StructureError("HNN presentation lacks a base group");
    }
    if (sub_plus.size() != sub_minus.size() || phi.size() != sub_plus.size()
        || sub_plus.empty()) {
      throw StructureError("associated subgroups must have equal nonzero size");
    }
    std::vector<bool> hit(phi.size(), false);
    for (auto j : phi) {
      if (j >= phi.size() || hit[j]) {
        throw StructureError("phi is not a bijection");
      }
      hit[j] = true;
    }
    for (int alpha : {1, -1}) {
      auto const& s = sub(alpha);
      for (auto const& w : s) {
        for (Letter x : w) {
          if (DoubledAlphabet::base_of(x) >= base->num_gens()) {
            throw StructureError("subgroup element uses a letter outside the base");
          }
        }
      }
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (classify(s[i], alpha) != i) {
          throw StructureError("subgroup elements are not distinct");
        }
      }
      if (!classify({}, alpha)) {
        throw StructureError("associated subgroup lacks the identity");
      }
    }
    for (std::size_t i = 0; i < sub_plus.size(); ++i) {
      for (std::size_t j = 0; j < sub_plus.size(); ++j) {
        auto k = classify(concat(sub_plus[i], sub_plus[j]), 1);
        if (!k) {
          throw StructureError("A(+1) is not closed under products");
        }
        Word lhs = concat(image(i, 1), image(j, 1));
        if (!base->is_identity(concat(lhs, invert(image(*k, 1))))) {
          throw StructureError("phi is not a homomorphism");
        }
        if (!classify(concat(sub_minus[i], sub_minus[j]), -1)) {
          throw StructureError("A(-1) is not closed under products");
        }
      }
    }
  }

  KnapsackAutomaton hnn_normalize(KnapsackAutomaton const& in) {
    KnapsackAutomaton ka = in;
    auto out_edges = [&](State q) {
      std::vector<KaEdge> es;
      for (auto const& e : ka.edges()) {
        if (e.from == q) {
          es.push_back(e);
        }
      }
      return es;
    };
    if (ka.on_cycle(ka.initial())) {
      State old = ka.initial();
      State s   = ka.add_state(ka.is_final(old));
      for (auto const& e : out_edges(old)) {
        ka.add_edge(s, e.label, e.to);
      }
      ka.set_initial(s);
    }
    for (State f = 0; f < ka.num_states(); ++f) {
      if (!ka.is_final(f) || !ka.on_cycle(f)) {
        continue;
      }
      State fresh = ka.add_state(true);
      ka.set_final(f, false);
      std::vector<KaEdge> in_edges;
      for (auto const& e : ka.edges()) {
        if (e.to == f) {
          in_edges.push_back(e);
        }
      }
      for (auto const& e : in_edges) {
        ka.add_edge(e.from, e.label, fresh);
      }
    }
    // An edge between two cycles is routed through a copy of its target.
    auto const comp = ka.components();
    std::vector<bool> cyc(ka.num_states(), false);
    for (auto const& e : ka.edges()) {
      if (comp[e.from] == comp[e.to]) {
        cyc[e.from] = true;
      }
    }
    std::vector<KaEdge> const original = ka.edges();
    std::vector<KaEdge>       kept;
    std::vector<KaEdge>       bridges;
    for (auto const& e : original) {
      bool bridge = cyc[e.from] && cyc[e.to] && comp[e.from] != comp[e.to];
      (bridge ? bridges : kept).push_back(e);
    }
    ka.edges() = kept;
    for (auto const& e : bridges) {
      State m = ka.add_state(ka.is_final(e.to));
      ka.add_edge(e.from, e.label, m);
      for (auto const& o : original) {
        if (o.from == e.to) {
          ka.add_edge(m, o.label, o.to);
        }
      }
    }
    return ka;
  }

  namespace {
    bool is_t(HnnPresentation const& h, Word const& w) {
      return w.size() == 1 && DoubledAlphabet::base_of(w[0]) == h.base->num_gens();
    }

    bool has_t(HnnPresentation const& h, Word const& w) {
      return std::any_of(w.begin(), w.end(), [&](Letter x) {
        return DoubledAlphabet::base_of(x) == h.base->num_gens();
      });
    }

    std::size_t t_on_cycles(HnnPresentation const& h, KnapsackAutomaton const& ka) {
      std::size_t n = 0;
      for (auto const& c : ka.cycles()) {
        for (auto k : c.edges) {
          n += is_t(h, ka.edges()[k].label) ? 1 : 0;
        }
      }
      return n;
    }

    // One surgery on a cycle reduction path t^-alpha w t^alpha, if any.
    bool phase1_step(HnnPresentation const& h, KnapsackAutomaton& ka) {
      Letter const t = h.t();
      for (auto const& c : ka.cycles()) {
        std::size_t const        m = c.states.size();
        std::vector<std::size_t> ts;
        for (std::size_t i = 0; i < m; ++i) {
          if (is_t(h, ka.edges()[c.edges[i]].label)) {
            ts.push_back(i);
          }
        }
        if (ts.size() < 2) {
          continue;
        }
        for (std::size_t n = 0; n < ts.size(); ++n) {
          std::size_t i     = ts[n];
          std::size_t j     = ts[(n + 1) % ts.size()];
          Letter      open  = ka.edges()[c.edges[i]].label[0];
          Letter      close = ka.edges()[c.edges[j]].label[0];
          if (close != DoubledAlphabet::inverse(open)) {
            continue;
          }
          // open is t^-alpha.
          int  alpha = open == DoubledAlphabet::inverse(t) ? 1 : -1;
          Word w;
          std::size_t len = (j + m - i) % m + 1;
          for (std::size_t k = 1; k + 1 < len; ++k) {
            auto const& l = ka.edges()[c.edges[(i + k) % m]].label;
            w.insert(w.end(), l.begin(), l.end());
          }
          auto a = h.classify(w, alpha);
          if (!a) {
            continue;
          }
          detail::shortcut_cycle_run(ka, c, i, len, h.image(*a, alpha), false);
          return true;
        }
      }
      return false;
    }

    bool phase2_round(HnnPresentation const& h, KnapsackAutomaton& ka,
                      SaturationStats* stats) {
      auto const comp   = ka.components();
      auto       base_e = [&](KaEdge const& e) { return !has_t(h, e.label); };
      KnapsackAutomaton const base_ka = ka.restricted(base_e);
      std::vector<KaEdge>     opens, closes;
      for (auto const& e : ka.edges()) {
        if (is_t(h, e.label)) {
          opens.push_back(e);
          closes.push_back(e);
        }
      }
      bool changed = false;
      for (auto const& o : opens) {
        auto reach = detail::reachable(base_ka, o.to, base_e);
        int  alpha = o.label[0] == DoubledAlphabet::inverse(h.t()) ? 1 : -1;
        for (auto const& c : closes) {
          if (c.label[0] != DoubledAlphabet::inverse(o.label[0])
              || !reach[c.from] || comp[o.from] == comp[c.to]) {
            continue;
          }
          for (std::size_t a = 0; a < h.sub(alpha).size(); ++a) {
            Word const& label = h.image(a, alpha);
            if (detail::has_edge(ka, o.from, label, c.to)) {
              continue;
            }
            if (h.base->ka_membership(base_ka.between(o.to, c.from),
                                      h.sub(alpha)[a])) {
              ka.add_edge(o.from, label, c.to);
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

  bool hnn_saturate(HnnPresentation const& h, KnapsackAutomaton const& in,
                    SaturationStats* stats) {
    Letter const top = h.t() + 1;
    for (auto const& e : in.edges()) {
      for (Letter x : e.label) {
        if (x > top) {
          throw PreconditionError("label letter outside base and stable letter");
        }
      }
    }
    // Stable letters get edges of their own.
    KnapsackAutomaton ka = detail::split_labels(
        in, [&](Word const& w) { return has_t(h, w) && w.size() > 1; });
    ka = hnn_normalize(ka);

    std::size_t measure = t_on_cycles(h, ka);
    while (phase1_step(h, ka)) {
      std::size_t now = t_on_cycles(h, ka);
      if (now >= measure) {
        throw std::logic_error("cycle surgery did not remove stable letters");
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
    while (phase2_round(h, ka, stats)) {
    }
    return h.base->ka_membership(
        ka.restricted([&](KaEdge const& e) { return !has_t(h, e.label); }), {});
  }

  namespace {
    std::vector<std::string> hnn_gens(HnnPresentation const& h) {
      auto g = h.base->gens();
      g.push_back(h.stable);
      return g;
    }
  }  // namespace

  HnnOracle::HnnOracle(HnnPresentation h)
      : GroupOracle(hnn_gens(h)), h_(std::move(h)) {
    h_.validate();
  }

  // Britton reduction: pinch t^-alpha w t^alpha with w in A(alpha) until
  // none is left.
  bool HnnOracle::is_identity(Word const& w) const {
    struct Token {
      bool   stable;
      Letter t;
      Word   base;
    };
    std::vector<Token> toks;
    for (Letter x : w) {
      if (DoubledAlphabet::base_of(x) == h_.base->num_gens()) {
        toks.push_back({true, x, {}});
      } else if (DoubledAlphabet::base_of(x) < h_.base->num_gens()) {
        toks.push_back({false, 0, {x}});
      } else {
        throw PreconditionError("letter outside the HNN alphabet");
      }
    }
    std::vector<Token> st;
    for (auto& tok : toks) {
      if (!tok.stable) {
        if (!st.empty() && !st.back().stable) {
          st.back().base.insert(st.back().base.end(), tok.base.begin(),
                                tok.base.end());
        } else {
          st.push_back(std::move(tok));
        }
        continue;
      }
      // Try t^-alpha [w] t^alpha with the closing stable letter tok.
      std::size_t n    = st.size();
      Word        mid;
      std::size_t open = n;
      if (n >= 1 && st[n - 1].stable) {
        open = n - 1;
      } else if (n >= 2 && st[n - 2].stable) {
        mid  = st[n - 1].base;
        open = n - 2;
      }
      if (open < n && st[open].t == DoubledAlphabet::inverse(tok.t)) {
        int alpha = tok.t == h_.t() ? 1 : -1;
        if (auto a = h_.classify(mid, alpha)) {
          st.resize(open);
          Word img = h_.image(*a, alpha);
          if (!st.empty() && !st.back().stable) {
            st.back().base.insert(st.back().base.end(), img.begin(), img.end());
          } else {
            st.push_back({false, 0, img});
          }
          continue;
        }
      }
      st.push_back(std::move(tok));
    }
    if (st.empty()) {
      return true;
    }
    return st.size() == 1 && !st[0].stable && h_.base->is_identity(st[0].base);
  }

  bool HnnOracle::ka_membership(KnapsackAutomaton const& ka,
                                Word const&              target) const {
    return hnn_saturate(h_, target.empty() ? ka : prepend(ka, invert(target)));
  }

  HnnPresentation amalgam_to_hnn(Amalgam const& am) {
    if (am.f0.size() != am.f1.size() || am.f0.empty()) {
      throw StructureError("amalgam tables must list the same elements");
    }
    auto            fp = std::make_shared<FreeProductOracle>(am.g0, am.g1);
    HnnPresentation h;
    h.base     = fp;
    h.sub_plus = am.f0;
    for (auto const& w : am.f1) {
      h.sub_minus.push_back(fp->global(1, w));
    }
    h.phi.resize(am.f0.size());
    for (std::size_t i = 0; i < h.phi.size(); ++i) {
      h.phi[i] = i;
    }
    h.validate();
    return h;
  }

  Word amalgam_embed(Amalgam const& am, Word const& w) {
    std::size_t const n0 = am.g0->num_gens();
    std::size_t const n  = n0 + am.g1->num_gens();
    Letter const      t  = static_cast<Letter>(2 * n);
    Word              out;
    for (Letter x : w) {
      std::size_t g = DoubledAlphabet::base_of(x);
      if (g >= n) {
        throw PreconditionError("letter outside both amalgam factors");
      }
      if (g < n0) {
        out.insert(out.end(), {DoubledAlphabet::inverse(t), x, t});
      } else {
        out.push_back(x);
      }
    }
    return out;
  }

}  // namespace ggk
