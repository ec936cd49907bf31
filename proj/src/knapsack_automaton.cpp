#include <algorithm>
#include <sstream>

#include "ggk/errors.hpp"
#include "ka_surgery.hpp"

namespace ggk {

  State KnapsackAutomaton::add_state(bool final) {
    final_.push_back(final);
    return static_cast<State>(final_.size() - 1);
  }

  void KnapsackAutomaton::add_edge(State from, Word label, State to) {
    if (from >= num_states() || to >= num_states()) {
      throw PreconditionError("edge endpoint out of range");
    }
    edges_.push_back({from, std::move(label), to});
  }

  // Iterative Tarjan.
  std::vector<std::size_t> KnapsackAutomaton::components() const {
    std::size_t const                     n = num_states();
    std::vector<std::vector<State>>       out(n);
    for (auto const& e : edges_) {
      out[e.from].push_back(e.to);
    }
    constexpr std::size_t    kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
    std::vector<State>       stack;
    std::vector<bool>        on_stack(n, false);
    std::size_t              next = 0, ncomp = 0;
    for (State root = 0; root < n; ++root) {
      if (index[root] != kUnset) {
        continue;
      }
      std::vector<std::pair<State, std::size_t>> call{{root, 0}};
      index[root] = low[root] = next++;
      stack.push_back(root);
      on_stack[root] = true;
      while (!call.empty()) {
        auto& [v, i] = call.back();
        if (i < out[v].size()) {
          State w = out[v][i++];
          if (index[w] == kUnset) {
            index[w] = low[w] = next++;
            stack.push_back(w);
            on_stack[w] = true;
            call.emplace_back(w, 0);
          } else if (on_stack[w]) {
            low[v] = std::min(low[v], index[w]);
          }
          continue;
        }
        State done = v;
        call.pop_back();
        if (!call.empty()) {
          low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
        if (low[done] == index[done]) {
          State w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w]     = ncomp;
          } while (w != done);
          ++ncomp;
        }
      }
    }
    return comp;
  }

  std::string KnapsackAutomaton::shape_error() const {
    auto                     comp = components();
    std::size_t              nc   = 0;
    for (auto c : comp) {
      nc = std::max(nc, c + 1);
    }
    std::vector<std::size_t> size(nc, 0), inner(nc, 0);
    std::vector<std::size_t> in_deg(num_states(), 0), out_deg(num_states(), 0);
    for (State q = 0; q < num_states(); ++q) {
      ++size[comp[q]];
    }
    for (auto const& e : edges_) {
      if (comp[e.from] == comp[e.to]) {
        ++inner[comp[e.from]];
        ++out_deg[e.from];
        ++in_deg[e.to];
      }
    }
    for (State q = 0; q < num_states(); ++q) {
      std::size_t c = comp[q];
      if (inner[c] == 0) {
        continue;
      }
      if (inner[c] != size[c] || in_deg[q] != 1 || out_deg[q] != 1) {
        return "component of state " + std::to_string(q)
               + " is not an induced cycle";
      }
    }
    return {};
  }

  std::vector<KnapsackAutomaton::Cycle> KnapsackAutomaton::cycles() const {
    if (auto err = shape_error(); !err.empty()) {
      throw StructureError(err);
    }
    auto                     comp = components();
    std::vector<std::size_t> next_edge(num_states(), edges_.size());
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      auto const& e = edges_[k];
      if (comp[e.from] == comp[e.to]) {
        next_edge[e.from] = k;
      }
    }
    std::vector<bool>  seen(num_states(), false);
    std::vector<Cycle> out;
    for (State q = 0; q < num_states(); ++q) {
      if (seen[q] || next_edge[q] == edges_.size()) {
        continue;
      }
      Cycle c;
      State r = q;
      do {
        seen[r] = true;
        c.states.push_back(r);
        c.edges.push_back(next_edge[r]);
        r = edges_[next_edge[r]].to;
      } while (r != q);
      out.push_back(std::move(c));
    }
    return out;
  }

  bool KnapsackAutomaton::on_cycle(State q) const {
    auto comp = components();
    return std::any_of(edges_.begin(), edges_.end(), [&](KaEdge const& e) {
      return e.from == q && comp[e.to] == comp[q];
    });
  }

  std::vector<Word> KnapsackAutomaton::accepted_upto(
      std::size_t max_edges) const {
    std::vector<std::vector<KaEdge const*>> out(num_states());
    for (auto const& e : edges_) {
      out[e.from].push_back(&e);
    }
    std::vector<Word> words;
    std::function<void(State, Word&, std::size_t)> go =
        [&](State q, Word& w, std::size_t left) {
          if (final_[q]) {
            words.push_back(w);
          }
          if (left == 0) {
            return;
          }
          for (auto const* e : out[q]) {
            std::size_t mark = w.size();
            w.insert(w.end(), e->label.begin(), e->label.end());
            go(e->to, w, left - 1);
            w.resize(mark);
          }
        };
    Word w;
    if (num_states() > 0) {
      go(initial_, w, max_edges);
    }
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    return words;
  }

  KnapsackAutomaton KnapsackAutomaton::restricted(
      std::function<bool(KaEdge const&)> const& keep) const {
    KnapsackAutomaton out;
    out.final_   = final_;
    out.initial_ = initial_;
    for (auto const& e : edges_) {
      if (keep(e)) {
        out.edges_.push_back(e);
      }
    }
    return out;
  }

  KnapsackAutomaton KnapsackAutomaton::between(State p, State q) const {
    KnapsackAutomaton out = *this;
    out.final_.assign(num_states(), false);
    out.final_.at(q) = true;
    out.initial_     = p;
    return out;
  }

  std::string KnapsackAutomaton::dump() const {
    std::ostringstream s;
    for (State q = 0; q < num_states(); ++q) {
      s << "state " << q << (q == initial_ ? " initial" : "")
        << (final_[q] ? " final" : "") << "\n";
    }
    auto sorted = edges_;
    std::sort(sorted.begin(), sorted.end(), [](auto const& x, auto const& y) {
      return std::tie(x.from, x.label, x.to) < std::tie(y.from, y.label, y.to);
    });
    for (auto const& e : sorted) {
      s << "edge " << e.from << " ";
      if (e.label.empty()) {
        s << "eps";
      }
      for (std::size_t i = 0; i < e.label.size(); ++i) {
        s << (i ? "," : "") << e.label[i];
      }
      s << " " << e.to << "\n";
    }
    return s.str();
  }

  namespace {
    // Cycle through fresh states reading w from and back to the returned
    // entry state.
    State add_cycle(KnapsackAutomaton& ka, Word const& w) {
      State entry = ka.add_state();
      State cur   = entry;
      for (std::size_t i = 0; i < w.size(); ++i) {
        State nxt = i + 1 == w.size() ? entry : ka.add_state();
        ka.add_edge(cur, {w[i]}, nxt);
        cur = nxt;
      }
      return entry;
    }
  }  // namespace

  KnapsackAutomaton knapsack_to_ka(std::vector<Word> const& ws) {
    KnapsackAutomaton ka;
    State             cur = ka.add_state();
    ka.set_initial(cur);
    bool any = false;
    for (auto const& w : ws) {
      if (w.empty()) {
        continue;
      }
      State entry = add_cycle(ka, w);
      ka.add_edge(cur, {}, entry);
      cur = entry;
      any = true;
    }
    if (!any) {
      ka.set_final(cur);
      return ka;
    }
    State f = ka.add_state(true);
    ka.add_edge(cur, {}, f);
    return ka;
  }

  KnapsackAutomaton chain_ka(std::vector<Word> const& consts,
                             std::vector<Word> const& bases) {
    if (consts.size() != bases.size() + 1) {
      throw PreconditionError("chain needs one more constant than bases");
    }
    KnapsackAutomaton ka;
    State             cur = ka.add_state();
    ka.set_initial(cur);
    for (std::size_t i = 0; i < bases.size(); ++i) {
      State entry = bases[i].empty() ? ka.add_state() : add_cycle(ka, bases[i]);
      ka.add_edge(cur, consts[i], entry);
      cur = entry;
    }
    State f = ka.add_state(true);
    ka.add_edge(cur, consts.back(), f);
    return ka;
  }

  KnapsackAutomaton prepend(KnapsackAutomaton const& ka, Word const& w) {
    KnapsackAutomaton out = ka;
    State             s   = out.add_state();
    out.add_edge(s, w, ka.initial());
    out.set_initial(s);
    return out;
  }

  bool for_each_skeleton(KnapsackAutomaton const&                    ka,
                         Word const&                                 prefix,
                         std::function<bool(Skeleton const&)> const& visit) {
    if (ka.num_states() == 0) {
      return false;
    }
    auto const                      cycles = ka.cycles();
    constexpr std::size_t           kNone  = static_cast<std::size_t>(-1);
    std::vector<std::size_t>        cyc(ka.num_states(), kNone);
    std::vector<std::size_t>        pos(ka.num_states(), 0);
    std::vector<bool>               cycle_edge(ka.edges().size(), false);
    for (std::size_t c = 0; c < cycles.size(); ++c) {
      for (std::size_t i = 0; i < cycles[c].states.size(); ++i) {
        cyc[cycles[c].states[i]] = c;
        pos[cycles[c].states[i]] = i;
        cycle_edge[cycles[c].edges[i]] = true;
      }
    }
    std::vector<std::vector<std::size_t>> leave(ka.num_states());
    for (std::size_t k = 0; k < ka.edges().size(); ++k) {
      if (!cycle_edge[k]) {
        leave[ka.edges()[k].from].push_back(k);
      }
    }
    auto label = [&](std::size_t c, std::size_t i) -> Word const& {
      auto const& cy = cycles[c];
      return ka.edges()[cy.edges[i % cy.edges.size()]].label;
    };

    Skeleton                   sk;
    sk.consts.push_back(prefix);
    std::function<bool(State)> at_exit;
    std::function<bool(State)> arrive = [&](State p) {
      if (cyc[p] == kNone) {
        return at_exit(p);
      }
      std::size_t c = cyc[p], m = cycles[c].states.size();
      Word        round;
      for (std::size_t i = 0; i < m; ++i) {
        auto const& l = label(c, pos[p] + i);
        round.insert(round.end(), l.begin(), l.end());
      }
      Word path;
      for (std::size_t k = 0; k < m; ++k) {
        State q = cycles[c].states[(pos[p] + k) % m];
        sk.bases.push_back(round);
        sk.consts.push_back(path);
        bool hit = at_exit(q);
        sk.bases.pop_back();
        sk.consts.pop_back();
        if (hit) {
          return true;
        }
        auto const& l = label(c, pos[p] + k);
        path.insert(path.end(), l.begin(), l.end());
      }
      return false;
    };
    at_exit = [&](State q) {
      if (ka.is_final(q) && visit(sk)) {
        return true;
      }
      for (auto k : leave[q]) {
        auto const& e    = ka.edges()[k];
        std::size_t mark = sk.consts.back().size();
        sk.consts.back().insert(sk.consts.back().end(), e.label.begin(),
                                e.label.end());
        bool hit = arrive(e.to);
        sk.consts.back().resize(mark);
        if (hit) {
          return true;
        }
      }
      return false;
    };
    return arrive(ka.initial());
  }

  ExponentEquation skeleton_equation(Skeleton const&   s,
                                     DoubledPtr const& group) {
    auto const&      letters = group->letters();
    ExponentEquation e(group);
    e.add_const(reduce_word(letters, s.consts[0]));
    for (std::size_t i = 0; i < s.bases.size(); ++i) {
      VarId v = e.add_var("x" + std::to_string(i + 1));
      e.add_power(reduce_word(letters, s.bases[i]), v);
      e.add_const(reduce_word(letters, s.consts[i + 1]));
    }
    return e;
  }

  std::vector<ExponentEquation> skeleton_equations(KnapsackAutomaton const& ka,
                                                   Word const&       prefix,
                                                   DoubledPtr const& group) {
    std::vector<ExponentEquation> out;
    for_each_skeleton(ka, prefix, [&](Skeleton const& s) {
      out.push_back(skeleton_equation(s, group));
      return false;
    });
    return out;
  }

  namespace detail {

    void add_chain(KnapsackAutomaton& ka, State from,
                   std::vector<Word> const& labels, State to) {
      State cur = from;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        State nxt = i + 1 == labels.size() ? to : ka.add_state();
        ka.add_edge(cur, labels[i], nxt);
        cur = nxt;
      }
    }

    KnapsackAutomaton split_labels(
        KnapsackAutomaton const&                ka,
        std::function<bool(Word const&)> const& split) {
      KnapsackAutomaton out = ka.restricted(
          [&](KaEdge const& e) { return !split(e.label); });
      for (auto const& e : ka.edges()) {
        if (!split(e.label)) {
          continue;
        }
        std::vector<Word> letters;
        for (Letter x : e.label) {
          letters.push_back({x});
        }
        if (letters.empty()) {
          letters.emplace_back();
        }
        add_chain(out, e.from, letters, e.to);
      }
      return out;
    }

    void shortcut_cycle_run(KnapsackAutomaton&              ka,
                            KnapsackAutomaton::Cycle const& cycle,
                            std::size_t start, std::size_t len, Word label,
                            bool epsilon_arrival) {
      std::size_t const m = cycle.states.size();
      if (len == 0 || len > m) {
        throw std::logic_error("cycle run length out of range");
      }
      auto r = [&](std::size_t i) { return cycle.states[(start + i) % m]; };
      std::vector<Word> u(len + 1);  // u[i] labels r(i-1) -> r(i)
      std::vector<bool> run_edge(ka.edges().size(), false);
      for (std::size_t i = 1; i <= len; ++i) {
        std::size_t k = cycle.edges[(start + i - 1) % m];
        u[i]          = ka.edges()[k].label;
        run_edge[k]   = true;
      }
      State const p = r(0), q = r(len);
      // interior[state] = i + 1 for r(i), 1 <= i < len.
      std::vector<std::size_t> interior(ka.num_states(), 0);
      for (std::size_t i = 1; i < len; ++i) {
        interior[r(i)] = i + 1;
      }
      struct Side {
        State       other;
        Word        label;
        std::size_t i;
      };
      std::vector<Side> arriving, leaving;
      for (std::size_t k = 0; k < ka.edges().size(); ++k) {
        auto const& e = ka.edges()[k];
        if (run_edge[k]) {
          continue;
        }
        if (interior[e.to] && !interior[e.from]) {
          arriving.push_back({e.from, e.label, interior[e.to] - 1});
        }
        if (interior[e.from] && !interior[e.to]) {
          leaving.push_back({e.to, e.label, interior[e.from] - 1});
        }
      }
      // remove_if tests each element before anything is moved onto it, so
      // the address still gives the original index.
      auto& es = ka.edges();
      std::erase_if(es, [&](KaEdge const& e) {
        return run_edge[static_cast<std::size_t>(&e - es.data())] || interior[e.from]
               || interior[e.to];
      });
      ka.add_edge(p, std::move(label), q);

      auto run = [&](std::size_t from, std::size_t to) {
        return std::vector<Word>(u.begin() + static_cast<std::ptrdiff_t>(from),
                                 u.begin() + static_cast<std::ptrdiff_t>(to));
      };
      for (auto const& a : arriving) {
        std::vector<Word> ls{a.label};
        auto              tail = run(a.i + 1, len + 1);
        ls.insert(ls.end(), tail.begin(), tail.end());
        if (epsilon_arrival) {
          ls.emplace_back();
        }
        add_chain(ka, a.other, ls, q);
      }
      for (auto const& l : leaving) {
        auto ls = run(1, l.i + 1);
        ls.push_back(l.label);
        add_chain(ka, p, ls, l.other);
      }
      // Entering at r(i) and leaving at r(j); i = j is a path too.
      for (auto const& a : arriving) {
        for (auto const& l : leaving) {
          if (a.i > l.i) {
            continue;
          }
          std::vector<Word> ls{a.label};
          auto              mid = run(a.i + 1, l.i + 1);
          ls.insert(ls.end(), mid.begin(), mid.end());
          ls.push_back(l.label);
          add_chain(ka, a.other, ls, l.other);
        }
      }
    }

    bool has_edge(KnapsackAutomaton const& ka, State from, Word const& label,
                  State to) {
      return std::any_of(ka.edges().begin(), ka.edges().end(),
                         [&](KaEdge const& e) {
                           return e.from == from && e.to == to
                                  && e.label == label;
                         });
    }

    std::vector<bool> reachable(KnapsackAutomaton const&                  ka,
                                State                                     q,
                                std::function<bool(KaEdge const&)> const& keep) {
      std::vector<bool>  seen(ka.num_states(), false);
      std::vector<State> todo{q};
      seen[q] = true;
      while (!todo.empty()) {
        State s = todo.back();
        todo.pop_back();
        for (auto const& e : ka.edges()) {
          if (e.from == s && !seen[e.to] && keep(e)) {
            seen[e.to] = true;
            todo.push_back(e.to);
          }
        }
      }
      return seen;
    }

  }  // namespace detail

}  // namespace ggk
