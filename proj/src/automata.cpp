#include "ggk/automata.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "ggk/errors.hpp"

namespace ggk {

  Nfa Nfa::unary() {
    return Nfa();
  }

  State Nfa::add_state(bool final) {
    out_.emplace_back();
    final_.push_back(final);
    return static_cast<State>(out_.size() - 1);
  }

  void Nfa::add_transition(State from, int label, State to) {
    if (from >= out_.size() || to >= out_.size()) {
      throw PreconditionError("transition on unknown state");
    }
    if (label != kEpsilon
        && (label < 0 || static_cast<std::size_t>(label) >= num_letters())) {
      throw PreconditionError("transition label outside the alphabet");
    }
    out_[from].emplace_back(label, to);
  }

  std::vector<Transition> Nfa::transitions() const {
    std::vector<Transition> all;
    for (State q = 0; q < out_.size(); ++q) {
      for (auto [a, r] : out_[q]) {
        all.push_back({q, a, r});
      }
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
  }

  std::size_t Nfa::num_transitions() const {
    std::size_t n = 0;
    for (auto const& o : out_) {
      n += o.size();
    }
    return n;
  }

  bool Nfa::has_epsilon() const {
    for (auto const& o : out_) {
      for (auto [a, r] : o) {
        if (a == kEpsilon) {
          return true;
        }
      }
    }
    return false;
  }

  namespace {
    using StateSet = std::vector<bool>;

    void close_epsilon(Nfa const& a, std::vector<State>& states,
                       StateSet& in) {
      for (std::size_t i = 0; i < states.size(); ++i) {
        for (auto [l, r] : a.out(states[i])) {
          if (l == kEpsilon && !in[r]) {
            in[r] = true;
            states.push_back(r);
          }
        }
      }
    }

    std::vector<State> step(Nfa const& a, std::vector<State> const& from,
                            int letter) {
      StateSet           in(a.num_states(), false);
      std::vector<State> next;
      for (State q : from) {
        for (auto [l, r] : a.out(q)) {
          if (l == letter && !in[r]) {
            in[r] = true;
            next.push_back(r);
          }
        }
      }
      close_epsilon(a, next, in);
      std::sort(next.begin(), next.end());
      return next;
    }

    std::vector<State> start_set(Nfa const& a) {
      StateSet           in(a.num_states(), false);
      std::vector<State> s{a.initial()};
      in[a.initial()] = true;
      close_epsilon(a, s, in);
      std::sort(s.begin(), s.end());
      return s;
    }
  }  // namespace

  bool Nfa::accepts(Word const& w) const {
    if (out_.empty()) {
      return false;
    }
    auto cur = start_set(*this);
    for (Letter x : w) {
      cur = step(*this, cur, static_cast<int>(x));
      if (cur.empty()) {
        return false;
      }
    }
    return std::any_of(
        cur.begin(), cur.end(), [this](State q) { return final_[q]; });
  }

  std::vector<Word> Nfa::language_upto(std::size_t n) const {
    std::vector<Word> out;
    if (out_.empty()) {
      return out;
    }
    // Shortest distance to a final state, for pruning.
    std::size_t const              inf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t>        dist(num_states(), inf);
    std::vector<std::vector<std::pair<State, bool>>> rev(num_states());
    for (State q = 0; q < num_states(); ++q) {
      for (auto [l, r] : out_[q]) {
        rev[r].emplace_back(q, l != kEpsilon);
      }
    }
    std::deque<State> queue;
    for (State q = 0; q < num_states(); ++q) {
      if (final_[q]) {
        dist[q] = 0;
        queue.push_back(q);
      }
    }
    while (!queue.empty()) {
      State r = queue.front();
      queue.pop_front();
      for (auto [q, lettered] : rev[r]) {
        std::size_t d = dist[r] + (lettered ? 1 : 0);
        if (d < dist[q]) {
          dist[q] = d;
          if (lettered) {
            queue.push_back(q);
          } else {
            queue.push_front(q);
          }
        }
      }
    }
    Word                                            cur;
    std::function<void(std::vector<State> const&)> walk
        = [&](std::vector<State> const& set) {
            std::size_t best = inf;
            bool        acc  = false;
            for (State q : set) {
              best = std::min(best, dist[q]);
              acc  = acc || final_[q];
            }
            if (best == inf || best + cur.size() > n) {
              return;
            }
            if (acc) {
              out.push_back(cur);
            }
            if (cur.size() == n) {
              return;
            }
            for (std::size_t a = 0; a < num_letters(); ++a) {
              auto next = step(*this, set, static_cast<int>(a));
              if (!next.empty()) {
                cur.push_back(static_cast<Letter>(a));
                walk(next);
                cur.pop_back();
              }
            }
          };
    walk(start_set(*this));
    std::sort(out.begin(), out.end());
    return out;
  }

  std::string Nfa::dump() const {
    std::string s;
    auto        letter_name = [this](int l) -> std::string {
      if (l == kEpsilon) {
        return "eps";
      }
      return alphabet_ ? alphabet_->name(static_cast<Letter>(l)) : "#";
    };
    for (State q = 0; q < num_states(); ++q) {
      s += "state " + std::to_string(q);
      if (q == initial_) {
        s += " initial";
      }
      if (final_[q]) {
        s += " final";
      }
      if (memorizing) {
        s += " alpha=";
        LetterSet m     = (*memorizing)[q];
        bool      first = true;
        while (m != 0) {
          auto a = static_cast<Letter>(std::countr_zero(m));
          m &= m - 1;
          s += (first ? "" : ",") + letter_name(static_cast<int>(a));
          first = false;
        }
      }
      s += '\n';
    }
    for (auto const& t : transitions()) {
      s += "edge " + std::to_string(t.from) + " " + letter_name(t.label) + " "
           + std::to_string(t.to) + '\n';
    }
    return s;
  }

  ////////////////////////////////////////////////////////////////////////
  // Certificates
  ////////////////////////////////////////////////////////////////////////

  bool check_i_diamond(Nfa const& a) {
    if (!a.alphabet()) {
      return true;
    }
    auto const& A = *a.alphabet();
    std::vector<std::set<std::pair<int, State>>> edges(a.num_states());
    for (State q = 0; q < a.num_states(); ++q) {
      edges[q].insert(a.out(q).begin(), a.out(q).end());
    }
    for (State p = 0; p < a.num_states(); ++p) {
      for (auto [x, q] : edges[p]) {
        if (x == kEpsilon) {
          continue;
        }
        for (auto [y, r] : edges[q]) {
          if (y == kEpsilon
              || !A.independent(static_cast<Letter>(x), static_cast<Letter>(y))) {
            continue;
          }
          bool found = false;
          for (auto it = edges[p].lower_bound({y, 0});
               it != edges[p].end() && it->first == y && !found;
               ++it) {
            found = edges[it->second].count({x, r}) != 0;
          }
          if (!found) {
            return false;
          }
        }
      }
    }
    return true;
  }

  bool check_memorizing(Nfa const& a) {
    if (!a.memorizing || a.memorizing->size() != a.num_states()) {
      return false;
    }
    std::vector<std::optional<LetterSet>> seen(a.num_states());
    std::vector<State>                    queue{a.initial()};
    seen[a.initial()] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      State q = queue[i];
      for (auto [l, r] : a.out(q)) {
        LetterSet m = *seen[q] | (l == kEpsilon ? 0 : bit(static_cast<Letter>(l)));
        if (!seen[r]) {
          seen[r] = m;
          queue.push_back(r);
        } else if (*seen[r] != m) {
          return false;
        }
      }
    }
    for (State q = 0; q < a.num_states(); ++q) {
      if (!seen[q] || *seen[q] != (*a.memorizing)[q]) {
        return false;
      }
    }
    return true;
  }

  namespace {
    void certify(Nfa const& a, char const* what) {
      if (a.i_diamond && !check_i_diamond(a)) {
        throw std::logic_error(std::string(what) + ": I-diamond check failed");
      }
      if (a.memorizing && !check_memorizing(a)) {
        throw std::logic_error(std::string(what)
                               + ": memorizing check failed");
      }
    }

    // Certificates of large products are trusted to the construction.
    constexpr std::size_t kValidateLimit = 4096;
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Closure constructions
  ////////////////////////////////////////////////////////////////////////

  Nfa prefix_nfa(Trace const& t) {
    auto lat = prefix_lattice(t);
    Nfa  a(t.alphabet());
    std::vector<LetterSet> alpha;
    for (std::size_t i = 0; i < lat.traces.size(); ++i) {
      a.add_state(i == lat.full);
      alpha.push_back(lat.traces[i].alph());
    }
    for (std::size_t i = 0; i < lat.traces.size(); ++i) {
      for (std::size_t x = 0; x < lat.next[i].size(); ++x) {
        if (lat.next[i][x] >= 0) {
          a.add_transition(static_cast<State>(i), static_cast<int>(x),
                           static_cast<State>(lat.next[i][x]));
        }
      }
    }
    a.set_initial(0);
    a.i_diamond  = true;
    a.memorizing = std::move(alpha);
    certify(a, "prefix_nfa");
    return a;
  }

  Nfa star_nfa(Trace const& u, bool memorize) {
    if (u.empty()) {
      throw PreconditionError("star_nfa needs a nonempty trace");
    }
    if (!is_connected(u)) {
      throw PreconditionError("star_nfa needs a connected trace");
    }
    auto const&       A    = *u.alphabet();
    auto const        lat  = prefix_lattice(u);
    std::size_t const full = lat.full;
    LetterSet const   all  = u.alph();

    std::vector<LetterSet> in_prefix(lat.traces.size()), in_rest(lat.traces.size());
    for (std::size_t i = 0; i < lat.traces.size(); ++i) {
      in_prefix[i] = lat.traces[i].alph();
      in_rest[i]   = left_quotient(lat.traces[i], u)->alph();
    }
    auto proper = [&](int i) {
      return i > 0 && static_cast<std::size_t>(i) != full;
    };

    using Tuple = std::vector<int>;
    auto valid  = [&](Tuple const& t) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (!proper(t[i])) {
          return false;
        }
        for (std::size_t j = i + 1; j < t.size(); ++j) {
          if (!A.independent(in_rest[t[i]], in_prefix[t[j]])) {
            return false;
          }
        }
      }
      return true;
    };

    // A state is a tuple of prefix indices plus the completion bit.
    std::map<std::pair<Tuple, bool>, State> index;
    std::vector<std::pair<Tuple, bool>>     states;
    Nfa                                     a(u.alphabet());
    auto                                    intern = [&](Tuple t, bool done) {
      auto key = std::make_pair(std::move(t), memorize && done);
      auto it  = index.find(key);
      if (it != index.end()) {
        return it->second;
      }
      State id = a.add_state(key.first.empty());
      index.emplace(key, id);
      states.push_back(std::move(key));
      return id;
    };

    intern({}, false);
    for (std::size_t s = 0; s < states.size(); ++s) {
      Tuple const      t    = states[s].first;
      bool const       done = states[s].second;
      std::size_t const c   = t.size();
      // after[i] = alph(t[i] ... t[c-1])
      std::vector<LetterSet> after(c + 1, 0);
      for (std::size_t i = c; i > 0; --i) {
        after[i - 1] = after[i] | in_prefix[t[i - 1]];
      }
      LetterSet rest = all;
      while (rest != 0) {
        auto x = static_cast<Letter>(std::countr_zero(rest));
        rest &= rest - 1;
        auto edge = [&](Tuple next, bool completes) {
          State to = intern(std::move(next), done || completes);
          a.add_transition(static_cast<State>(s), static_cast<int>(x), to);
        };
        LetterSet const indep = A.independent_of(x);
        // (a) the whole of u is the single letter x
        if (c == 0 && u.size() == 1) {
          edge({}, true);
        }
        // (b) x completes the first entry
        if (c > 0 && lat.next[t[0]][x] == static_cast<int>(full)
            && (after[1] & ~indep) == 0) {
          edge(Tuple(t.begin() + 1, t.end()), true);
        }
        // (c) x starts a new entry at position i
        int const single = lat.next[0][x];
        if (proper(single)) {
          for (std::size_t i = 0; i <= c; ++i) {
            if ((after[i] & ~indep) != 0) {
              continue;
            }
            Tuple next = t;
            next.insert(next.begin() + static_cast<std::ptrdiff_t>(i), single);
            if (valid(next)) {
              edge(std::move(next), false);
            }
          }
        }
        // (d) x extends entry i
        for (std::size_t i = 0; i < c; ++i) {
          if ((after[i + 1] & ~indep) != 0) {
            continue;
          }
          int grown = lat.next[t[i]][x];
          if (!proper(grown)) {
            continue;
          }
          Tuple next = t;
          next[i]    = grown;
          if (valid(next)) {
            edge(std::move(next), false);
          }
        }
      }
    }
    a.set_initial(0);
    a.i_diamond = true;
    if (memorize) {
      std::vector<LetterSet> alpha;
      for (auto const& [t, done] : states) {
        LetterSet m = done ? all : 0;
        for (int i : t) {
          m |= in_prefix[i];
        }
        alpha.push_back(m);
      }
      a.memorizing = std::move(alpha);
    }
    certify(a, "star_nfa");
    return a;
  }

  Nfa concat_closure(Nfa const& a1, Nfa const& a2) {
    if (!a1.i_diamond || !a2.i_diamond) {
      throw PreconditionError("concat_closure needs I-diamond automata");
    }
    if (!a2.memorizing) {
      throw PreconditionError(
          "concat_closure needs a memorizing second automaton");
    }
    if (!same_alphabet(a1.alphabet(), a2.alphabet()) || !a1.alphabet()) {
      throw PreconditionError("concat_closure alphabet mismatch");
    }
    auto const&       A     = *a1.alphabet();
    auto const&       alpha = *a2.memorizing;
    std::size_t const n2    = a2.num_states();
    Nfa               a(a1.alphabet());
    for (State q1 = 0; q1 < a1.num_states(); ++q1) {
      for (State q2 = 0; q2 < n2; ++q2) {
        a.add_state(a1.is_final(q1) && a2.is_final(q2));
      }
    }
    auto id = [n2](State q1, State q2) {
      return static_cast<State>(q1 * n2 + q2);
    };
    for (State q1 = 0; q1 < a1.num_states(); ++q1) {
      for (State q2 = 0; q2 < n2; ++q2) {
        for (auto [x, r1] : a1.out(q1)) {
          if (x != kEpsilon
              && (alpha[q2] & ~A.independent_of(static_cast<Letter>(x))) == 0) {
            a.add_transition(id(q1, q2), x, id(r1, q2));
          }
        }
        for (auto [x, r2] : a2.out(q2)) {
          a.add_transition(id(q1, q2), x, id(q1, r2));
        }
      }
    }
    a.set_initial(id(a1.initial(), a2.initial()));
    a.i_diamond = true;
    if (a.num_states() <= kValidateLimit) {
      certify(a, "concat_closure");
    }
    return a;
  }

  Nfa power_closure_nfa(Trace const& p, Trace const& u, Trace const& s) {
    return concat_closure(concat_closure(prefix_nfa(p), star_nfa(u, true)),
                          prefix_nfa(s));
  }

  ////////////////////////////////////////////////////////////////////////
  // Products and unary automata
  ////////////////////////////////////////////////////////////////////////

  namespace {
    void check_same_letters(Nfa const& a, Nfa const& b) {
      if (a.alphabet() || b.alphabet()) {
        if (!same_alphabet(a.alphabet(), b.alphabet())) {
          throw PreconditionError("intersect alphabet mismatch");
        }
      }
    }

    template <typename Emit>
    void product_moves(Nfa const& a, Nfa const& b, State i, State j,
                       Emit&& emit) {
      for (auto [x, i2] : a.out(i)) {
        if (x == kEpsilon) {
          emit(kEpsilon, i2, j);
          continue;
        }
        for (auto [y, j2] : b.out(j)) {
          if (x == y) {
            emit(x, i2, j2);
          }
        }
      }
      for (auto [y, j2] : b.out(j)) {
        if (y == kEpsilon) {
          emit(kEpsilon, i, j2);
        }
      }
    }
  }  // namespace

  Nfa intersect(Nfa const& a, Nfa const& b) {
    check_same_letters(a, b);
    std::size_t const nb = b.num_states();
    Nfa               r(a.alphabet());
    for (State i = 0; i < a.num_states(); ++i) {
      for (State j = 0; j < nb; ++j) {
        r.add_state(a.is_final(i) && b.is_final(j));
      }
    }
    for (State i = 0; i < a.num_states(); ++i) {
      for (State j = 0; j < nb; ++j) {
        product_moves(a, b, i, j, [&](int x, State i2, State j2) {
          r.add_transition(static_cast<State>(i * nb + j), x,
                           static_cast<State>(i2 * nb + j2));
        });
      }
    }
    if (a.num_states() > 0 && nb > 0) {
      r.set_initial(static_cast<State>(a.initial() * nb + b.initial()));
    }
    return r;
  }

  Nfa intersect_reachable(Nfa const& a, Nfa const& b) {
    check_same_letters(a, b);
    Nfa r(a.alphabet());
    if (a.num_states() == 0 || b.num_states() == 0) {
      return r;
    }
    std::unordered_map<std::uint64_t, State> index;
    std::vector<std::pair<State, State>>     pairs;
    auto intern = [&](State i, State j) {
      std::uint64_t key = (std::uint64_t{i} << 32U) | j;
      auto          it  = index.find(key);
      if (it != index.end()) {
        return it->second;
      }
      State id = r.add_state(a.is_final(i) && b.is_final(j));
      index.emplace(key, id);
      pairs.emplace_back(i, j);
      return id;
    };
    intern(a.initial(), b.initial());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      auto [i, j] = pairs[k];
      product_moves(a, b, i, j, [&](int x, State i2, State j2) {
        State to = intern(i2, j2);
        r.add_transition(static_cast<State>(k), x, to);
      });
    }
    r.set_initial(0);
    return r;
  }

  Nfa trim(Nfa const& a) {
    std::size_t const n = a.num_states();
    Nfa               r(a.alphabet());
    if (n == 0) {
      return r;
    }
    std::vector<bool> fwd(n, false), bwd(n, false);
    std::vector<State> queue{a.initial()};
    fwd[a.initial()] = true;
    std::vector<std::vector<State>> rev(n);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (auto [x, q] : a.out(queue[i])) {
        if (!fwd[q]) {
          fwd[q] = true;
          queue.push_back(q);
        }
      }
    }
    for (State q = 0; q < n; ++q) {
      for (auto [x, t] : a.out(q)) {
        rev[t].push_back(q);
      }
    }
    queue.clear();
    for (State q = 0; q < n; ++q) {
      if (a.is_final(q)) {
        bwd[q] = true;
        queue.push_back(q);
      }
    }
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (State q : rev[queue[i]]) {
        if (!bwd[q]) {
          bwd[q] = true;
          queue.push_back(q);
        }
      }
    }
    std::vector<std::int64_t> remap(n, -1);
    remap[a.initial()] = r.add_state(a.is_final(a.initial()));
    for (State q = 0; q < n; ++q) {
      if (q != a.initial() && fwd[q] && bwd[q]) {
        remap[q] = r.add_state(a.is_final(q));
      }
    }
    for (State q = 0; q < n; ++q) {
      if (remap[q] < 0) {
        continue;
      }
      for (auto [x, t] : a.out(q)) {
        if (remap[t] >= 0) {
          r.add_transition(static_cast<State>(remap[q]), x,
                           static_cast<State>(remap[t]));
        }
      }
    }
    r.set_initial(static_cast<State>(remap[a.initial()]));
    return r;
  }

  Nfa length_automaton(Nfa const& a) {
    Nfa u = Nfa::unary();
    for (State q = 0; q < a.num_states(); ++q) {
      u.add_state(a.is_final(q));
    }
    for (State q = 0; q < a.num_states(); ++q) {
      for (auto [x, r] : a.out(q)) {
        if (x == kEpsilon) {
          throw PreconditionError("length_automaton needs an epsilon-free NFA");
        }
        u.add_transition(q, 0, r);
      }
    }
    u.set_initial(a.initial());
    return u;
  }

  std::vector<Progression> unary_progressions(Nfa const& u) {
    if (u.alphabet()) {
      throw PreconditionError("unary_progressions needs a unary NFA");
    }
    std::vector<Progression> out;
    if (u.num_states() == 0) {
      return out;
    }
    Nfa const a = trim(u);
    // Determinize: the subsets S_0, S_1, ... are eventually periodic.
    std::map<std::vector<State>, std::uint64_t> seen;
    std::vector<std::vector<State>>              sets;
    std::vector<State>                           cur = start_set(a);
    while (seen.find(cur) == seen.end()) {
      seen.emplace(cur, sets.size());
      sets.push_back(cur);
      cur = step(a, cur, 0);
    }
    std::uint64_t const tail   = seen[cur];
    std::uint64_t const period = sets.size() - tail;
    for (std::uint64_t i = 0; i < sets.size(); ++i) {
      bool acc = std::any_of(sets[i].begin(), sets[i].end(),
                             [&](State q) { return a.is_final(q); });
      if (acc) {
        out.push_back({i, i < tail ? 0 : period});
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Benois
  ////////////////////////////////////////////////////////////////////////

  namespace {
    void check_free(Nfa const& a) {
      if (!a.alphabet() || a.alphabet()->size() % 2 != 0
          || a.alphabet()->has_independence()) {
        throw PreconditionError(
            "Benois saturation needs a doubled alphabet without independence");
      }
    }
  }  // namespace

  Nfa benois_saturate(Nfa const& a) {
    check_free(a);
    Nfa               r = a;
    std::size_t const n = r.num_states();
    std::vector<std::vector<bool>> eps(n, std::vector<bool>(n, false));
    for (State q = 0; q < n; ++q) {
      eps[q][q] = true;
      for (auto [x, t] : r.out(q)) {
        if (x == kEpsilon) {
          eps[q][t] = true;
        }
      }
    }
    auto closure = [&](State q) {
      std::vector<State> s{q};
      std::vector<bool>  in(n, false);
      in[q] = true;
      for (std::size_t i = 0; i < s.size(); ++i) {
        for (auto [x, t] : r.out(s[i])) {
          if (x == kEpsilon && !in[t]) {
            in[t] = true;
            s.push_back(t);
          }
        }
      }
      return s;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      for (State p = 0; p < n; ++p) {
        for (State r1 : closure(p)) {
          auto const moves = r.out(r1);
          for (auto [x, r2] : moves) {
            if (x == kEpsilon) {
              continue;
            }
            int const xinv = x ^ 1;
            for (State r3 : closure(r2)) {
              auto const back = r.out(r3);
              for (auto [y, r4] : back) {
                if (y != xinv) {
                  continue;
                }
                for (State q : closure(r4)) {
                  if (!eps[p][q]) {
                    eps[p][q] = true;
                    r.add_transition(p, kEpsilon, q);
                    changed = true;
                  }
                }
              }
            }
          }
        }
      }
    }
    return r;
  }

  bool benois_member(Nfa const& a, Word const& w) {
    check_free(a);
    Word reduced;
    for (Letter x : w) {
      if (!reduced.empty() && reduced.back() == (x ^ 1U)) {
        reduced.pop_back();
      } else {
        reduced.push_back(x);
      }
    }
    return benois_saturate(a).accepts(reduced);
  }

  ////////////////////////////////////////////////////////////////////////

  std::vector<Word> linearizations(Trace const& t) {
    std::vector<Word> out;
    if (!t.alphabet()) {
      out.emplace_back();
      return out;
    }
    auto const&                    A = *t.alphabet();
    Word                           cur;
    std::function<void(Word const&)> rec = [&](Word const& rest) {
      if (rest.empty()) {
        out.push_back(cur);
        return;
      }
      LetterSet seen = 0, used = 0;
      for (std::size_t i = 0; i < rest.size(); ++i) {
        Letter x = rest[i];
        if ((seen & A.dependent_on(x)) == 0 && (used & bit(x)) == 0) {
          used |= bit(x);
          Word next = rest;
          next.erase(next.begin() + static_cast<std::ptrdiff_t>(i));
          cur.push_back(x);
          rec(next);
          cur.pop_back();
        }
        seen |= bit(x);
      }
    };
    rec(t.word());
    std::sort(out.begin(), out.end());
    return out;
  }

}  // namespace ggk
