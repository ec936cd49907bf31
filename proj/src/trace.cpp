#include "ggk/trace.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "ggk/errors.hpp"

namespace ggk {

  IndependenceAlphabet::IndependenceAlphabet(std::vector<std::string> names) {
    for (auto& n : names) {
      add_letter(std::move(n));
    }
  }

  Letter IndependenceAlphabet::add_letter(std::string name) {
    if (names_.size() >= kMaxLetters) {
      throw PreconditionError("alphabet holds at most 64 letters");
    }
    if (find(name)) {
      throw PreconditionError("duplicate letter '" + name + "'");
    }
    names_.push_back(std::move(name));
    indep_.push_back(0);
    return static_cast<Letter>(names_.size() - 1);
  }

  void IndependenceAlphabet::set_independent(Letter a, Letter b) {
    if (a >= size() || b >= size()) {
      throw PreconditionError("independence on unknown letter");
    }
    if (a == b) {
      throw PreconditionError("independence must be irreflexive");
    }
    indep_[a] |= bit(b);
    indep_[b] |= bit(a);
  }

  std::optional<Letter> IndependenceAlphabet::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) {
        return static_cast<Letter>(i);
      }
    }
    return std::nullopt;
  }

  bool IndependenceAlphabet::independent(LetterSet x, LetterSet y) const {
    while (x != 0) {
      auto a = static_cast<Letter>(std::countr_zero(x));
      x &= x - 1;
      if ((y & ~indep_[a]) != 0) {
        return false;
      }
    }
    return true;
  }

  LetterSet IndependenceAlphabet::all_letters() const {
    return size() == 64 ? ~LetterSet{0} : (LetterSet{1} << size()) - 1;
  }

  bool IndependenceAlphabet::has_independence() const {
    return std::any_of(
        indep_.begin(), indep_.end(), [](LetterSet s) { return s != 0; });
  }

  std::size_t IndependenceAlphabet::max_independent_set() const {
    // Plain branch and bound over cliques of the independence graph.
    std::size_t                              best = 0;
    std::function<void(LetterSet, std::size_t)> grow
        = [&](LetterSet candidates, std::size_t depth) {
            if (candidates == 0) {
              best = std::max(best, depth);
              return;
            }
            if (depth + std::popcount(candidates) <= best) {
              return;
            }
            auto a = static_cast<Letter>(std::countr_zero(candidates));
            grow(candidates & indep_[a], depth + 1);
            grow(candidates & ~bit(a), depth);
          };
    grow(all_letters(), 0);
    return best;
  }

  bool same_alphabet(AlphabetPtr const& a, AlphabetPtr const& b) {
    if (a == b) {
      return true;
    }
    if (!a || !b) {
      return false;
    }
    return *a == *b;
  }

  ////////////////////////////////////////////////////////////////////////
  // Normal forms
  ////////////////////////////////////////////////////////////////////////

  Word canonical_word(IndependenceAlphabet const& alphabet, Word const& raw) {
    std::size_t const n = raw.size();
    for (Letter a : raw) {
      if (a >= alphabet.size()) {
        throw PreconditionError("letter index outside the alphabet");
      }
    }
    // Dependence DAG restricted to the last earlier occurrence of each
    // dependent letter, then the lexicographically least topological order.
    std::vector<std::vector<std::uint32_t>> succ(n);
    std::vector<std::uint32_t>              indeg(n, 0);
    std::vector<std::int64_t> last(alphabet.size(), -1);
    for (std::size_t j = 0; j < n; ++j) {
      LetterSet dep = alphabet.dependent_on(raw[j]);
      while (dep != 0) {
        auto b = static_cast<Letter>(std::countr_zero(dep));
        dep &= dep - 1;
        if (last[b] >= 0) {
          succ[last[b]].push_back(static_cast<std::uint32_t>(j));
          ++indeg[j];
        }
      }
      last[raw[j]] = static_cast<std::int64_t>(j);
    }
    using Key = std::pair<Letter, std::uint32_t>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
    for (std::size_t j = 0; j < n; ++j) {
      if (indeg[j] == 0) {
        ready.emplace(raw[j], static_cast<std::uint32_t>(j));
      }
    }
    Word out;
    out.reserve(n);
    while (!ready.empty()) {
      auto [a, j] = ready.top();
      ready.pop();
      out.push_back(a);
      for (auto k : succ[j]) {
        if (--indeg[k] == 0) {
          ready.emplace(raw[k], k);
        }
      }
    }
    return out;
  }

  Trace::Trace(AlphabetPtr alphabet, Word const& raw)
      : alphabet_(std::move(alphabet)) {
    if (!alphabet_) {
      throw PreconditionError("trace without alphabet");
    }
    word_ = canonical_word(*alphabet_, raw);
  }

  Trace Trace::from_canonical(AlphabetPtr alphabet, Word canonical) {
    Trace t;
    t.alphabet_ = std::move(alphabet);
    t.word_     = std::move(canonical);
    return t;
  }

  LetterSet Trace::alph() const {
    LetterSet s = 0;
    for (Letter a : word_) {
      s |= bit(a);
    }
    return s;
  }

  std::string Trace::str() const {
    if (word_.empty()) {
      return "_";
    }
    std::string out;
    for (std::size_t i = 0; i < word_.size(); ++i) {
      if (i != 0) {
        out += ' ';
      }
      out += alphabet_->name(word_[i]);
    }
    return out;
  }

  Trace Trace::operator*(Trace const& other) const {
    if (!same_alphabet(alphabet_, other.alphabet_)) {
      throw PreconditionError("trace alphabet mismatch");
    }
    Word w = word_;
    w.insert(w.end(), other.word_.begin(), other.word_.end());
    return Trace(alphabet_, w);
  }

  std::size_t TraceHash::operator()(Trace const& t) const {
    std::size_t h = t.size();
    for (Letter a : t.word()) {
      h = h * 1000003U ^ a;
    }
    return h;
  }

  Trace normal_form(AlphabetPtr const& alphabet, Word const& raw) {
    return Trace(alphabet, raw);
  }

  bool trace_equal(Trace const& s, Trace const& t) {
    if (!same_alphabet(s.alphabet(), t.alphabet())) {
      throw PreconditionError("trace alphabet mismatch");
    }
    return s.word() == t.word();
  }

  Trace power(Trace const& t, std::size_t k) {
    Word w;
    w.reserve(t.size() * k);
    for (std::size_t i = 0; i < k; ++i) {
      w.insert(w.end(), t.word().begin(), t.word().end());
    }
    return Trace(t.alphabet(), w);
  }

  std::optional<Trace> left_quotient(Trace const& prefix, Trace const& t) {
    auto const& A = *t.alphabet();
    Word        rest = t.word();
    for (Letter a : prefix.word()) {
      // The first occurrence of a must be minimal in what remains.
      LetterSet   before = 0;
      std::size_t i      = 0;
      for (; i < rest.size() && rest[i] != a; ++i) {
        before |= bit(rest[i]);
      }
      if (i == rest.size() || (before & ~A.independent_of(a)) != 0) {
        return std::nullopt;
      }
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return Trace(t.alphabet(), rest);
  }

  std::optional<Trace> right_quotient(Trace const& t, Trace const& suffix) {
    auto const& A    = *t.alphabet();
    Word        rest = t.word();
    for (auto it = suffix.word().rbegin(); it != suffix.word().rend(); ++it) {
      Letter    a     = *it;
      LetterSet after = 0;
      std::size_t i   = rest.size();
      while (i > 0 && rest[i - 1] != a) {
        after |= bit(rest[i - 1]);
        --i;
      }
      if (i == 0 || (after & ~A.independent_of(a)) != 0) {
        return std::nullopt;
      }
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i - 1));
    }
    return Trace(t.alphabet(), rest);
  }

  ////////////////////////////////////////////////////////////////////////
  // Prefixes
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // Positions of each letter and, per position, how many occurrences of
    // each letter precede it.
    struct Occurrences {
      std::vector<std::vector<std::uint32_t>> pos;
      std::vector<std::vector<std::uint32_t>> before;
    };

    Occurrences occurrences(Trace const& t) {
      std::size_t const k = t.alphabet()->size();
      Occurrences       occ;
      occ.pos.resize(k);
      std::vector<std::uint32_t> count(k, 0);
      for (std::size_t j = 0; j < t.size(); ++j) {
        occ.before.push_back(count);
        occ.pos[t.word()[j]].push_back(static_cast<std::uint32_t>(j));
        ++count[t.word()[j]];
      }
      return occ;
    }

    struct VecHash {
      std::size_t operator()(std::vector<std::uint32_t> const& v) const {
        std::size_t h = 0;
        for (auto x : v) {
          h = h * 131U + x;
        }
        return h;
      }
    };
  }  // namespace

  PrefixLattice prefix_lattice(Trace const& t) {
    auto const&       A = *t.alphabet();
    std::size_t const k = A.size();
    Occurrences const occ = occurrences(t);

    using Counts = std::vector<std::uint32_t>;
    std::unordered_map<Counts, int, VecHash> index;
    std::vector<Counts>                      states;
    PrefixLattice                            lat;

    auto intern = [&](Counts const& c) {
      auto it = index.find(c);
      if (it != index.end()) {
        return it->second;
      }
      int id = static_cast<int>(states.size());
      index.emplace(c, id);
      states.push_back(c);
      lat.next.emplace_back(k, -1);
      return id;
    };

    intern(Counts(k, 0));
    for (std::size_t s = 0; s < states.size(); ++s) {
      for (Letter a = 0; a < k; ++a) {
        Counts const c = states[s];
        if (c[a] >= occ.pos[a].size()) {
          continue;
        }
        auto const& need = occ.before[occ.pos[a][c[a]]];
        bool        ok   = true;
        for (Letter b = 0; b < k && ok; ++b) {
          if (b != a && !A.independent(a, b) && c[b] < need[b]) {
            ok = false;
          }
        }
        if (ok) {
          Counts d = c;
          ++d[a];
          int id             = intern(d);
          lat.next[s][a]     = id;
        }
      }
    }
    lat.traces.reserve(states.size());
    for (auto const& c : states) {
      Word w;
      std::vector<std::uint32_t> seen(k, 0);
      for (Letter a : t.word()) {
        if (seen[a] < c[a]) {
          w.push_back(a);
        }
        ++seen[a];
      }
      lat.traces.emplace_back(t.alphabet(), w);
    }
    lat.full = states.size() - 1;
    return lat;
  }

  natural prefix_count(Trace const& t) {
    return natural(prefix_lattice(t).traces.size());
  }

  std::vector<Trace> prefixes(Trace const& t) {
    return prefix_lattice(t).traces;
  }

  ////////////////////////////////////////////////////////////////////////
  // Connectivity
  ////////////////////////////////////////////////////////////////////////

  std::vector<Trace> connected_components(Trace const& t) {
    auto const& A       = *t.alphabet();
    LetterSet   letters = t.alph();
    std::vector<Trace> out;
    while (letters != 0) {
      LetterSet comp     = bit(static_cast<Letter>(std::countr_zero(letters)));
      LetterSet frontier = comp;
      while (frontier != 0) {
        auto a = static_cast<Letter>(std::countr_zero(frontier));
        frontier &= frontier - 1;
        LetterSet fresh = A.dependent_on(a) & letters & ~comp;
        comp |= fresh;
        frontier |= fresh;
      }
      Word w;
      for (Letter a : t.word()) {
        if (comp & bit(a)) {
          w.push_back(a);
        }
      }
      out.emplace_back(t.alphabet(), w);
      letters &= ~comp;
    }
    return out;
  }

  bool is_connected(Trace const& t) {
    return connected_components(t).size() <= 1;
  }

  ////////////////////////////////////////////////////////////////////////
  // Levi
  ////////////////////////////////////////////////////////////////////////

  std::optional<LeviGrid> levi_decompose(std::vector<Trace> const& us,
                                         std::vector<Trace> const& vs) {
    AlphabetPtr alphabet;
    for (auto const& t : us) {
      alphabet = t.alphabet();
    }
    for (auto const& t : vs) {
      if (alphabet && !same_alphabet(alphabet, t.alphabet())) {
        throw PreconditionError("trace alphabet mismatch");
      }
      alphabet = t.alphabet();
    }
    LeviGrid grid;
    grid.cols = us.size();
    grid.rows = vs.size();
    if (!alphabet) {
      // Both products are empty sequences.
      return grid;
    }
    Word left, right;
    for (auto const& t : us) {
      left.insert(left.end(), t.word().begin(), t.word().end());
    }
    for (auto const& t : vs) {
      right.insert(right.end(), t.word().begin(), t.word().end());
    }
    if (canonical_word(*alphabet, left) != canonical_word(*alphabet, right)) {
      return std::nullopt;
    }
    // The k-th occurrence of a letter is the same vertex of the dependence
    // graph on both sides; a cell collects the vertices of us[i] that lie
    // in vs[j].
    std::size_t const                       k = alphabet->size();
    std::vector<std::vector<std::size_t>>   owner(k);
    for (std::size_t j = 0; j < vs.size(); ++j) {
      for (Letter a : vs[j].word()) {
        owner[a].push_back(j);
      }
    }
    std::vector<std::size_t> seen(k, 0);
    std::vector<Word>        cells(us.size() * vs.size());
    for (std::size_t i = 0; i < us.size(); ++i) {
      for (Letter a : us[i].word()) {
        std::size_t j = owner[a][seen[a]++];
        cells[i * vs.size() + j].push_back(a);
      }
    }
    grid.cells.reserve(cells.size());
    for (auto const& w : cells) {
      grid.cells.emplace_back(alphabet, w);
    }
    return grid;
  }

}  // namespace ggk
