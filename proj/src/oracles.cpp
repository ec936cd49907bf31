#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include "ggk/errors.hpp"
#include "ggk/transfer.hpp"

namespace ggk {

  std::optional<std::size_t> GroupOracle::find_gen(
      std::string const& name) const {
    auto it = std::find(gens_.begin(), gens_.end(), name);
    if (it == gens_.end()) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - gens_.begin());
  }

  namespace {
    void check_letters(GroupOracle const& g, Word const& w) {
      for (Letter x : w) {
        if (DoubledAlphabet::base_of(x) >= g.num_gens()) {
          throw PreconditionError("letter " + std::to_string(x)
                                  + " outside the " + g.kind()
                                  + " group alphabet");
        }
      }
    }

    void check_letters(GroupOracle const& g, KnapsackAutomaton const& ka) {
      for (auto const& e : ka.edges()) {
        check_letters(g, e.label);
      }
    }
  }  // namespace

  FiniteGroupOracle::FiniteGroupOracle(
      std::vector<std::string> gens, std::vector<std::vector<std::size_t>> table,
      std::vector<std::size_t> gen_images)
      : GroupOracle(std::move(gens)), table_(std::move(table)) {
    std::size_t const n = table_.size();
    if (n == 0 || gen_images.size() != num_gens()) {
      throw StructureError("finite group needs a table and one image per generator");
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (table_[x].size() != n) {
        throw StructureError("multiplication table is not square");
      }
      std::vector<bool> seen(n, false);
      for (std::size_t y = 0; y < n; ++y) {
        if (table_[x][y] >= n || seen[table_[x][y]]) {
          throw StructureError("multiplication table row is not a permutation");
        }
        seen[table_[x][y]] = true;
      }
      if (table_[0][x] != x || table_[x][0] != x) {
        throw StructureError("element 0 is not the identity");
      }
    }
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t z = 0; z < n; ++z) {
          if (table_[table_[x][y]][z] != table_[x][table_[y][z]]) {
            throw StructureError("multiplication table is not associative");
          }
        }
      }
    }
    for (auto g : gen_images) {
      if (g >= n) {
        throw StructureError("generator image out of range");
      }
      auto inv = static_cast<std::size_t>(
          std::find(table_[g].begin(), table_[g].end(), 0) - table_[g].begin());
      letter_.push_back(g);
      letter_.push_back(inv);
    }
  }

  std::shared_ptr<FiniteGroupOracle> FiniteGroupOracle::cyclic(std::size_t n,
                                                               std::string gen) {
    if (n == 0) {
      throw PreconditionError("cyclic group order must be positive");
    }
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        t[x][y] = (x + y) % n;
      }
    }
    return std::make_shared<FiniteGroupOracle>(
        std::vector<std::string>{std::move(gen)}, std::move(t),
        std::vector<std::size_t>{n > 1 ? 1U : 0U});
  }

  std::size_t FiniteGroupOracle::evaluate(Word const& w) const {
    check_letters(*this, w);
    std::size_t x = 0;
    for (Letter l : w) {
      x = table_[x][letter_[l]];
    }
    return x;
  }

  bool FiniteGroupOracle::is_identity(Word const& w) const {
    return evaluate(w) == 0;
  }

  // Reachability over (state, group element) pairs.
  bool FiniteGroupOracle::ka_membership(KnapsackAutomaton const& ka,
                                        Word const&              target) const {
    check_letters(*this, ka);
    std::size_t const goal = evaluate(target);
    std::size_t const n    = order();
    std::vector<std::vector<std::pair<std::size_t, State>>> out(ka.num_states());
    for (auto const& e : ka.edges()) {
      out[e.from].emplace_back(evaluate(e.label), e.to);
    }
    std::vector<bool>                              seen(ka.num_states() * n, false);
    std::queue<std::pair<State, std::size_t>>      todo;
    todo.emplace(ka.initial(), 0);
    seen[ka.initial() * n] = true;
    while (!todo.empty()) {
      auto [q, g] = todo.front();
      todo.pop();
      if (ka.is_final(q) && g == goal) {
        return true;
      }
      for (auto [x, r] : out[q]) {
        std::size_t h = table_[g][x];
        if (!seen[r * n + h]) {
          seen[r * n + h] = true;
          todo.emplace(r, h);
        }
      }
    }
    return false;
  }

  std::int64_t IntegerOracle::value(Word const& w) const {
    check_letters(*this, w);
    std::int64_t v = 0;
    for (Letter x : w) {
      v += (x & 1U) ? -1 : 1;
    }
    return v;
  }

  bool IntegerOracle::is_identity(Word const& w) const { return value(w) == 0; }

  bool IntegerOracle::ka_membership(KnapsackAutomaton const& ka,
                                    Word const&              target) const {
    check_letters(*this, ka);
    return for_each_skeleton(ka, invert(target), [&](Skeleton const& s) {
      std::int64_t c = 0;
      for (auto const& w : s.consts) {
        c += value(w);
      }
      DiophantineSystem d;
      d.m = s.bases.size();
      d.A = {Vec(d.m, 0)};
      d.a = {-c};
      for (std::size_t i = 0; i < d.m; ++i) {
        d.A[0][i] = value(s.bases[i]);
      }
      return diophantine_solve(d).has_value();
    });
  }

  namespace {
    DoubledPtr free_group(std::size_t n) {
      auto base = std::make_shared<IndependenceAlphabet>();
      for (std::size_t i = 0; i < n; ++i) {
        base->add_letter("g" + std::to_string(i));
      }
      return make_doubled(base);
    }
  }  // namespace

  FreeGroupOracle::FreeGroupOracle(std::vector<std::string> gens)
      : GroupOracle(gens), group_(free_group(gens.size())) {}

  bool FreeGroupOracle::is_identity(Word const& w) const {
    check_letters(*this, w);
    return ggk::is_identity(group_->letters(), w);
  }

  Nfa FreeGroupOracle::to_nfa(KnapsackAutomaton const& ka) const {
    check_letters(*this, ka);
    Nfa a(group_->letters());
    for (State q = 0; q < ka.num_states(); ++q) {
      a.add_state(ka.is_final(q));
    }
    a.set_initial(ka.initial());
    for (auto const& e : ka.edges()) {
      if (e.label.empty()) {
        a.add_transition(e.from, kEpsilon, e.to);
        continue;
      }
      State cur = e.from;
      for (std::size_t i = 0; i < e.label.size(); ++i) {
        State nxt = i + 1 == e.label.size() ? e.to : a.add_state();
        a.add_transition(cur, static_cast<int>(e.label[i]), nxt);
        cur = nxt;
      }
    }
    return a;
  }

  bool FreeGroupOracle::ka_membership(KnapsackAutomaton const& ka,
                                      Word const&              target) const {
    check_letters(*this, target);
    return benois_member(to_nfa(ka), target);
  }

  namespace {
    std::vector<std::string> gen_names(DoubledPtr const& g) {
      std::vector<std::string> out;
      for (std::size_t i = 0; i < g->base()->size(); ++i) {
        out.push_back(g->base()->name(static_cast<Letter>(i)));
      }
      return out;
    }
  }  // namespace

  GraphGroupOracle::GraphGroupOracle(DoubledPtr group, std::size_t search_cap)
      : GroupOracle(gen_names(group)),
        group_(std::move(group)),
        search_cap_(search_cap) {}

  bool GraphGroupOracle::is_identity(Word const& w) const {
    check_letters(*this, w);
    return ggk::is_identity(group_->letters(), w);
  }

  bool GraphGroupOracle::ka_membership(KnapsackAutomaton const& ka,
                                       Word const&              target) const {
    check_letters(*this, ka);
    bool        undecided = false;
    std::string why;
    bool        found     = for_each_skeleton(ka, invert(target), [&](Skeleton const& s) {
      ExponentEquation e = skeleton_equation(s, group_);
      SolveReport      r = solve_exact(e);
      if (r.status == SolveStatus::Unknown) {
        r = solve_search(e, search_cap_);
        if (r.status == SolveStatus::Unknown) {
          undecided = true;
          why       = e.str();
        }
      }
      return r.status == SolveStatus::Solvable;
    });
    if (!found && undecided) {
      throw LimitsExceeded("graph-group skeleton left undecided: " + why);
    }
    return found;
  }

  namespace {
    std::vector<std::string> joined(OraclePtr const& a, OraclePtr const& b) {
      auto out = a->gens();
      out.insert(out.end(), b->gens().begin(), b->gens().end());
      return out;
    }
  }  // namespace

  FreeProductOracle::FreeProductOracle(OraclePtr g0, OraclePtr g1)
      : GroupOracle(joined(g0, g1)), g0_(std::move(g0)), g1_(std::move(g1)) {}

  int FreeProductOracle::factor_of(Letter x) const {
    std::size_t g = DoubledAlphabet::base_of(x);
    if (g < g0_->num_gens()) {
      return 0;
    }
    if (g < num_gens()) {
      return 1;
    }
    return -1;
  }

  Word FreeProductOracle::local(Word const& w) const {
    Word out;
    for (Letter x : w) {
      int f = factor_of(x);
      if (f < 0) {
        throw PreconditionError("letter outside both factors");
      }
      out.push_back(f == 0 ? x : x - static_cast<Letter>(2 * g0_->num_gens()));
    }
    return out;
  }

  Word FreeProductOracle::global(int factor, Word const& w) const {
    Word out = w;
    if (factor == 1) {
      for (auto& x : out) {
        x += static_cast<Letter>(2 * g0_->num_gens());
      }
    }
    return out;
  }

  // Removes trivial syllables until none is left; the word is trivial iff
  // this empties it.
  bool FreeProductOracle::is_identity(Word const& w) const {
    std::vector<std::pair<int, Word>> syl;
    for (Letter x : w) {
      int f = factor_of(x);
      if (f < 0) {
        throw PreconditionError("letter outside both factors");
      }
      if (syl.empty() || syl.back().first != f) {
        syl.emplace_back(f, Word{});
      }
      syl.back().second.push_back(x);
    }
    bool progress = true;
    while (progress && !syl.empty()) {
      progress = false;
      for (std::size_t i = 0; i < syl.size(); ++i) {
        if (!factor(syl[i].first)->is_identity(local(syl[i].second))) {
          continue;
        }
        syl.erase(syl.begin() + static_cast<std::ptrdiff_t>(i));
        if (i > 0 && i < syl.size() && syl[i - 1].first == syl[i].first) {
          auto& prev = syl[i - 1].second;
          prev.insert(prev.end(), syl[i].second.begin(), syl[i].second.end());
          syl.erase(syl.begin() + static_cast<std::ptrdiff_t>(i));
        }
        progress = true;
        break;
      }
    }
    return syl.empty();
  }

  bool FreeProductOracle::ka_membership(KnapsackAutomaton const& ka,
                                        Word const&              target) const {
    return free_product_saturate(g0_, g1_, prepend(ka, invert(target)));
  }

}  // namespace ggk
