#include "ggk/slp.hpp"

#include <algorithm>
#include <functional>

#include "ggk/errors.hpp"

namespace ggk {

  int Slp::add_variable(std::string name) {
    if (find(name) >= 0) {
      throw StructureError("variable '" + name + "' defined twice");
    }
    names_.push_back(std::move(name));
    rhs_.emplace_back();
    if (start_ < 0) {
      start_ = 0;
    }
    return static_cast<int>(names_.size() - 1);
  }

  int Slp::find(std::string const& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
  }

  void Slp::set_rhs(int var, std::vector<SlpSymbol> rhs) {
    for (auto const& s : rhs) {
      if (s.is_var() && s.var >= static_cast<int>(names_.size())) {
        throw StructureError("right-hand side uses an unknown variable");
      }
    }
    rhs_.at(var) = std::move(rhs);
  }

  std::size_t Slp::size() const {
    std::size_t n = 0;
    for (auto const& r : rhs_) {
      n += r.size();
    }
    return n;
  }

  std::vector<int> Slp::topological_order() const {
    enum : char { fresh, active, done };
    std::vector<char> mark(names_.size(), fresh);
    std::vector<int>  order;
    // Iterative DFS so that deep chains do not exhaust the stack.
    for (int root = 0; root < static_cast<int>(names_.size()); ++root) {
      if (mark[root] != fresh) {
        continue;
      }
      std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
      mark[root] = active;
      while (!stack.empty()) {
        auto& [v, i] = stack.back();
        if (i == rhs_[v].size()) {
          mark[v] = done;
          order.push_back(v);
          stack.pop_back();
          continue;
        }
        auto const& s = rhs_[v][i++];
        if (!s.is_var()) {
          continue;
        }
        if (mark[s.var] == active) {
          throw StructureError("SLP is cyclic at variable '" + names_[s.var]
                               + "'");
        }
        if (mark[s.var] == fresh) {
          mark[s.var] = active;
          stack.emplace_back(s.var, 0);
        }
      }
    }
    return order;
  }

  std::string Slp::fresh_name(std::string const& stem) const {
    for (std::size_t i = 0;; ++i) {
      std::string candidate = stem + std::to_string(i);
      if (find(candidate) < 0) {
        return candidate;
      }
    }
  }

  namespace {
    std::vector<natural> lengths(Slp const& g) {
      std::vector<natural> len(g.num_variables());
      for (int v : g.topological_order()) {
        natural n = 0;
        for (auto const& s : g.rhs(v)) {
          n += s.is_var() ? len[s.var] : natural(1);
        }
        len[v] = n;
      }
      return len;
    }
  }  // namespace

  natural val_length(Slp const& g) {
    if (g.start() < 0) {
      throw StructureError("SLP has no start variable");
    }
    return lengths(g)[g.start()];
  }

  std::vector<std::string> expand_capped(Slp const& g, natural const& cap) {
    natural n = val_length(g);
    if (n > cap) {
      throw ResourceExceeded(n);
    }
    std::vector<std::string>                  out;
    out.reserve(static_cast<std::size_t>(n));
    std::vector<std::pair<int, std::size_t>>  stack{{g.start(), 0}};
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i == g.rhs(v).size()) {
        stack.pop_back();
        continue;
      }
      auto const& s = g.rhs(v)[i++];
      if (s.is_var()) {
        stack.emplace_back(s.var, 0);
      } else {
        out.push_back(s.terminal);
      }
    }
    return out;
  }

  Slp power_slp(Slp const& g, natural const& k) {
    if (k == 0) {
      Slp e;
      e.add_variable("S");
      return e;
    }
    if (k == 1) {
      return g;
    }
    Slp r = g;
    // squares[i] has value val(g)^(2^i).
    std::vector<int> squares{g.start()};
    natural          rest = k;
    std::vector<int> parts;
    for (std::size_t i = 0; rest != 0; ++i, rest >>= 1) {
      if (i > 0) {
        int sq = r.add_variable(r.fresh_name("Pow"));
        r.set_rhs(sq,
                  {SlpSymbol::variable(squares.back()),
                   SlpSymbol::variable(squares.back())});
        squares.push_back(sq);
      }
      if ((rest & 1) != 0) {
        parts.push_back(squares.back());
      }
    }
    if (parts.size() == 1) {
      r.set_start(parts.front());
      return r;
    }
    int top = r.add_variable(r.fresh_name("Pow"));
    std::vector<SlpSymbol> rhs;
    for (int p : parts) {
      rhs.push_back(SlpSymbol::variable(p));
    }
    r.set_rhs(top, std::move(rhs));
    r.set_start(top);
    return r;
  }

  Slp compression_witness(std::size_t n, std::string const& letter) {
    Slp g;
    if (n == 0) {
      int s = g.add_variable("A0");
      g.set_rhs(s, {SlpSymbol::letter(letter)});
      return g;
    }
    int prev = g.add_variable("A1");
    g.set_rhs(prev, {SlpSymbol::letter(letter), SlpSymbol::letter(letter)});
    for (std::size_t i = 2; i <= n; ++i) {
      int v = g.add_variable("A" + std::to_string(i));
      g.set_rhs(v, {SlpSymbol::variable(prev), SlpSymbol::variable(prev)});
      prev = v;
    }
    g.set_start(prev);
    return g;
  }

  Slp slp_for_power(std::string const& token, natural const& n) {
    Slp base;
    int s = base.add_variable("B");
    base.set_rhs(s, {SlpSymbol::letter(token)});
    return power_slp(base, n);
  }

}  // namespace ggk
