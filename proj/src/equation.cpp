#include <algorithm>
#include <cmath>
#include <sstream>

#include "ggk/errors.hpp"
#include "ggk/solver.hpp"

namespace ggk {

  VarId ExponentEquation::add_var(std::string name, bool integer) {
    if (find_var(name)) {
      throw PreconditionError("duplicate variable " + name);
    }
    names_.push_back(std::move(name));
    integer_.push_back(integer);
    return names_.size() - 1;
  }

  std::optional<VarId> ExponentEquation::find_var(
      std::string const& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
      return std::nullopt;
    }
    return static_cast<VarId>(it - names_.begin());
  }

  bool ExponentEquation::has_integer_vars() const {
    return std::find(integer_.begin(), integer_.end(), true) != integer_.end();
  }

  void ExponentEquation::add_const(GroupElement g) {
    if (!items_.empty() && !items_.back().is_power()) {
      g = items_.back().element * g;
      items_.pop_back();
    }
    if (!g.is_identity()) {
      items_.push_back({std::move(g), std::nullopt});
    }
  }

  void ExponentEquation::add_power(GroupElement base, VarId var) {
    if (var >= names_.size()) {
      throw PreconditionError("unknown variable id");
    }
    items_.push_back({std::move(base), var});
  }

  std::size_t ExponentEquation::num_powers() const {
    return static_cast<std::size_t>(
        std::count_if(items_.begin(), items_.end(),
                      [](EquationItem const& i) { return i.is_power(); }));
  }

  std::string ExponentEquation::str() const {
    std::ostringstream out;
    bool               first = true;
    for (auto const& item : items_) {
      out << (first ? "" : " ");
      first = false;
      if (item.is_power()) {
        out << "(" << item.element.str() << ")^" << names_[*item.var];
      } else {
        out << item.element.str();
      }
    }
    out << (first ? "_" : "") << " = 1";
    return out.str();
  }

  AlternatingForm alternating(ExponentEquation const& e) {
    AlternatingForm f;
    f.consts.emplace_back(e.letters());
    for (auto const& item : e.items()) {
      if (item.is_power()) {
        f.powers.push_back(item);
        f.consts.emplace_back(e.letters());
      } else {
        f.consts.back() = f.consts.back() * item.element;
      }
    }
    return f;
  }

  namespace {
    ExponentEquation with_same_vars(ExponentEquation const& e) {
      ExponentEquation out(e.group());
      for (VarId v = 0; v < e.num_vars(); ++v) {
        out.add_var(e.var_name(v), e.is_integer_var(v));
      }
      return out;
    }
  }  // namespace

  ExponentEquation preprocess(ExponentEquation const& e) {
    ExponentEquation out = with_same_vars(e);
    for (auto const& item : e.items()) {
      if (!item.is_power()) {
        out.add_const(item.element);
        continue;
      }
      if (item.element.is_identity()) {
        continue;
      }
      auto [p, w] = cyclic_reduce(item.element);
      out.add_const(p);
      for (auto const& c : connected_components(w.trace())) {
        out.add_power(GroupElement::from_irreducible(c), *item.var);
      }
      out.add_const(invert(p));
    }
    return out;
  }

  namespace {
    struct Block {
      GroupElement g;  // the constant, or the cyclically reduced base
      bool         power = false;
      natural      exp;  // signed for powers
    };

    void push_block(std::vector<Block>& st, Block b) {
      if (!b.power) {
        if (!st.empty() && !st.back().power) {
          b.g = st.back().g * b.g;
          st.pop_back();
        }
        if (!b.g.is_identity()) {
          st.push_back(std::move(b));
        }
        return;
      }
      if (b.exp == 0) {
        return;
      }
      if (!st.empty() && st.back().power) {
        Block& top = st.back();
        if (top.g == b.g) {
          top.exp += b.exp;
        } else if (top.g == invert(b.g)) {
          top.exp -= b.exp;
        } else {
          st.push_back(std::move(b));
          return;
        }
        if (top.exp == 0) {
          st.pop_back();
        }
        return;
      }
      st.push_back(std::move(b));
    }
  }  // namespace

  bool verify(ExponentEquation const& e, Assignment const& a,
              natural const& cap) {
    if (a.size() != e.num_vars()) {
      throw PreconditionError("assignment does not cover the variables");
    }
    // Powers are kept symbolic as w^k with w cyclically reduced, so that
    // adjacent powers of the same base merge before anything is expanded.
    std::vector<Block> blocks;
    for (auto const& item : e.items()) {
      if (!item.is_power()) {
        push_block(blocks, {item.element, false, 0});
        continue;
      }
      if (item.element.is_identity()) {
        continue;
      }
      auto [p, w] = cyclic_reduce(item.element);
      push_block(blocks, {p, false, 0});
      push_block(blocks, {w, true, a[*item.var]});
      push_block(blocks, {invert(p), false, 0});
    }
    GroupElement acc(e.letters());
    for (auto& b : blocks) {
      GroupElement g = b.g;
      if (b.power) {
        if (b.exp < 0) {
          g     = invert(g);
          b.exp = -b.exp;
        }
        g = power_nf(g, b.exp, cap);
      }
      natural required = natural(acc.size()) + natural(g.size());
      if (required > cap) {
        throw ResourceExceeded(required);
      }
      Word w = acc.word();
      w.insert(w.end(), g.word().begin(), g.word().end());
      acc = reduce_word(e.letters(), w);
    }
    return acc.is_identity();
  }

  DiophantineSystem abelian_relaxation(ExponentEquation const& e) {
    std::size_t const gens = e.group()->base()->size();
    DiophantineSystem d;
    d.m = e.num_vars();
    d.A.assign(gens, Vec(d.m, 0));
    d.a.assign(gens, 0);
    for (auto const& item : e.items()) {
      for (Letter x : item.element.word()) {
        Letter const       g    = DoubledAlphabet::base_of(x);
        std::int64_t const sign = (x & 1U) ? -1 : 1;
        if (item.is_power()) {
          d.A[g][*item.var] += sign;
        } else {
          d.a[g] -= sign;
        }
      }
    }
    d.C.assign(d.m, Vec(d.m, 0));
    for (std::size_t i = 0; i < d.m; ++i) {
      d.C[i][i] = 1;
    }
    d.c.assign(d.m, 0);
    return d;
  }

  std::vector<Assignment> brute_oracle(ExponentEquation const& e,
                                       std::size_t             cap) {
    auto const& items = e.items();
    // powers[i][j] = base_i^j, by repeated multiplication.
    std::vector<std::vector<GroupElement>> powers(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!items[i].is_power()) {
        continue;
      }
      powers[i].emplace_back(e.letters());
      for (std::size_t j = 1; j <= cap; ++j) {
        powers[i].push_back(powers[i].back() * items[i].element);
      }
    }
    std::vector<Assignment>  out;
    std::vector<std::size_t> x(e.num_vars(), 0);
    while (true) {
      GroupElement acc(e.letters());
      for (std::size_t i = 0; i < items.size(); ++i) {
        acc = acc * (items[i].is_power() ? powers[i][x[*items[i].var]]
                                         : items[i].element);
      }
      if (acc.is_identity()) {
        out.emplace_back(x.begin(), x.end());
      }
      std::size_t j = 0;
      while (j < x.size() && x[j] == cap) {
        x[j++] = 0;
      }
      if (j == x.size()) {
        break;
      }
      ++x[j];
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  IntegerRewrite z_to_n_rewrite(ExponentEquation const& e) {
    IntegerRewrite r;
    r.equation = ExponentEquation(e.group());
    for (VarId v = 0; v < e.num_vars(); ++v) {
      r.equation.add_var(e.var_name(v));
    }
    std::vector<std::optional<VarId>> negative(e.num_vars());
    for (VarId v = 0; v < e.num_vars(); ++v) {
      if (!e.is_integer_var(v)) {
        continue;
      }
      std::string name = e.var_name(v) + "_neg";
      while (r.equation.find_var(name)) {
        name += "_";
      }
      negative[v] = r.equation.add_var(name);
      r.split.emplace_back(v, *negative[v]);
    }
    for (auto const& item : e.items()) {
      if (!item.is_power()) {
        r.equation.add_const(item.element);
        continue;
      }
      r.equation.add_power(item.element, *item.var);
      if (negative[*item.var]) {
        r.equation.add_power(invert(item.element), *negative[*item.var]);
      }
    }
    return r;
  }

  ExponentEquation knapsack_to_equation(DoubledPtr                       group,
                                        std::vector<GroupElement> const& us,
                                        GroupElement const&              u) {
    ExponentEquation e(std::move(group));
    for (std::size_t i = 0; i < us.size(); ++i) {
      e.add_power(us[i], e.add_var("x" + std::to_string(i + 1)));
    }
    e.add_const(invert(u));
    return e;
  }

  BoundReport solution_bound(ExponentEquation const& e) {
    natural const n     = e.num_powers();
    natural const alpha = e.group()->base()->max_independent_set();
    natural const gens  = e.group()->base()->size();
    std::size_t   lam   = 1;
    for (auto const& item : e.items()) {
      lam = std::max(lam, item.element.size());
    }
    natural const lambda = lam;

    auto pw = [](natural const& b, natural const& x) {
      return boost::multiprecision::pow(b, static_cast<unsigned>(x));
    };
    natural const nu = pw(lambda, alpha);
    natural const mu = pw(gens, alpha) * pw(2, 2 * alpha * alpha * n) * nu;
    natural const e_two = 2 * alpha * alpha * n * (n + 3);
    natural const e_mu  = 8 * alpha * (n + 1);
    natural const e_nu  = 8 * alpha * gens * (n + 1);

    BoundReport r;
    std::ostringstream f;
    f << "(" << alpha << "*" << n << ")! * 2^" << e_two << " * mu^" << e_mu
      << " * nu^" << e_nu << " with mu=" << mu << " nu=" << nu
      << " lambda=" << lambda;
    r.formula = f.str();

    // Keep the evaluation to numbers below roughly 2^(2^20).
    auto log2n = [](natural const& x) {
      return x == 0 ? 0.0 : static_cast<double>(boost::multiprecision::msb(x)) + 1;
    };
    double bits = static_cast<double>(e_two) + static_cast<double>(e_mu) * log2n(mu)
                  + static_cast<double>(e_nu) * log2n(nu);
    natural an = alpha * n;
    for (natural i = 2; i <= an; ++i) {
      bits += std::log2(static_cast<double>(i));
    }
    if (bits < static_cast<double>(1U << 20U)) {
      natural fact = 1;
      for (natural i = 2; i <= an; ++i) {
        fact *= i;
      }
      r.value = fact * pw(2, e_two) * pw(mu, e_mu) * pw(nu, e_nu);
    }
    return r;
  }

  char const* to_string(SolveStatus s) {
    switch (s) {
      case SolveStatus::Solvable: return "solvable";
      case SolveStatus::Unsolvable: return "unsolvable";
      case SolveStatus::Unknown: return "unknown";
    }
    return "unknown";
  }

}  // namespace ggk
