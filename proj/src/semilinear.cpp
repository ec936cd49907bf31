#include "ggk/semilinear.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>

#include "ggk/errors.hpp"

namespace ggk {

  void SemilinearSet::add(LinearSet l) {
    if (l.dim() != dim) {
      throw PreconditionError("linear set dimension mismatch");
    }
    // Zero periods add nothing.
    l.periods.erase(std::remove_if(l.periods.begin(), l.periods.end(),
                                   [](Vec const& p) {
                                     return std::all_of(
                                         p.begin(), p.end(),
                                         [](std::int64_t x) { return x == 0; });
                                   }),
                    l.periods.end());
    std::sort(l.periods.begin(), l.periods.end());
    l.periods.erase(std::unique(l.periods.begin(), l.periods.end()),
                    l.periods.end());
    if (std::find(components.begin(), components.end(), l) == components.end()) {
      components.push_back(std::move(l));
    }
  }

  void SemilinearSet::add(SemilinearSet const& other) {
    for (auto const& l : other.components) {
      add(l);
    }
  }

  std::int64_t DiophantineSystem::beta() const {
    std::int64_t b = 0;
    for (auto const& row : A) {
      for (auto x : row) {
        b = std::max(b, std::abs(x));
      }
    }
    for (auto x : a) {
      b = std::max(b, std::abs(x));
    }
    for (auto const& row : C) {
      for (auto x : row) {
        b = std::max(b, std::abs(x));
      }
    }
    for (auto x : c) {
      b = std::max(b, std::abs(x));
    }
    return b;
  }

  void DiophantineSystem::validate() const {
    if (a.size() != A.size() || C.size() != c.size()) {
      throw PreconditionError("Diophantine system dimension mismatch");
    }
    for (auto const& row : A) {
      if (row.size() != m) {
        throw PreconditionError("Diophantine system dimension mismatch");
      }
    }
    for (std::size_t i = 0; i < C.size(); ++i) {
      if (C[i].size() != m || c[i] < 0
          || std::any_of(C[i].begin(), C[i].end(),
                         [](std::int64_t x) { return x < 0; })) {
        throw PreconditionError("Diophantine image map must be natural");
      }
    }
  }

  namespace {
    std::uint64_t sat_mul(std::uint64_t x, std::uint64_t y) {
      if (x != 0 && y > UINT64_MAX / x) {
        return UINT64_MAX;
      }
      return x * y;
    }
  }  // namespace

  std::uint64_t diophantine_cutoff(std::size_t n, std::size_t m,
                                   std::int64_t beta) {
    std::uint64_t r = m + 1;
    for (std::size_t i = 2; i <= n; ++i) {
      r = sat_mul(r, i);
    }
    for (std::size_t i = 0; i < n; ++i) {
      r = sat_mul(r, static_cast<std::uint64_t>(beta));
    }
    return r;
  }

  natural lemma12_image_bound(std::size_t n, std::size_t m,
                              std::int64_t beta) {
    natural fact = 1;
    for (std::size_t i = 2; i <= n; ++i) {
      fact *= i;
    }
    natural b = beta;
    return b + fact * natural(m) * natural(m + 1) * pow(b, n + 1);
  }

  namespace {
    // Depth-first search over z with residue and sign pruning. Calls
    // visit(z) for each solution in the box; visit returns false to stop.
    void search_box(Matrix const& A, Vec const& a, std::size_t m,
                    std::vector<std::uint64_t> const& ub,
                    std::function<bool(Vec const&)> const& visit) {
      std::size_t const n = A.size();
      // Suffix data per row: gcd and extreme contributions.
      std::vector<std::vector<std::int64_t>> gcds(n, std::vector<std::int64_t>(m + 1, 0));
      std::vector<std::vector<std::int64_t>> lo(n, std::vector<std::int64_t>(m + 1, 0));
      std::vector<std::vector<std::int64_t>> hi(n, std::vector<std::int64_t>(m + 1, 0));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = m; j > 0; --j) {
          std::int64_t const x = A[i][j - 1];
          auto const         u = static_cast<std::int64_t>(
              std::min<std::uint64_t>(ub[j - 1], (std::uint64_t{1} << 40U) / (std::abs(x) + 1)));
          gcds[i][j - 1] = std::gcd(gcds[i][j], std::abs(x));
          lo[i][j - 1]   = lo[i][j] + std::min<std::int64_t>(0, x * u);
          hi[i][j - 1]   = hi[i][j] + std::max<std::int64_t>(0, x * u);
        }
      }
      Vec  z(m, 0);
      Vec  r = a;
      bool stop = false;
      auto feasible = [&](std::size_t j) {
        for (std::size_t i = 0; i < n; ++i) {
          if (gcds[i][j] == 0 ? r[i] != 0 : r[i] % gcds[i][j] != 0) {
            return false;
          }
          if (r[i] < lo[i][j] || r[i] > hi[i][j]) {
            return false;
          }
        }
        return true;
      };
      std::function<void(std::size_t)> rec = [&](std::size_t j) {
        if (stop || !feasible(j)) {
          return;
        }
        if (j == m) {
          stop = !visit(z);
          return;
        }
        for (std::uint64_t v = 0; v <= ub[j] && !stop; ++v) {
          z[j] = static_cast<std::int64_t>(v);
          rec(j + 1);
          bool hopeless = false;
          for (std::size_t i = 0; i < n; ++i) {
            r[i] -= A[i][j];
            // r[i] only moves away from the reachable window from here on.
            hopeless = hopeless || (A[i][j] > 0 && r[i] < lo[i][j + 1])
                       || (A[i][j] < 0 && r[i] > hi[i][j + 1]);
          }
          if (hopeless) {
            break;
          }
        }
        for (std::size_t i = 0; i < n; ++i) {
          r[i] += A[i][j] * static_cast<std::int64_t>(
                      std::min<std::uint64_t>(ub[j], static_cast<std::uint64_t>(z[j])) + 1);
        }
        z[j] = 0;
      };
      rec(0);
    }

    // Sign-definite rows bound every variable they mention.
    std::vector<std::uint64_t> variable_bounds(Matrix const& A, Vec const& a,
                                               std::size_t   m,
                                               std::uint64_t cutoff) {
      std::vector<std::uint64_t> ub(m, cutoff);
      for (std::size_t i = 0; i < A.size(); ++i) {
        bool nonneg = std::all_of(A[i].begin(), A[i].end(),
                                  [](std::int64_t x) { return x >= 0; });
        bool nonpos = std::all_of(A[i].begin(), A[i].end(),
                                  [](std::int64_t x) { return x <= 0; });
        if (!nonneg && !nonpos) {
          continue;
        }
        std::int64_t rhs = nonneg ? a[i] : -a[i];
        for (std::size_t j = 0; j < m; ++j) {
          std::int64_t x = std::abs(A[i][j]);
          if (x == 0) {
            continue;
          }
          std::uint64_t b = rhs < 0 ? 0 : static_cast<std::uint64_t>(rhs / x);
          ub[j] = std::min(ub[j], b);
        }
      }
      return ub;
    }
  }  // namespace

  std::optional<DiophantineSolution> diophantine_solve(
      DiophantineSystem const& d) {
    d.validate();
    std::size_t const n      = d.rows();
    std::uint64_t     cutoff = diophantine_cutoff(n, d.m, d.beta());
    auto              ub     = variable_bounds(d.A, d.a, d.m, cutoff);
    for (std::size_t j = 0; j < d.m; ++j) {
      // A free variable never helps; fix it to zero.
      if (std::all_of(d.A.begin(), d.A.end(),
                      [&](Vec const& row) { return row[j] == 0; })) {
        ub[j] = 0;
      }
    }
    std::optional<DiophantineSolution> found;
    search_box(d.A, d.a, d.m, ub, [&](Vec const& z) {
      DiophantineSolution s;
      s.z = z;
      s.image = d.c;
      for (std::size_t i = 0; i < d.C.size(); ++i) {
        for (std::size_t j = 0; j < d.m; ++j) {
          s.image[i] += d.C[i][j] * z[j];
        }
      }
      found = std::move(s);
      return false;
    });
    return found;
  }

  bool member(LinearSet const& l, Vec const& v) {
    if (v.size() != l.dim()) {
      throw PreconditionError("membership dimension mismatch");
    }
    DiophantineSystem d;
    d.m = l.periods.size();
    for (std::size_t i = 0; i < v.size(); ++i) {
      Vec row;
      for (auto const& p : l.periods) {
        row.push_back(p[i]);
      }
      d.A.push_back(std::move(row));
      d.a.push_back(v[i] - l.base[i]);
    }
    return diophantine_solve(d).has_value();
  }

  bool member(SemilinearSet const& s, Vec const& v) {
    if (v.size() != s.dim) {
      throw PreconditionError("membership dimension mismatch");
    }
    return std::any_of(s.components.begin(), s.components.end(),
                       [&](LinearSet const& l) { return member(l, v); });
  }

  MinimalSolutions minimal_solutions(Matrix const& A, Vec const& a,
                                     std::size_t m) {
    std::size_t const n    = A.size();
    std::int64_t      beta = 0, widest = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t w = std::abs(a[i]);
      beta           = std::max(beta, std::abs(a[i]));
      for (auto x : A[i]) {
        w += std::abs(x);
        beta = std::max(beta, std::abs(x));
      }
      widest = std::max(widest, w);
    }
    // Minimal solutions of the homogenized system [A | -a] have 1-norm at
    // most (1 + widest row)^n; the Diophantine cutoff is kept as a floor.
    std::uint64_t bound = 1;
    for (std::size_t i = 0; i < n; ++i) {
      bound = sat_mul(bound, static_cast<std::uint64_t>(1 + widest));
    }
    bound = std::max(bound, diophantine_cutoff(n, m, beta));
    if (bound > 4096 && m > 2) {
      throw LimitsExceeded("minimal-solution enumeration box too large");
    }
    MinimalSolutions out;
    auto             collect = [&](Vec const& rhs, std::vector<Vec>& into,
                       bool skip_zero) {
      auto ub = variable_bounds(A, rhs, m, bound);
      search_box(A, rhs, m, ub, [&](Vec const& z) {
        bool zero = std::all_of(z.begin(), z.end(),
                                [](std::int64_t x) { return x == 0; });
        if (!(skip_zero && zero)) {
          into.push_back(z);
        }
        return true;
      });
      auto leq = [](Vec const& x, Vec const& y) {
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (x[i] > y[i]) {
            return false;
          }
        }
        return true;
      };
      std::vector<Vec> minimal;
      for (auto const& z : into) {
        bool dominated = false;
        for (auto const& w : into) {
          if (w != z && leq(w, z)) {
            dominated = true;
            break;
          }
        }
        if (!dominated) {
          minimal.push_back(z);
        }
      }
      into = std::move(minimal);
    };
    collect(a, out.inhomogeneous, false);
    if (!out.inhomogeneous.empty()) {
      collect(Vec(n, 0), out.homogeneous, true);
    }
    return out;
  }

  SemilinearSet identify_variables(SemilinearSet const&            s,
                                   std::vector<std::size_t> const& rep) {
    if (rep.size() != s.dim) {
      throw PreconditionError("identification map dimension mismatch");
    }
    std::size_t k = 0;
    for (auto r : rep) {
      k = std::max(k, r + 1);
    }
    std::vector<std::int64_t> leader(k, -1);
    for (std::size_t i = 0; i < rep.size(); ++i) {
      if (leader[rep[i]] < 0) {
        leader[rep[i]] = static_cast<std::int64_t>(i);
      }
    }
    if (std::any_of(leader.begin(), leader.end(),
                    [](std::int64_t x) { return x < 0; })) {
      throw PreconditionError("identification map is not onto");
    }
    auto project = [&](Vec const& v) {
      Vec out(k);
      for (std::size_t c = 0; c < k; ++c) {
        out[c] = v[leader[c]];
      }
      return out;
    };
    SemilinearSet result;
    result.dim = k;
    for (auto const& l : s.components) {
      std::size_t const r = l.periods.size();
      Matrix            A;
      Vec               a;
      for (std::size_t i = 0; i < rep.size(); ++i) {
        auto L = static_cast<std::size_t>(leader[rep[i]]);
        if (L == i) {
          continue;
        }
        Vec row(r);
        for (std::size_t j = 0; j < r; ++j) {
          row[j] = l.periods[j][i] - l.periods[j][L];
        }
        A.push_back(std::move(row));
        a.push_back(l.base[L] - l.base[i]);
      }
      auto combine = [&](Vec const& z) {
        Vec v = l.base;
        for (std::size_t j = 0; j < r; ++j) {
          for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] += z[j] * l.periods[j][i];
          }
        }
        return v;
      };
      auto sols = minimal_solutions(A, a, r);
      for (auto const& m0 : sols.inhomogeneous) {
        LinearSet out;
        out.base = project(combine(m0));
        for (auto const& h : sols.homogeneous) {
          Vec p(s.dim, 0);
          for (std::size_t j = 0; j < r; ++j) {
            for (std::size_t i = 0; i < p.size(); ++i) {
              p[i] += h[j] * l.periods[j][i];
            }
          }
          out.periods.push_back(project(p));
        }
        result.add(std::move(out));
      }
    }
    return result;
  }

  std::string format_vector(Vec const& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      s += (i ? "," : "") + std::to_string(v[i]);
    }
    return s;
  }

  std::string format(LinearSet const& l) {
    std::string s = "lin base=(" + format_vector(l.base) + ") periods=(";
    for (std::size_t i = 0; i < l.periods.size(); ++i) {
      s += (i ? ";" : "") + format_vector(l.periods[i]);
    }
    return s + ")";
  }

  std::string format(SemilinearSet const& s) {
    std::string out;
    for (auto const& l : s.components) {
      out += format(l) + '\n';
    }
    return out;
  }

}  // namespace ggk
