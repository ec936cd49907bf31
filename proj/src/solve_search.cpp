#include <algorithm>
#include <chrono>

#include "ggk/errors.hpp"
#include "ggk/solver.hpp"

namespace ggk {

  namespace {
    bool relaxation_unsolvable(ExponentEquation const& e) {
      return !diophantine_solve(abelian_relaxation(e)).has_value();
    }

    bool balanced(DiophantineSystem const& d, std::vector<std::size_t> const& x) {
      for (std::size_t i = 0; i < d.rows(); ++i) {
        std::int64_t sum = 0;
        for (std::size_t j = 0; j < d.m; ++j) {
          sum += d.A[i][j] * static_cast<std::int64_t>(x[j]);
        }
        if (sum != d.a[i]) {
          return false;
        }
      }
      return true;
    }
  }  // namespace

  SolveReport solve_relax(ExponentEquation const& e) {
    if (e.has_integer_vars()) {
      throw PreconditionError("rewrite integer variables before solving");
    }
    SolveReport r;
    if (relaxation_unsolvable(e)) {
      r.status     = SolveStatus::Unsolvable;
      r.exhaustive = true;
      r.reason     = "abelian relaxation has no solution";
    } else {
      r.reason = "abelian relaxation is satisfiable";
    }
    return r;
  }

  SolveReport solve_search(ExponentEquation const& e, std::size_t cap,
                           natural const& verify_cap) {
    auto const t0 = std::chrono::steady_clock::now();
    SolveReport r = solve_relax(e);
    if (r.status == SolveStatus::Unsolvable) {
      return r;
    }
    DiophantineSystem const d = abelian_relaxation(e);
    std::size_t const       k = e.num_vars();
    bool                    skipped = false;
    // Iterative deepening: level m visits the assignments with maximum m.
    for (std::size_t m = 0; m <= cap; ++m) {
      std::vector<std::size_t> x(k, 0);
      while (true) {
        bool top = k == 0 ? m == 0 : *std::max_element(x.begin(), x.end()) == m;
        if (top && balanced(d, x)) {
          Assignment a(x.begin(), x.end());
          try {
            if (verify(e, a, verify_cap)) {
              r.status  = SolveStatus::Solvable;
              r.witness = std::move(a);
              r.reason  = "witness found at depth " + std::to_string(m);
              r.seconds = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
              return r;
            }
          } catch (ResourceExceeded const&) {
            skipped = true;
          }
        }
        std::size_t j = 0;
        while (j < k && x[j] == m) {
          x[j++] = 0;
        }
        if (j == k) {
          break;
        }
        ++x[j];
      }
    }
    r.status = SolveStatus::Unknown;
    r.reason = "no solution with exponents up to " + std::to_string(cap)
               + (skipped ? " (some candidates exceeded the length cap)" : "");
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return r;
  }

}  // namespace ggk
