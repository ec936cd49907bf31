#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ggk/natural.hpp"
#include "ggk/trace.hpp"

namespace ggk {

  using Vec    = std::vector<std::int64_t>;
  using Matrix = std::vector<Vec>;  // row major

  struct LinearSet {
    Vec              base;
    std::vector<Vec> periods;

    std::size_t dim() const { return base.size(); }
    bool operator==(LinearSet const&) const = default;
  };

  struct SemilinearSet {
    std::size_t            dim = 0;
    std::vector<LinearSet> components;

    bool empty() const { return components.empty(); }
    void add(LinearSet l);
    void add(SemilinearSet const& other);
  };

  // {C z + c : z in N^m, A z = a}.
  struct DiophantineSystem {
    Matrix      A;  // n x m
    Vec         a;  // n
    Matrix      C;  // k x m
    Vec         c;  // k
    std::size_t m = 0;

    std::size_t  rows() const { return A.size(); }
    std::int64_t beta() const;
    void         validate() const;
  };

  struct DiophantineSolution {
    Vec z;
    Vec image;
  };

  // Per-entry search cutoff (m+1) n! beta^n, saturating.
  std::uint64_t diophantine_cutoff(std::size_t n, std::size_t m,
                                   std::int64_t beta);
  // The overall image bound beta + n! m (m+1) beta^(n+1).
  natural lemma12_image_bound(std::size_t n, std::size_t m,
                              std::int64_t beta);

  std::optional<DiophantineSolution> diophantine_solve(
      DiophantineSystem const& d);

  bool member(SemilinearSet const& s, Vec const& v);
  bool member(LinearSet const& l, Vec const& v);

  // Solutions (x, y) of p u^x s = q v^y t, as traces.
  SemilinearSet two_power_solutions(Trace const& p, Trace const& u,
                                    Trace const& s, Trace const& q,
                                    Trace const& v, Trace const& t);

  // rep[i] names the output coordinate of input coordinate i; positions
  // with the same representative are forced equal.
  SemilinearSet identify_variables(SemilinearSet const&            s,
                                   std::vector<std::size_t> const& rep);

  // Minimal solutions of A z = a over N^m and the Hilbert basis of
  // A z = 0, by bounded enumeration.
  struct MinimalSolutions {
    std::vector<Vec> inhomogeneous;
    std::vector<Vec> homogeneous;
  };
  MinimalSolutions minimal_solutions(Matrix const& A, Vec const& a,
                                     std::size_t m);

  std::string format_vector(Vec const& v);
  std::string format(LinearSet const& l);
  std::string format(SemilinearSet const& s);  // one component per line

}  // namespace ggk
