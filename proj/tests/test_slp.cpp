#include "doctest.h"
#include "support.hpp"

#include "ggk/errors.hpp"
#include "ggk/slp.hpp"

using namespace ggk;
using namespace ggk::testing;

namespace {

  // S -> A A, A -> a a.
  Slp square() {
    Slp g;
    int s = g.add_variable("S");
    int a = g.add_variable("A");
    g.set_rhs(s, {SlpSymbol::variable(a), SlpSymbol::variable(a)});
    g.set_rhs(a, {SlpSymbol::letter("a"), SlpSymbol::letter("a")});
    g.set_start(s);
    return g;
  }

  std::vector<std::string> naive(Slp const& g, int v) {
    std::vector<std::string> out;
    for (auto const& sym : g.rhs(v)) {
      if (sym.is_var()) {
        auto sub = naive(g, sym.var);
        out.insert(out.end(), sub.begin(), sub.end());
      } else {
        out.push_back(sym.terminal);
      }
    }
    return out;
  }

  std::string joined(std::vector<std::string> const& v) {
    std::string s;
    for (auto const& x : v) {
      s += x;
    }
    return s;
  }

}  // namespace

TEST_CASE("lengths without expansion") {
  CHECK(val_length(square()) == 4);
  CHECK(val_length(compression_witness(20)) == natural(1) << 20);
  Slp one;
  one.set_start(one.add_variable("S"));
  one.set_rhs(0, {SlpSymbol::letter("a")});
  CHECK(val_length(one) == 1);
}

TEST_CASE("cycles are structural errors") {
  Slp g;
  int s = g.add_variable("S");
  int a = g.add_variable("A");
  g.set_rhs(s, {SlpSymbol::variable(a)});
  g.set_rhs(a, {SlpSymbol::variable(s)});
  g.set_start(s);
  CHECK_THROWS_AS(val_length(g), StructureError);
}

TEST_CASE("capped expansion") {
  CHECK(joined(expand_capped(square(), 10)) == "aaaa");
  try {
    expand_capped(compression_witness(20), 1000);
    FAIL("expected a resource error");
  } catch (ResourceExceeded const& e) {
    CHECK(e.required() == natural(1) << 20);
  }
  Slp empty;
  empty.set_start(empty.add_variable("S"));
  empty.set_rhs(0, {});
  CHECK(expand_capped(empty, 0).empty());
}

TEST_CASE("powers by squaring") {
  Slp ab;
  ab.set_start(ab.add_variable("S"));
  ab.set_rhs(0, {SlpSymbol::letter("a"), SlpSymbol::letter("b")});
  CHECK(joined(expand_capped(power_slp(ab, 3), 100)) == "ababab");
  CHECK(expand_capped(power_slp(ab, 0), 100).empty());
  Slp a = slp_for_power("a", 1);
  Slp five = power_slp(a, 5);
  CHECK(joined(expand_capped(five, 100)) == "aaaaa");
  CHECK(five.num_variables() - a.num_variables() <= 6);
  for (unsigned k = 0; k <= 64; ++k) {
    CHECK(val_length(power_slp(ab, k)) == 2 * k);
  }
  CHECK(joined(expand_capped(slp_for_power("a'", 6), 100)) == "a'a'a'a'a'a'");
}

TEST_CASE("compression witness") {
  for (std::size_t n = 1; n <= 30; ++n) {
    Slp g = compression_witness(n);
    CHECK(g.size() == 2 * n);
    CHECK(val_length(g) >= natural(1) << n);
  }
}

TEST_CASE("expansion agrees with naive recursion on random programs") {
  Rng rng(31);
  for (int round = 0; round < 100; ++round) {
    Slp g;
    std::size_t const n = uniform(rng, 1, 5);
    for (std::size_t v = 0; v < n; ++v) {
      g.add_variable("V" + std::to_string(v));
    }
    // Variable v only uses variables above it.
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<SlpSymbol> rhs;
      for (std::size_t k = uniform(rng, 0, 3); k > 0; --k) {
        if (v + 1 < n && uniform(rng, 0, 1)) {
          rhs.push_back(SlpSymbol::variable(static_cast<int>(uniform(rng, v + 1, n - 1))));
        } else {
          rhs.push_back(SlpSymbol::letter(uniform(rng, 0, 1) ? "a" : "b"));
        }
      }
      g.set_rhs(static_cast<int>(v), rhs);
    }
    g.set_start(0);
    auto want = naive(g, 0);
    CHECK(expand_capped(g, 100000) == want);
    CHECK(val_length(g) == want.size());
  }
}
