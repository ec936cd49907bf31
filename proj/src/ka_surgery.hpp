#pragma once

// Structural rewrites shared by the HNN and free-product saturations.

#include <functional>

#include "ggk/transfer.hpp"

namespace ggk::detail {

  // Adds from -l1-> s1 -l2-> ... -lk-> to with fresh intermediate states.
  void add_chain(KnapsackAutomaton& ka, State from,
                 std::vector<Word> const& labels, State to);

  // Replaces every edge whose label satisfies split by a chain of single
  // letter edges.
  KnapsackAutomaton split_labels(KnapsackAutomaton const&               ka,
                                 std::function<bool(Word const&)> const& split);

  // Replaces the run of len cycle edges starting at position start by one
  // edge labeled label, and re-routes every path that used part of the run
  // through fresh states off the cycle. When epsilon_arrival is set, each
  // re-routed path into the cycle ends with an empty-word edge.
  void shortcut_cycle_run(KnapsackAutomaton&              ka,
                          KnapsackAutomaton::Cycle const& cycle,
                          std::size_t start, std::size_t len, Word label,
                          bool epsilon_arrival);

  bool has_edge(KnapsackAutomaton const& ka, State from, Word const& label,
                State to);

  // States reachable from q using only edges satisfying keep.
  std::vector<bool> reachable(KnapsackAutomaton const&                  ka,
                              State                                     q,
                              std::function<bool(KaEdge const&)> const& keep);

}  // namespace ggk::detail
