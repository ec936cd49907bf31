#pragma once

#include <string>
#include <vector>

#include "ggk/natural.hpp"

namespace ggk {

  // Right-hand side symbol: a terminal token or a variable index.
  struct SlpSymbol {
    std::string terminal;
    int         var = -1;

    bool is_var() const { return var >= 0; }
    static SlpSymbol letter(std::string t) { return {std::move(t), -1}; }
    static SlpSymbol variable(int v) { return {{}, v}; }
    bool operator==(SlpSymbol const&) const = default;
  };

  class Slp {
   public:
    int  add_variable(std::string name);
    int  find(std::string const& name) const;  // -1 when absent
    void set_rhs(int var, std::vector<SlpSymbol> rhs);
    void set_start(int var) { start_ = var; }

    int         start() const { return start_; }
    std::size_t num_variables() const { return names_.size(); }
    std::string const& name(int v) const { return names_.at(v); }
    std::vector<SlpSymbol> const& rhs(int v) const { return rhs_.at(v); }
    // Sum of right-hand side lengths.
    std::size_t size() const;

    // Variables ordered so that each appears after everything it uses.
    // Throws StructureError naming a variable on a cycle.
    std::vector<int> topological_order() const;

    std::string fresh_name(std::string const& stem) const;

   private:
    std::vector<std::string>            names_;
    std::vector<std::vector<SlpSymbol>> rhs_;
    int                                 start_ = -1;
  };

  natural                  val_length(Slp const& g);
  std::vector<std::string> expand_capped(Slp const& g, natural const& cap);
  Slp                      power_slp(Slp const& g, natural const& k);

  // Size 2n, value a^(2^n).
  Slp compression_witness(std::size_t n, std::string const& letter = "a");

  // a^n for n >= 0 over the given token, by binary squaring.
  Slp slp_for_power(std::string const& token, natural const& n);

}  // namespace ggk
