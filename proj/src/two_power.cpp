#include <stdexcept>

#include "ggk/automata.hpp"
#include "ggk/errors.hpp"
#include "ggk/semilinear.hpp"

namespace ggk {

  namespace {
    void require_power_base(Trace const& u) {
      if (u.empty()) {
        throw PreconditionError("power base must be nonempty");
      }
      if (!is_connected(u)) {
        throw PreconditionError("power base must be connected");
      }
    }

    void check(bool ok, char const* what) {
      if (!ok) {
        throw std::logic_error(std::string("two-power invariant: ") + what);
      }
    }
  }  // namespace

  SemilinearSet two_power_solutions(Trace const& p, Trace const& u,
                                    Trace const& s, Trace const& q,
                                    Trace const& v, Trace const& t) {
    require_power_base(u);
    require_power_base(v);
    for (auto const* x : {&p, &s, &q, &v, &t}) {
      if (!same_alphabet(u.alphabet(), x->alphabet())) {
        throw PreconditionError("two-power traces use different alphabets");
      }
    }
    Nfa left  = trim(power_closure_nfa(p, u, s));
    Nfa right = trim(power_closure_nfa(q, v, t));
    Nfa both  = trim(intersect_reachable(left, right));

    SemilinearSet out;
    out.dim = 2;
    auto const ps = static_cast<std::int64_t>(p.size() + s.size());
    auto const qt = static_cast<std::int64_t>(q.size() + t.size());
    auto const nu = static_cast<std::int64_t>(u.size());
    auto const nv = static_cast<std::int64_t>(v.size());
    for (auto const& pr : unary_progressions(length_automaton(both))) {
      auto const b = static_cast<std::int64_t>(pr.offset);
      auto const c = static_cast<std::int64_t>(pr.period);
      check(b >= ps && b >= qt, "offset below affix length");
      check((b - ps) % nu == 0 && (b - qt) % nv == 0,
            "offset not aligned with the power bases");
      check(c % nu == 0 && c % nv == 0, "period not aligned with the bases");
      LinearSet l;
      l.base = {(b - ps) / nu, (b - qt) / nv};
      if (c != 0) {
        l.periods.push_back({c / nu, c / nv});
      }
      out.add(std::move(l));
    }
    return out;
  }

}  // namespace ggk
