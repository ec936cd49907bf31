#include <algorithm>
#include <fstream>
#include <sstream>

#include "ggk/errors.hpp"
#include "ggk/io.hpp"

namespace ggk {

  Tokens split_tokens(std::string_view text) {
    Tokens             out;
    std::istringstream in{std::string(text)};
    std::string        t;
    while (in >> t) {
      out.push_back(t);
    }
    return out;
  }

  Word parse_word(Tokens const& tokens, Tokens const& gens) {
    Word w;
    for (auto const& tok : tokens) {
      if (tok == "_") {
        continue;
      }
      bool        inv  = !tok.empty() && tok.back() == '\'';
      std::string name = inv ? tok.substr(0, tok.size() - 1) : tok;
      auto        it   = std::find(gens.begin(), gens.end(), name);
      if (it == gens.end()) {
        throw PreconditionError("unknown generator '" + name + "'");
      }
      w.push_back(DoubledAlphabet::lift(static_cast<Letter>(it - gens.begin()), inv));
    }
    return w;
  }

  Word parse_word(std::string_view text, Tokens const& gens) {
    return parse_word(split_tokens(text), gens);
  }

  std::string format_word(Word const& w, Tokens const& gens) {
    if (w.empty()) {
      return "_";
    }
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      out += (i ? " " : "") + gens.at(DoubledAlphabet::base_of(w[i]))
             + ((w[i] & 1U) ? "'" : "");
    }
    return out;
  }

  namespace {
    struct Tok {
      std::string text;
      std::size_t col;
    };

    std::vector<Tok> tokenize(std::string const& line) {
      std::vector<Tok> out;
      std::size_t      i = 0;
      while (i < line.size()) {
        if (line[i] == '#') {
          break;
        }
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))
               && line[j] != '#') {
          ++j;
        }
        out.push_back({line.substr(i, j - i), i + 1});
        i = j;
      }
      return out;
    }

    class Parser {
     public:
      explicit Parser(std::string_view text) : text_(text) {}

      Instance run() {
        std::istringstream in{std::string(text_)};
        std::string        line;
        while (std::getline(in, line)) {
          ++lineno_;
          toks_ = tokenize(line);
          if (!toks_.empty()) {
            dispatch();
          }
        }
        if (block_ != Block::None) {
          fail("missing 'end' before end of file", 0);
        }
        if (inst_.problem == Instance::Problem::None && !inst_.hnn
            && !inst_.amalgam && !inst_.extension) {
          throw ParseError("no problem block (eq, knapsack or ka)", lineno_, 1);
        }
        return std::move(inst_);
      }

     private:
      enum class Block { None, Finite, Hnn, Amalgam, Extension };
      enum class Section { Top, Eq, Knapsack, Ka };

      [[noreturn]] void fail(std::string const& msg, std::size_t tok) const {
        std::size_t col = tok < toks_.size() ? toks_[tok].col : 1;
        throw ParseError(msg, lineno_, col);
      }

      std::string const& kw() const { return toks_[0].text; }

      void need(std::size_t n) const {
        if (toks_.size() < n) {
          fail("'" + kw() + "' needs more arguments", toks_.size() - 1);
        }
      }
      void exactly(std::size_t n) const {
        need(n);
        if (toks_.size() > n) {
          fail("unexpected token", n);
        }
      }

      std::size_t number(std::size_t i) const {
        auto const& t = toks_[i].text;
        if (t.empty() || !std::all_of(t.begin(), t.end(), ::isdigit)) {
          fail("expected a number", i);
        }
        try {
          return std::stoull(t);
        } catch (std::exception const&) {
          fail("number out of range", i);
        }
      }

      Tokens rest(std::size_t from, std::size_t to) const {
        Tokens out;
        for (std::size_t i = from; i < to; ++i) {
          if (toks_[i].text == "_") {
            if (to - from != 1) {
              fail("'_' must stand alone", i);
            }
            continue;
          }
          out.push_back(toks_[i].text);
        }
        return out;
      }
      Tokens rest(std::size_t from) const { return rest(from, toks_.size()); }

      void name_ok(std::size_t i) const {
        auto const& t = toks_[i].text;
        if (t.empty() || t.back() == '\'' || t == "_"
            || !(std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_')) {
          fail("invalid name '" + t + "'", i);
        }
      }

      void set_problem(Instance::Problem p, Section s) {
        if (inst_.problem != Instance::Problem::None) {
          fail("only one problem block is allowed", 0);
        }
        inst_.problem = p;
        section_      = s;
      }

      bool has_group(std::string const& name) const {
        return std::any_of(inst_.groups.begin(), inst_.groups.end(),
                           [&](GroupDecl const& g) { return g.name == name; });
      }
      void group_ref(std::size_t i) const {
        if (!has_group(toks_[i].text)) {
          fail("unknown group '" + toks_[i].text + "'", i);
        }
      }

      void dispatch() {
        switch (block_) {
          case Block::Finite: return finite_line();
          case Block::Hnn: return hnn_line();
          case Block::Amalgam: return amalgam_line();
          case Block::Extension: return extension_line();
          case Block::None: break;
        }
        if (top_line()) {
          return;
        }
        switch (section_) {
          case Section::Eq: return eq_line();
          case Section::Knapsack: return knapsack_line();
          case Section::Ka: return ka_line();
          case Section::Top: break;
        }
        fail("unknown keyword '" + kw() + "'", 0);
      }

      bool top_line() {
        std::string const& k = kw();
        if (k == "gens") {
          for (std::size_t i = 1; i < toks_.size(); ++i) {
            name_ok(i);
            if (std::count(inst_.gens.begin(), inst_.gens.end(), toks_[i].text)) {
              fail("duplicate generator", i);
            }
            inst_.gens.push_back(toks_[i].text);
          }
        } else if (k == "indep") {
          exactly(3);
          for (std::size_t i : {std::size_t{1}, std::size_t{2}}) {
            if (!std::count(inst_.gens.begin(), inst_.gens.end(), toks_[i].text)) {
              fail("unknown generator '" + toks_[i].text + "'", i);
            }
          }
          if (toks_[1].text == toks_[2].text) {
            fail("a generator is not independent of itself", 2);
          }
          inst_.indep.emplace_back(toks_[1].text, toks_[2].text);
        } else if (k == "zvars") {
          for (std::size_t i = 1; i < toks_.size(); ++i) {
            name_ok(i);
            inst_.zvars.push_back(toks_[i].text);
          }
        } else if (k == "slp") {
          exactly(2);
          if (!std::isupper(static_cast<unsigned char>(toks_[1].text[0]))) {
            fail("SLP variables start with an uppercase letter", 1);
          }
          inst_.slps.push_back({toks_[1].text, {}});
        } else if (k == "rule") {
          need(4);
          if (inst_.slps.empty()) {
            fail("'rule' outside an slp block", 0);
          }
          if (toks_[2].text != "->") {
            fail("expected '->'", 2);
          }
          if (!std::isupper(static_cast<unsigned char>(toks_[1].text[0]))) {
            fail("SLP variables start with an uppercase letter", 1);
          }
          inst_.slps.back().rules.emplace_back(toks_[1].text, rest(3));
        } else if (k == "group") {
          group_line();
        } else if (k == "hnn") {
          need(2);
          if (toks_.size() > 3) {
            fail("unexpected token", 3);
          }
          group_ref(1);
          HnnDecl h;
          h.base = toks_[1].text;
          if (toks_.size() == 3) {
            name_ok(2);
            h.stable = toks_[2].text;
          }
          inst_.hnn = h;
          block_    = Block::Hnn;
        } else if (k == "amalgam") {
          exactly(3);
          group_ref(1);
          group_ref(2);
          inst_.amalgam = AmalgamDecl{toks_[1].text, toks_[2].text, {}};
          block_        = Block::Amalgam;
        } else if (k == "extension") {
          exactly(2);
          group_ref(1);
          inst_.extension = ExtensionDecl{};
          inst_.extension->base = toks_[1].text;
          block_          = Block::Extension;
        } else if (k == "eq") {
          exactly(1);
          set_problem(Instance::Problem::Equation, Section::Eq);
        } else if (k == "knapsack") {
          exactly(1);
          set_problem(Instance::Problem::Knapsack, Section::Knapsack);
        } else if (k == "ka") {
          exactly(2);
          set_problem(Instance::Problem::Automaton, Section::Ka);
          inst_.states = number(1);
          if (inst_.states == 0) {
            fail("an automaton needs at least one state", 1);
          }
        } else {
          return false;
        }
        return true;
      }

      void group_line() {
        need(3);
        name_ok(1);
        if (has_group(toks_[1].text)) {
          fail("duplicate group '" + toks_[1].text + "'", 1);
        }
        GroupDecl g;
        g.name = toks_[1].text;
        g.kind = toks_[2].text;
        if (g.kind == "cyclic") {
          exactly(5);
          g.order = number(3);
          if (g.order == 0) {
            fail("order must be positive", 3);
          }
          name_ok(4);
          g.gens = {toks_[4].text};
        } else if (g.kind == "integer") {
          exactly(4);
          name_ok(3);
          g.gens = {toks_[3].text};
        } else if (g.kind == "free") {
          need(4);
          for (std::size_t i = 3; i < toks_.size(); ++i) {
            name_ok(i);
            g.gens.push_back(toks_[i].text);
          }
        } else if (g.kind == "graph") {
          exactly(3);
          g.gens = inst_.gens;
        } else if (g.kind == "finite") {
          need(5);
          g.order = number(3);
          if (g.order == 0) {
            fail("order must be positive", 3);
          }
          for (std::size_t i = 4; i < toks_.size(); ++i) {
            name_ok(i);
            g.gens.push_back(toks_[i].text);
          }
          g.images.assign(g.gens.size(), g.order);
          block_ = Block::Finite;
        } else {
          fail("unknown group kind '" + g.kind + "'", 2);
        }
        inst_.groups.push_back(std::move(g));
      }

      void finite_line() {
        GroupDecl& g = inst_.groups.back();
        if (kw() == "row") {
          exactly(g.order + 1);
          std::vector<std::size_t> row;
          for (std::size_t i = 1; i <= g.order; ++i) {
            row.push_back(number(i));
            if (row.back() >= g.order) {
              fail("element out of range", i);
            }
          }
          if (g.table.size() == g.order) {
            fail("too many rows", 0);
          }
          g.table.push_back(std::move(row));
        } else if (kw() == "image") {
          exactly(3);
          auto it = std::find(g.gens.begin(), g.gens.end(), toks_[1].text);
          if (it == g.gens.end()) {
            fail("unknown generator", 1);
          }
          g.images[static_cast<std::size_t>(it - g.gens.begin())] = number(2);
          if (number(2) >= g.order) {
            fail("element out of range", 2);
          }
        } else if (kw() == "end") {
          exactly(1);
          if (g.table.size() != g.order) {
            fail("table needs one row per element", 0);
          }
          if (std::count(g.images.begin(), g.images.end(), g.order)) {
            fail("every generator needs an image", 0);
          }
          block_ = Block::None;
        } else {
          fail("expected row, image or end", 0);
        }
      }

      void hnn_line() {
        HnnDecl& h = *inst_.hnn;
        if (kw() == "plus" || kw() == "minus") {
          need(2);
          (kw() == "plus" ? h.plus : h.minus).push_back(rest(1));
        } else if (kw() == "phi") {
          exactly(3);
          h.phi.emplace_back(number(1), number(2));
        } else if (kw() == "end") {
          exactly(1);
          block_ = Block::None;
        } else {
          fail("expected plus, minus, phi or end", 0);
        }
      }

      void amalgam_line() {
        if (kw() == "f") {
          auto bar = std::find_if(toks_.begin(), toks_.end(),
                                  [](Tok const& t) { return t.text == "|"; });
          if (bar == toks_.end()) {
            fail("expected '|' between the two images", 0);
          }
          auto at = static_cast<std::size_t>(bar - toks_.begin());
          if (at == 1 || at + 1 == toks_.size()) {
            fail("both images are needed, spell the identity _", at);
          }
          inst_.amalgam->f.emplace_back(rest(1, at), rest(at + 1));
        } else if (kw() == "end") {
          exactly(1);
          block_ = Block::None;
        } else {
          fail("expected f or end", 0);
        }
      }

      void extension_line() {
        ExtensionDecl& x = *inst_.extension;
        if (kw() == "hgens") {
          need(2);
          for (std::size_t i = 1; i < toks_.size(); ++i) {
            name_ok(i);
            x.hgens.push_back(toks_[i].text);
          }
        } else if (kw() == "cosets") {
          need(2);
          for (std::size_t i = 1; i < toks_.size(); ++i) {
            x.cosets.push_back(toks_[i].text);
          }
        } else if (kw() == "coset") {
          need(7);
          if (toks_[2].text != "gen" || toks_[4].text != "->") {
            fail("expected 'coset <c> gen <b> -> <word> <c'>'", 0);
          }
          for (std::size_t i : {std::size_t{1}, toks_.size() - 1}) {
            if (!std::count(x.cosets.begin(), x.cosets.end(), toks_[i].text)) {
              fail("unknown coset '" + toks_[i].text + "'", i);
            }
          }
          x.rules.push_back({toks_[1].text, toks_[3].text,
                             rest(5, toks_.size() - 1), toks_.back().text});
        } else if (kw() == "relation") {
          need(2);
          x.relations.push_back(rest(1));
        } else if (kw() == "end") {
          exactly(1);
          block_ = Block::None;
        } else {
          fail("expected hgens, cosets, coset, relation or end", 0);
        }
      }

      void eq_line() {
        std::string const& k = kw();
        EqItem             item;
        if (k == "const") {
          need(2);
          item.kind = EqItem::Const;
          item.word = rest(1);
        } else if (k == "pow") {
          need(3);
          name_ok(toks_.size() - 1);
          item.kind = EqItem::Pow;
          item.word = rest(1, toks_.size() - 1);
          item.var  = toks_.back().text;
        } else if (k == "constS" || k == "powS") {
          exactly(k == "constS" ? 2 : 3);
          item.kind = k == "constS" ? EqItem::ConstS : EqItem::PowS;
          item.slp  = toks_[1].text;
          if (std::none_of(inst_.slps.begin(), inst_.slps.end(),
                           [&](SlpDecl const& s) { return s.start == item.slp; })) {
            fail("unknown slp '" + item.slp + "'", 1);
          }
          if (item.kind == EqItem::PowS) {
            name_ok(2);
            item.var = toks_[2].text;
          }
        } else {
          fail("unknown equation item '" + k + "'", 0);
        }
        inst_.items.push_back(std::move(item));
      }

      void knapsack_line() {
        if (kw() == "elem") {
          need(2);
          inst_.elems.push_back(rest(1));
        } else if (kw() == "target") {
          need(2);
          inst_.target = rest(1);
        } else {
          fail("expected elem or target", 0);
        }
      }

      void ka_line() {
        std::string const& k = kw();
        auto               state = [&](std::size_t i) {
          std::size_t q = number(i);
          if (q >= inst_.states) {
            fail("state out of range", i);
          }
          return q;
        };
        if (k == "initial") {
          exactly(2);
          inst_.initial = state(1);
        } else if (k == "final") {
          need(2);
          for (std::size_t i = 1; i < toks_.size(); ++i) {
            inst_.finals.push_back(state(i));
          }
        } else if (k == "edge") {
          need(4);
          inst_.edges.push_back({state(1), state(2), rest(3)});
        } else if (k == "target") {
          need(2);
          inst_.target = rest(1);
        } else {
          fail("expected initial, final, edge or target", 0);
        }
      }

      std::string_view text_;
      Instance         inst_;
      std::vector<Tok> toks_;
      std::size_t      lineno_  = 0;
      Block            block_   = Block::None;
      Section          section_ = Section::Top;
    };

    std::string words(Tokens const& t) {
      if (t.empty()) {
        return "_";
      }
      std::string out;
      for (std::size_t i = 0; i < t.size(); ++i) {
        out += (i ? " " : "") + t[i];
      }
      return out;
    }
  }  // namespace

  Instance parse_instance(std::string_view text) { return Parser(text).run(); }

  std::string print_instance(Instance const& inst) {
    std::ostringstream o;
    if (!inst.gens.empty()) {
      o << "gens " << words(inst.gens) << "\n";
    }
    for (auto const& [a, b] : inst.indep) {
      o << "indep " << a << " " << b << "\n";
    }
    if (!inst.zvars.empty()) {
      o << "zvars " << words(inst.zvars) << "\n";
    }
    for (auto const& s : inst.slps) {
      o << "slp " << s.start << "\n";
      for (auto const& [v, rhs] : s.rules) {
        o << "rule " << v << " -> " << words(rhs) << "\n";
      }
    }
    for (auto const& g : inst.groups) {
      o << "group " << g.name << " " << g.kind;
      if (g.kind == "cyclic") {
        o << " " << g.order << " " << g.gens[0] << "\n";
      } else if (g.kind == "integer" || g.kind == "free") {
        o << " " << words(g.gens) << "\n";
      } else if (g.kind == "graph") {
        o << "\n";
      } else {
        o << " " << g.order << " " << words(g.gens) << "\n";
        for (auto const& row : g.table) {
          o << "row";
          for (auto x : row) {
            o << " " << x;
          }
          o << "\n";
        }
        for (std::size_t i = 0; i < g.gens.size(); ++i) {
          o << "image " << g.gens[i] << " " << g.images[i] << "\n";
        }
        o << "end\n";
      }
    }
    if (inst.hnn) {
      o << "hnn " << inst.hnn->base << " " << inst.hnn->stable << "\n";
      for (auto const& w : inst.hnn->plus) {
        o << "plus " << words(w) << "\n";
      }
      for (auto const& w : inst.hnn->minus) {
        o << "minus " << words(w) << "\n";
      }
      for (auto [i, j] : inst.hnn->phi) {
        o << "phi " << i << " " << j << "\n";
      }
      o << "end\n";
    }
    if (inst.amalgam) {
      o << "amalgam " << inst.amalgam->g0 << " " << inst.amalgam->g1 << "\n";
      for (auto const& [a, b] : inst.amalgam->f) {
        o << "f " << words(a) << " | " << words(b) << "\n";
      }
      o << "end\n";
    }
    if (inst.extension) {
      auto const& x = *inst.extension;
      o << "extension " << x.base << "\n";
      o << "hgens " << words(x.hgens) << "\n";
      o << "cosets " << words(x.cosets) << "\n";
      for (auto const& r : x.rules) {
        o << "coset " << r.coset << " gen " << r.gen << " -> " << words(r.gword)
          << " " << r.target << "\n";
      }
      for (auto const& r : x.relations) {
        o << "relation " << words(r) << "\n";
      }
      o << "end\n";
    }
    switch (inst.problem) {
      case Instance::Problem::Equation:
        o << "eq\n";
        for (auto const& it : inst.items) {
          switch (it.kind) {
            case EqItem::Const: o << "const " << words(it.word) << "\n"; break;
            case EqItem::Pow:
              o << "pow " << words(it.word) << " " << it.var << "\n";
              break;
            case EqItem::ConstS: o << "constS " << it.slp << "\n"; break;
            case EqItem::PowS: o << "powS " << it.slp << " " << it.var << "\n"; break;
          }
        }
        break;
      case Instance::Problem::Knapsack:
        o << "knapsack\n";
        for (auto const& e : inst.elems) {
          o << "elem " << words(e) << "\n";
        }
        o << "target " << words(inst.target) << "\n";
        break;
      case Instance::Problem::Automaton:
        o << "ka " << inst.states << "\n";
        o << "initial " << inst.initial << "\n";
        if (!inst.finals.empty()) {
          o << "final";
          for (auto q : inst.finals) {
            o << " " << q;
          }
          o << "\n";
        }
        for (auto const& e : inst.edges) {
          o << "edge " << e.from << " " << e.to << " " << words(e.word) << "\n";
        }
        o << "target " << words(inst.target) << "\n";
        break;
      case Instance::Problem::None: break;
    }
    return o.str();
  }

  Instance load_instance(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw PreconditionError("cannot open " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
  }

}  // namespace ggk
