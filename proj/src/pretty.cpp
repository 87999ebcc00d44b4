#include "deckit/pretty.hpp"

namespace deckit {

namespace {

void print(std::string& out, const Term& t);

void bracket(std::string& out, const char* head, const Type& a) {
  out += head;
  out += "[" + to_string(a) + "]";
}

void bracket(std::string& out, const char* head, const Type& a, const Type& b) {
  out += head;
  out += "[" + to_string(a) + ", " + to_string(b) + "]";
}

const char* pair_head(PairKind k, bool copair) {
  switch (k) {
    case PairKind::left: return copair ? "lcopair(" : "lpair(";
    case PairKind::right: return copair ? "rcopair(" : "rpair(";
    default: return copair ? "copair(" : "pair(";
  }
}

void print(std::string& out, const Term& t) {
  switch (t.kind()) {
    case TermKind::id: bracket(out, "id", t.type()); return;
    case TermKind::comp:
    case TermKind::prop_comp: {
      // Both compositions associate to the right, so only a composite outer
      // factor needs parentheses.
      const bool wrap = t.first().is(TermKind::comp) || t.first().is(TermKind::prop_comp);
      if (wrap) out += "(";
      print(out, t.first());
      if (wrap) out += ")";
      out += t.is(TermKind::comp) ? " . " : " (.) ";
      print(out, t.second());
      return;
    }
    case TermKind::pair:
    case TermKind::copair: {
      const bool co = t.is(TermKind::copair);
      out += pair_head(t.pair_kind(), co);
      print(out, t.first());
      out += co ? " | " : ", ";
      print(out, t.second());
      out += ")";
      return;
    }
    case TermKind::proj: bracket(out, t.index() == 1 ? "pr1" : "pr2", t.type(), t.type2()); return;
    case TermKind::copr: bracket(out, t.index() == 1 ? "in1" : "in2", t.type(), t.type2()); return;
    case TermKind::final: bracket(out, "final", t.type()); return;
    case TermKind::initial: bracket(out, "initial", t.type()); return;
    case TermKind::tag: out += "tag[" + t.name() + "]"; return;
    case TermKind::untag: out += "untag[" + t.name() + "]"; return;
    case TermKind::untag_all: out += "untagall"; return;
    case TermKind::lookup: out += "lookup[" + t.name() + "]"; return;
    case TermKind::update: out += "update[" + t.name() + "]"; return;
    case TermKind::constant:
    case TermKind::meta: out += t.name(); return;
  }
}

}  // namespace

std::string pretty(const Term& term) {
  std::string out;
  print(out, term);
  return out;
}

const char* relation_symbol(Strength s) {
  switch (s) {
    case Strength::strong: return "==";
    case Strength::weak: return "~";
    case Strength::order: return "<<";
  }
  return "?";
}

std::string pretty(const Equation& eq) {
  return pretty(eq.lhs) + " " + relation_symbol(eq.strength) + " " + pretty(eq.rhs);
}

}  // namespace deckit
