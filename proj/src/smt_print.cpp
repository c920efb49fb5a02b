#include <sstream>

#include "zinc_bridge/smt.hpp"

namespace zb::smt {

namespace {

bool simple_symbol(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) &&
        std::string_view("~!@$%^&*_-+=<>.?/").find(c) == std::string_view::npos)
      return false;
  return true;
}

std::string quote(const std::string& s) { return simple_symbol(s) ? s : "|" + s + "|"; }

std::string print_number(const Rational& v, bool real) {
  const Rational a = v.abs();
  std::string body;
  if (a.is_integer()) {
    body = a.numerator().get_str() + (real ? ".0" : "");
  } else {
    body = "(/ " + a.numerator().get_str() + " " + a.denominator().get_str() + ")";
  }
  return v.sign() < 0 ? "(- " + body + ")" : body;
}

class TermPrinter {
 public:
  explicit TermPrinter(const TermManager& tm) : tm_(tm) {}

  const std::string& print(TermId root) {
    // Iterative post-order so deep terms do not exhaust the stack.
    std::vector<std::pair<TermId, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [t, expanded] = stack.back();
      stack.pop_back();
      if (memo_.count(t)) continue;
      const Node& n = tm_.node(t);
      if (!expanded) {
        stack.emplace_back(t, true);
        for (TermId c : n.children)
          if (!memo_.count(c)) stack.emplace_back(c, false);
        continue;
      }
      memo_.emplace(t, render(n));
    }
    return memo_.at(root);
  }

 private:
  std::string render(const Node& n) const {
    switch (n.op) {
      case Op::Var: return quote(n.name);
      case Op::BoolConst: return n.bits ? "true" : "false";
      case Op::NumConst: return print_number(n.value, n.sort.is_real());
      case Op::BvConst: return "(_ bv" + std::to_string(n.bits) + " " + std::to_string(n.sort.width) + ")";
      default: break;
    }
    std::string head(op_name(n.op));
    if (n.op == Op::Extract) {
      head = "(_ extract " + std::to_string(n.indices[0]) + " " + std::to_string(n.indices[1]) + ")";
    } else if (n.op == Op::ZeroExtend || n.op == Op::SignExtend) {
      head = "(_ " + head + " " + std::to_string(n.indices[0]) + ")";
    }
    std::string out = "(" + head;
    for (TermId c : n.children) out += " " + memo_.at(c);
    return out + ")";
  }

  const TermManager& tm_;
  std::unordered_map<TermId, std::string, TermIdHash> memo_;
};

std::string print_weight(const Rational& w) {
  if (w.is_integer()) return w.numerator().get_str();
  if (auto d = w.to_exact_decimal(60)) return *d;
  return "(/ " + w.numerator().get_str() + " " + w.denominator().get_str() + ")";
}

}  // namespace

std::optional<Dialect> dialect_from_string(std::string_view s) {
  if (s == "default" || s == "optimathsat") return Dialect::Default;
  if (s == "z3") return Dialect::Z3;
  if (s == "bclt") return Dialect::Bclt;
  return std::nullopt;
}

std::string_view dialect_name(Dialect d) {
  switch (d) {
    case Dialect::Default: return "default";
    case Dialect::Z3: return "z3";
    case Dialect::Bclt: return "bclt";
  }
  return "";
}

std::string print_term(const TermManager& tm, TermId t) {
  TermPrinter p(tm);
  return p.print(t);
}

std::string print_smt2(const SmtScript& script, Dialect dialect) {
  std::ostringstream os;
  TermPrinter tp(*script.tm);
  if (script.combination_explicit || script.objectives.size() >= 2)
    os << "(set-option :opt.priority " << combination_name(script.combination) << ")\n";
  if (script.logic) os << "(set-logic " << *script.logic << ")\n";
  for (const auto& [name, sort] : script.declarations)
    os << "(declare-fun " << quote(name) << " () " << print_sort(sort) << ")\n";
  for (TermId a : script.assertions) os << "(assert " << tp.print(a) << ")\n";
  for (const auto& s : script.soft_assertions) {
    os << "(assert-soft " << tp.print(s.formula);
    const bool dweight = dialect == Dialect::Bclt && !s.weight.is_integer();
    os << (dweight ? " :dweight " : " :weight ") << print_weight(s.weight);
    os << " :id " << quote(s.group) << ")\n";
  }
  for (const auto& o : script.objectives) {
    const char* cmd = o.dir == Direction::Minimize ? "minimize" : "maximize";
    if (o.soft_group) {
      // z3 creates one objective per soft id by itself.
      if (dialect != Dialect::Z3) os << "(" << cmd << " " << quote(*o.soft_group) << ")\n";
      continue;
    }
    std::string body = tp.print(*o.term);
    std::string attrs;
    if (o.bv_signed) {
      if (dialect == Dialect::Z3) {
        // Flipping the sign bit maps signed order onto unsigned order.
        const unsigned w = script.tm->sort(*o.term).width;
        body = "(bvxor " + body + " (_ bv" + std::to_string(std::uint64_t{1} << (w - 1)) + " " + std::to_string(w) +
               "))";
      } else {
        attrs += " :signed";
      }
    }
    if (o.id) attrs += " :id " + quote(*o.id);
    os << "(" << cmd << " " << body << attrs << ")\n";
  }
  for (const auto& c : script.commands) os << "(" << c << ")\n";
  return os.str();
}

bool structurally_equal(const SmtScript& a, const SmtScript& b) {
  if (a.declarations != b.declarations || a.logic != b.logic || a.commands != b.commands) return false;
  if (a.assertions.size() != b.assertions.size() || a.soft_assertions.size() != b.soft_assertions.size() ||
      a.objectives.size() != b.objectives.size())
    return false;
  auto effective = [](const SmtScript& s) {
    return s.combination_explicit || s.objectives.size() >= 2 ? s.combination : Combination::Lexicographic;
  };
  if (effective(a) != effective(b)) return false;
  TermPrinter pa(*a.tm);
  TermPrinter pb(*b.tm);
  for (std::size_t i = 0; i < a.assertions.size(); ++i)
    if (pa.print(a.assertions[i]) != pb.print(b.assertions[i])) return false;
  for (std::size_t i = 0; i < a.soft_assertions.size(); ++i) {
    const auto& x = a.soft_assertions[i];
    const auto& y = b.soft_assertions[i];
    if (x.weight != y.weight || x.group != y.group || pa.print(x.formula) != pb.print(y.formula)) return false;
  }
  for (std::size_t i = 0; i < a.objectives.size(); ++i) {
    const auto& x = a.objectives[i];
    const auto& y = b.objectives[i];
    if (x.dir != y.dir || x.soft_group != y.soft_group || x.bv_signed != y.bv_signed) return false;
    if (x.term.has_value() != y.term.has_value()) return false;
    if (x.term && pa.print(*x.term) != pb.print(*y.term)) return false;
    if (x.term && x.id != y.id) return false;
  }
  return true;
}

}  // namespace zb::smt
