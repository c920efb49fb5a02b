#include <algorithm>

#include "zinc_bridge/smt.hpp"

namespace zb::smt {

Sort Sort::bitvec(unsigned w) {
  if (w == 0) throw ValidationError("bit-vector width must be positive");
  if (w > kMaxBvWidth) throw UnsupportedError("bit-vector width " + std::to_string(w) + " exceeds 64");
  return {Kind::BitVec, w};
}

std::string Sort::to_string() const { return print_sort(*this); }

std::string print_sort(Sort s) {
  switch (s.kind) {
    case Sort::Kind::Bool: return "Bool";
    case Sort::Kind::Int: return "Int";
    case Sort::Kind::Real: return "Real";
    case Sort::Kind::BitVec: return "(_ BitVec " + std::to_string(s.width) + ")";
  }
  return "?";
}

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Var:
    case Op::BoolConst:
    case Op::NumConst:
    case Op::BvConst: return "";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Xor: return "xor";
    case Op::Implies: return "=>";
    case Op::Ite: return "ite";
    case Op::Eq: return "=";
    case Op::Distinct: return "distinct";
    case Op::Le: return "<=";
    case Op::Lt: return "<";
    case Op::Ge: return ">=";
    case Op::Gt: return ">";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Neg: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::IntDiv: return "div";
    case Op::Mod: return "mod";
    case Op::Abs: return "abs";
    case Op::ToReal: return "to_real";
    case Op::BvNot: return "bvnot";
    case Op::BvNeg: return "bvneg";
    case Op::BvAnd: return "bvand";
    case Op::BvOr: return "bvor";
    case Op::BvXor: return "bvxor";
    case Op::BvAdd: return "bvadd";
    case Op::BvSub: return "bvsub";
    case Op::BvMul: return "bvmul";
    case Op::BvUdiv: return "bvudiv";
    case Op::BvUrem: return "bvurem";
    case Op::BvSdiv: return "bvsdiv";
    case Op::BvSrem: return "bvsrem";
    case Op::BvSmod: return "bvsmod";
    case Op::BvShl: return "bvshl";
    case Op::BvLshr: return "bvlshr";
    case Op::BvAshr: return "bvashr";
    case Op::BvUlt: return "bvult";
    case Op::BvUle: return "bvule";
    case Op::BvUgt: return "bvugt";
    case Op::BvUge: return "bvuge";
    case Op::BvSlt: return "bvslt";
    case Op::BvSle: return "bvsle";
    case Op::BvSgt: return "bvsgt";
    case Op::BvSge: return "bvsge";
    case Op::Concat: return "concat";
    case Op::Extract: return "extract";
    case Op::ZeroExtend: return "zero_extend";
    case Op::SignExtend: return "sign_extend";
  }
  return "";
}

std::string_view combination_name(Combination c) {
  switch (c) {
    case Combination::Lexicographic: return "lex";
    case Combination::Independent: return "box";
    case Combination::Pareto: return "pareto";
  }
  return "";
}

std::size_t TermManager::hash_node(const Node& n) {
  std::size_t h = static_cast<std::size_t>(n.op) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  mix(static_cast<std::size_t>(n.sort.kind));
  mix(n.sort.width);
  for (TermId c : n.children) mix(c.v);
  for (unsigned i : n.indices) mix(i);
  mix(std::hash<std::string>{}(n.name));
  mix(n.value.hash());
  mix(static_cast<std::size_t>(n.bits));
  return h;
}

bool TermManager::same_node(const Node& a, const Node& b) {
  return a.op == b.op && a.sort == b.sort && a.children == b.children && a.indices == b.indices &&
         a.name == b.name && a.value == b.value && a.bits == b.bits;
}

TermId TermManager::intern(Node n) {
  const std::size_t h = hash_node(n);
  auto& bucket = table_[h];
  for (TermId t : bucket)
    if (same_node(nodes_[t.v], n)) return t;
  TermId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(std::move(n));
  bucket.push_back(id);
  return id;
}

TermId TermManager::mk_var(const std::string& name, Sort sort) {
  Node n;
  n.op = Op::Var;
  n.sort = sort;
  n.name = name;
  return intern(std::move(n));
}

TermId TermManager::mk_bool(bool b) {
  Node n;
  n.op = Op::BoolConst;
  n.sort = Sort::boolean();
  n.bits = b ? 1 : 0;
  return intern(std::move(n));
}

TermId TermManager::mk_int(const Rational& v) {
  if (!v.is_integer()) throw ValidationError("integer constant expected, got " + v.to_string());
  Node n;
  n.op = Op::NumConst;
  n.sort = Sort::integer();
  n.value = v;
  return intern(std::move(n));
}

TermId TermManager::mk_real(const Rational& v) {
  Node n;
  n.op = Op::NumConst;
  n.sort = Sort::real();
  n.value = v;
  return intern(std::move(n));
}

TermId TermManager::mk_bv(std::uint64_t value, unsigned width) {
  Node n;
  n.op = Op::BvConst;
  n.sort = Sort::bitvec(width);
  if (width < 64) value &= (std::uint64_t{1} << width) - 1;
  n.bits = value;
  return intern(std::move(n));
}

TermId TermManager::mk_and(std::vector<TermId> xs) {
  if (xs.empty()) return mk_bool(true);
  if (xs.size() == 1) return xs[0];
  return mk(Op::And, std::move(xs));
}

TermId TermManager::mk_or(std::vector<TermId> xs) {
  if (xs.empty()) return mk_bool(false);
  if (xs.size() == 1) return xs[0];
  return mk(Op::Or, std::move(xs));
}

TermId TermManager::mk_add(std::vector<TermId> xs, Sort sort) {
  if (xs.empty()) return sort.is_int() ? mk_int(0) : mk_real(0);
  if (xs.size() == 1) return xs[0];
  return mk(Op::Add, std::move(xs));
}

TermId TermManager::to_real(TermId t) {
  const Node& n = node(t);
  if (n.sort.is_real()) return t;
  if (!n.sort.is_int()) throw ValidationError("to_real applied to a non-Int term");
  if (n.op == Op::NumConst) return mk_real(n.value);
  return mk(Op::ToReal, {t});
}

namespace {

[[noreturn]] void sort_error(Op op, const std::string& what) {
  throw ValidationError("sort mismatch in '" + std::string(op_name(op)) + "': " + what);
}

}  // namespace

TermId TermManager::mk(Op op, std::vector<TermId> children, std::vector<unsigned> indices) {
  for (TermId c : children)
    if (!c.valid() || c.v >= nodes_.size()) throw std::invalid_argument("invalid term id");
  auto sort_of = [&](std::size_t i) { return nodes_[children[i].v].sort; };
  auto need_count = [&](std::size_t lo, std::size_t hi) {
    if (children.size() < lo || children.size() > hi)
      sort_error(op, "wrong number of operands (" + std::to_string(children.size()) + ")");
  };
  auto all_same = [&]() {
    for (std::size_t i = 1; i < children.size(); ++i)
      if (!(sort_of(i) == sort_of(0)))
        sort_error(op, "operands of sorts " + print_sort(sort_of(0)) + " and " + print_sort(sort_of(i)));
  };
  auto all_bool = [&]() {
    for (std::size_t i = 0; i < children.size(); ++i)
      if (!sort_of(i).is_bool()) sort_error(op, "expected Bool operands");
  };
  auto all_arith = [&]() {
    all_same();
    if (!sort_of(0).is_arith()) sort_error(op, "expected Int or Real operands");
  };
  auto all_bv = [&]() {
    all_same();
    if (!sort_of(0).is_bv()) sort_error(op, "expected bit-vector operands");
  };

  Node n;
  n.op = op;
  const std::size_t many = SIZE_MAX;
  switch (op) {
    case Op::Var:
    case Op::BoolConst:
    case Op::NumConst:
    case Op::BvConst: throw std::invalid_argument("use the dedicated leaf builders");
    case Op::Not:
      need_count(1, 1);
      all_bool();
      n.sort = Sort::boolean();
      break;
    case Op::And:
    case Op::Or:
    case Op::Xor:
      need_count(1, many);
      all_bool();
      n.sort = Sort::boolean();
      break;
    case Op::Implies:
      need_count(2, 2);
      all_bool();
      n.sort = Sort::boolean();
      break;
    case Op::Ite:
      need_count(3, 3);
      if (!sort_of(0).is_bool()) sort_error(op, "condition must be Bool");
      if (!(sort_of(1) == sort_of(2))) sort_error(op, "branches of different sorts");
      n.sort = sort_of(1);
      break;
    case Op::Eq:
    case Op::Distinct:
      need_count(2, many);
      all_same();
      n.sort = Sort::boolean();
      break;
    case Op::Le:
    case Op::Lt:
    case Op::Ge:
    case Op::Gt:
      need_count(2, 2);
      all_arith();
      n.sort = Sort::boolean();
      break;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
      need_count(2, many);
      all_arith();
      n.sort = sort_of(0);
      break;
    case Op::Neg:
      need_count(1, 1);
      all_arith();
      n.sort = sort_of(0);
      break;
    case Op::Div:
      need_count(2, 2);
      all_arith();
      if (!sort_of(0).is_real()) sort_error(op, "expected Real operands");
      n.sort = Sort::real();
      break;
    case Op::IntDiv:
    case Op::Mod:
      need_count(2, 2);
      all_arith();
      if (!sort_of(0).is_int()) sort_error(op, "expected Int operands");
      n.sort = Sort::integer();
      break;
    case Op::Abs:
      need_count(1, 1);
      if (!sort_of(0).is_int()) sort_error(op, "expected an Int operand");
      n.sort = Sort::integer();
      break;
    case Op::ToReal:
      need_count(1, 1);
      if (!sort_of(0).is_int()) sort_error(op, "expected an Int operand");
      n.sort = Sort::real();
      break;
    case Op::BvNot:
    case Op::BvNeg:
      need_count(1, 1);
      all_bv();
      n.sort = sort_of(0);
      break;
    case Op::BvAnd:
    case Op::BvOr:
    case Op::BvXor:
    case Op::BvAdd:
    case Op::BvSub:
    case Op::BvMul:
    case Op::BvUdiv:
    case Op::BvUrem:
    case Op::BvSdiv:
    case Op::BvSrem:
    case Op::BvSmod:
    case Op::BvShl:
    case Op::BvLshr:
    case Op::BvAshr:
      need_count(2, 2);
      all_bv();
      n.sort = sort_of(0);
      // A logical shift by a constant of at least the width is zero.
      if ((op == Op::BvShl || op == Op::BvLshr) && nodes_[children[1].v].op == Op::BvConst && nodes_[children[1].v].bits >= n.sort.width)
        return mk_bv(0, n.sort.width);
      break;
    case Op::BvUlt:
    case Op::BvUle:
    case Op::BvUgt:
    case Op::BvUge:
    case Op::BvSlt:
    case Op::BvSle:
    case Op::BvSgt:
    case Op::BvSge:
      need_count(2, 2);
      all_bv();
      n.sort = Sort::boolean();
      break;
    case Op::Concat: {
      need_count(2, 2);
      if (!sort_of(0).is_bv() || !sort_of(1).is_bv()) sort_error(op, "expected bit-vector operands");
      n.sort = Sort::bitvec(sort_of(0).width + sort_of(1).width);
      break;
    }
    case Op::Extract: {
      need_count(1, 1);
      if (!sort_of(0).is_bv()) sort_error(op, "expected a bit-vector operand");
      if (indices.size() != 2 || indices[0] < indices[1] || indices[0] >= sort_of(0).width)
        sort_error(op, "invalid extract indices");
      n.sort = Sort::bitvec(indices[0] - indices[1] + 1);
      break;
    }
    case Op::ZeroExtend:
    case Op::SignExtend: {
      need_count(1, 1);
      if (!sort_of(0).is_bv()) sort_error(op, "expected a bit-vector operand");
      if (indices.size() != 1) sort_error(op, "missing extension amount");
      n.sort = Sort::bitvec(sort_of(0).width + indices[0]);
      break;
    }
  }
  n.children = std::move(children);
  n.indices = std::move(indices);
  return intern(std::move(n));
}

std::optional<Sort> SmtScript::find_decl(std::string_view name) const {
  for (const auto& [n, s] : declarations)
    if (n == name) return s;
  return std::nullopt;
}

TermId SmtScript::declare(const std::string& name, Sort sort) {
  if (auto existing = find_decl(name)) {
    if (!(*existing == sort)) throw ValidationError("symbol '" + name + "' redeclared with a different sort");
    return tm->mk_var(name, sort);
  }
  declarations.emplace_back(name, sort);
  return tm->mk_var(name, sort);
}

std::vector<TermId> script_roots(const SmtScript& script) {
  std::vector<TermId> roots = script.assertions;
  for (const auto& s : script.soft_assertions) roots.push_back(s.formula);
  for (const auto& o : script.objectives)
    if (o.term) roots.push_back(*o.term);
  return roots;
}

std::unordered_map<TermId, std::size_t, TermIdHash> father_counts(const SmtScript& script) {
  std::unordered_map<TermId, std::size_t, TermIdHash> counts;
  std::vector<TermId> stack;
  for (TermId r : script_roots(script)) {
    if (counts.emplace(r, 0).second) stack.push_back(r);
  }
  // Each node is expanded once, so each (parent, slot) edge is counted once.
  while (!stack.empty()) {
    TermId t = stack.back();
    stack.pop_back();
    for (TermId c : script.tm->node(t).children) {
      auto [it, fresh] = counts.emplace(c, 0);
      ++it->second;
      if (fresh) stack.push_back(c);
    }
  }
  return counts;
}

}  // namespace zb::smt
