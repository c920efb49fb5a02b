#include <sstream>

#include "zinc_bridge/fzn.hpp"

namespace zb::fzn {

std::string print_float(const Rational& r, const FznPrintOptions& options) {
  std::string s;
  if (auto exact = r.to_exact_decimal()) {
    s = *exact;
  } else {
    if (options.lossless)
      throw PrecisionError("float value " + r.to_string() + " has no terminating decimal expansion");
    s = r.to_approx_decimal(options.approx_digits);
  }
  if (s.find('.') == std::string::npos) s += ".0";
  return s;
}

namespace {

std::string print_set(const IntSetValue& s) {
  const auto& e = s.elems;
  if (e.size() >= 2 && e.back() - e.front() == static_cast<std::int64_t>(e.size()) - 1)
    return std::to_string(e.front()) + ".." + std::to_string(e.back());
  std::string out = "{";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(e[i]);
  }
  return out + "}";
}

std::string print_type(const FznType& ty, const FznPrintOptions& opt) {
  std::string out;
  if (ty.is_array()) out += "array [1.." + std::to_string(*ty.array_size) + "] of ";
  if (ty.is_var) out += "var ";
  auto dom = [&]() -> std::string {
    if (const auto* iv = std::get_if<IntInterval>(&ty.domain))
      return std::to_string(iv->lo) + ".." + std::to_string(iv->hi);
    if (const auto* s = std::get_if<IntSetValue>(&ty.domain)) {
      std::string t = "{";
      for (std::size_t i = 0; i < s->elems.size(); ++i) {
        if (i) t += ",";
        t += std::to_string(s->elems[i]);
      }
      return t + "}";
    }
    if (const auto* fv = std::get_if<FloatInterval>(&ty.domain))
      return print_float(fv->lo, opt) + ".." + print_float(fv->hi, opt);
    return {};
  }();
  switch (ty.base) {
    case BaseType::Bool: out += "bool"; break;
    case BaseType::Int: out += dom.empty() ? "int" : dom; break;
    case BaseType::Float: out += dom.empty() ? "float" : dom; break;
    case BaseType::SetOfInt: out += "set of " + (dom.empty() ? std::string("int") : dom); break;
  }
  return out;
}

void print_annotations(std::ostream& os, const std::vector<Annotation>& anns) {
  for (const auto& a : anns) os << " :: " << a.text;
}

}  // namespace

std::string print_expr(const Expr& e, const FznPrintOptions& options) {
  if (e.is_bool()) return e.as_bool() ? "true" : "false";
  if (e.is_int()) return std::to_string(e.as_int());
  if (e.is_float()) return print_float(e.as_float(), options);
  if (e.is_set()) return print_set(e.as_set());
  if (e.is_ident()) return e.as_ident();
  if (e.is_access()) return e.as_access().name + "[" + std::to_string(e.as_access().index) + "]";
  std::string out = "[";
  const auto& arr = e.as_array();
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (i) out += ", ";
    out += print_expr(arr[i], options);
  }
  return out + "]";
}

std::string print_fzn(const FznModel& model, const FznPrintOptions& options) {
  std::ostringstream os;
  for (const auto& p : model.predicates) os << p << ";\n";
  for (const auto& p : model.params)
    os << print_type(p.type, options) << ": " << p.name << " = " << print_expr(p.value, options) << ";\n";
  for (const auto& v : model.vars) {
    os << print_type(v.type, options) << ": " << v.name;
    print_annotations(os, v.annotations);
    if (v.assignment) os << " = " << print_expr(*v.assignment, options);
    os << ";\n";
  }
  for (const auto& c : model.constraints) {
    os << "constraint " << c.name << "(";
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      if (i) os << ", ";
      os << print_expr(c.args[i], options);
    }
    os << ")";
    print_annotations(os, c.annotations);
    os << ";\n";
  }
  for (const auto& g : model.solve_items) {
    os << "solve";
    print_annotations(os, g.annotations);
    switch (g.kind) {
      case SolveKind::Satisfy: os << " satisfy"; break;
      case SolveKind::Minimize: os << " minimize " << print_expr(*g.objective, options); break;
      case SolveKind::Maximize: os << " maximize " << print_expr(*g.objective, options); break;
    }
    os << ";\n";
  }
  return os.str();
}

}  // namespace zb::fzn
