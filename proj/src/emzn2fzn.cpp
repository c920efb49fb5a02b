#include "zinc_bridge/emzn2fzn.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "zinc_bridge/fzn.hpp"
#include "zinc_bridge/mzn.hpp"
#include "zinc_bridge/process.hpp"

namespace zb::emzn {

namespace fs = std::filesystem;
using mzn::Token;
using mzn::TokKind;

namespace {

bool punct(const Token& t, std::string_view p) { return t.kind == TokKind::Punct && t.text == p; }

bool number(const Token& t) { return t.kind == TokKind::Int || t.kind == TokKind::Float; }

Rational literal_value(const Token& t) {
  if (t.kind == TokKind::Int) {
    if (t.text.rfind("0x", 0) == 0) return Rational(Integer(t.text.substr(2), 16));
    if (t.text.rfind("0o", 0) == 0) return Rational(Integer(t.text.substr(2), 8));
  }
  return Rational::parse_decimal(t.text);
}

/// Keywords after which a minus sign is a prefix operator.
bool opens_expression(const Token& t) {
  static const std::set<std::string_view> kw = {"then", "else", "elseif", "in", "constraint", "where", "if",
                                                "not", "minimize", "maximize", "of", "default", "output", "let"};
  return t.kind == TokKind::Ident && kw.count(t.text) != 0;
}

bool ends_operand(const Token& t) {
  switch (t.kind) {
    case TokKind::Int:
    case TokKind::Float:
    case TokKind::String: return true;
    case TokKind::Ident: return !opens_expression(t);
    case TokKind::Punct: return t.text == ")" || t.text == "]" || t.text == "}";
    case TokKind::End: return false;
  }
  return false;
}

struct Operand {
  std::size_t first = 0;  // token index
  std::size_t last = 0;
  Rational value;
};

/// Literal operand ending at token `i`: `n`, `-n`, `(n)` or `(-n)`.
std::optional<Operand> operand_before(const std::vector<Token>& ts, std::size_t i) {
  Operand o;
  o.last = i;
  if (number(ts[i])) {
    o.first = i;
    o.value = literal_value(ts[i]);
  } else if (punct(ts[i], ")")) {
    if (i < 2) return std::nullopt;
    if (number(ts[i - 1]) && punct(ts[i - 2], "(")) {
      o.first = i - 2;
      o.value = literal_value(ts[i - 1]);
    } else if (i >= 3 && number(ts[i - 1]) && punct(ts[i - 2], "-") && punct(ts[i - 3], "(")) {
      o.first = i - 3;
      o.value = -literal_value(ts[i - 1]);
    } else {
      return std::nullopt;
    }
    if (o.first > 0 && ts[o.first - 1].kind == TokKind::Ident && !opens_expression(ts[o.first - 1]))
      return std::nullopt;  // call arguments
    return o;
  } else {
    return std::nullopt;
  }
  if (o.first > 0 && punct(ts[o.first - 1], "-") && (o.first < 2 || !ends_operand(ts[o.first - 2]))) {
    --o.first;
    o.value = -o.value;
  }
  return o;
}

/// Literal operand starting at token `i`.
std::optional<Operand> operand_after(const std::vector<Token>& ts, std::size_t i) {
  Operand o;
  o.first = i;
  std::size_t j = i;
  const bool paren = punct(ts[j], "(");
  if (paren) ++j;
  const bool neg = punct(ts[j], "-");
  if (neg) ++j;
  if (!number(ts[j])) return std::nullopt;
  o.value = neg ? -literal_value(ts[j]) : literal_value(ts[j]);
  if (paren) {
    if (!punct(ts[j + 1], ")")) return std::nullopt;
    ++j;
  }
  o.last = j;
  return o;
}

std::string fzn_float(const Integer& v) { return v.get_str() + ".0"; }

}  // namespace

std::string SubstitutionTable::to_json() const {
  nlohmann::json j;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) {
    j["entries"].push_back({{"name", e.name},
                            {"numerator", e.numerator().get_str()},
                            {"denominator", e.denominator().get_str()},
                            {"line", e.loc.line},
                            {"column", e.loc.column}});
  }
  return j.dump(2) + "\n";
}

SubstitutionTable SubstitutionTable::from_json(std::string_view text) {
  SubstitutionTable t;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& e : j.at("entries")) {
      Fraction f;
      f.name = e.at("name").get<std::string>();
      const Integer den(e.at("denominator").get<std::string>());
      if (den == 0) throw ParseError("zero denominator for " + f.name, {});
      f.value = Rational(Integer(e.at("numerator").get<std::string>()), den);
      f.loc.line = e.value("line", std::size_t{0});
      f.loc.column = e.value("column", std::size_t{0});
      t.entries.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("substitution table: ") + ex.what(), {});
  } catch (const std::invalid_argument& ex) {
    throw ParseError(std::string("substitution table: ") + ex.what(), {});
  }
  return t;
}

Rewrite rewrite_mzn(std::string_view text, const RewriteOptions& options) {
  const std::vector<Token> ts = mzn::tokenize(text);
  std::set<std::string> idents;
  for (const auto& t : ts)
    if (t.kind == TokKind::Ident) idents.insert(t.text);

  Rewrite out;
  std::map<Rational, std::string> by_value;
  std::size_t counter = 0;
  auto fresh = [&] {
    std::string n;
    do n = options.prefix + std::to_string(counter++);
    while (idents.count(n));
    return n;
  };

  struct Edit {
    std::size_t begin, end;
    std::string name;
  };
  std::vector<Edit> edits;
  std::size_t consumed = 0;  // first token index not yet replaced
  for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
    if (!punct(ts[i], "/")) continue;
    auto lhs = operand_before(ts, i - 1);
    if (!lhs || lhs->first < consumed) continue;
    if (lhs->first > 0) {
      const Token& prev = ts[lhs->first - 1];
      if (punct(prev, "/") || punct(prev, "^")) continue;
    }
    auto rhs = operand_after(ts, i + 1);
    if (!rhs || rhs->last + 1 >= ts.size()) continue;
    if (punct(ts[rhs->last + 1], "^")) continue;
    if (rhs->value.is_zero()) continue;
    const Rational v = lhs->value / rhs->value;
    std::string name;
    auto it = by_value.find(v);
    if (options.dedup && it != by_value.end()) {
      name = it->second;
    } else {
      name = fresh();
      by_value.emplace(v, name);
      out.table.entries.push_back({name, v, ts[lhs->first].loc});
    }
    const Token& last = ts[rhs->last];
    edits.push_back({ts[lhs->first].offset, last.offset + last.text.size(), name});
    consumed = rhs->last + 1;
    i = rhs->last;
  }

  std::string body;
  std::size_t pos = 0;
  for (const auto& e : edits) {
    body.append(text.substr(pos, e.begin - pos));
    body += e.name;
    pos = e.end;
  }
  body.append(text.substr(pos));

  const std::string bound = mzn::float_literal(options.float_domain);
  for (const auto& e : out.table.entries) out.text += "var -" + bound + ".." + bound + ": " + e.name + ";\n";
  out.text += body;
  return out;
}

std::string patch_fzn(std::string_view fzn_text, const SubstitutionTable& table) {
  if (table.empty()) return std::string(fzn_text);
  const fzn::FznModel model = fzn::parse_fzn(fzn_text, true);
  for (const auto& e : table.entries) {
    const fzn::FznVarDecl* v = model.find_var(e.name);
    if (v == nullptr)
      throw ValidationError("fresh variable '" + e.name +
                            "' is missing from the FlatZinc output (eliminated by the compiler?)");
    if (v->type.base != fzn::BaseType::Float || v->type.is_array())
      throw ValidationError("fresh variable '" + e.name + "' is not a float variable in the FlatZinc output");
  }
  const std::vector<Token> ts = mzn::tokenize(fzn_text);
  std::size_t at = fzn_text.size();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].kind == TokKind::Ident && ts[i].text == "solve" && (i == 0 || punct(ts[i - 1], ";"))) {
      at = ts[i].offset;
      break;
    }
  }
  std::string lines;
  for (const auto& e : table.entries)
    lines += "constraint float_div(" + fzn_float(e.numerator()) + ", " + fzn_float(e.denominator()) + ", " +
             e.name + ");\n";
  std::string out(fzn_text.substr(0, at));
  if (!out.empty() && out.back() != '\n') out += '\n';
  out += lines;
  out.append(fzn_text.substr(at));
  return out;
}

std::string compiler_template() {
  const char* env = std::getenv(kCompilerEnv);
  return env != nullptr && *env != '\0' ? std::string(env) : std::string(kDefaultCompiler);
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ExternalError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out || !(out << text)) throw ExternalError("cannot write " + p.string());
}

std::string replace_all(std::string s, std::string_view from, const std::string& to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size()))
    s.replace(p, from.size(), to);
  return s;
}

}  // namespace

WrapperResult run_wrapper(const std::string& mzn_path, const std::vector<std::string>& data_paths,
                          const WrapperOptions& options) {
  WrapperResult result;
  const Rewrite rw = rewrite_mzn(read_file(mzn_path), options.rewrite);
  result.table = rw.table;

  fs::path dir;
  bool owned = false;
  if (options.work_dir.empty()) {
    std::string tmpl = (fs::temp_directory_path() / "zb-emzn-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr) throw ExternalError("cannot create a temporary directory");
    dir = tmpl;
    owned = true;
  } else {
    dir = options.work_dir;
    fs::create_directories(dir);
  }
  struct Cleanup {
    fs::path dir;
    bool owned;
    ~Cleanup() {
      std::error_code ec;
      if (owned) fs::remove_all(dir, ec);
    }
  } cleanup{dir, owned};

  const fs::path model = dir / fs::path(mzn_path).filename();
  const fs::path fzn = dir / (fs::path(mzn_path).stem().string() + ".fzn");
  write_file(model, rw.text);

  std::vector<std::string> argv;
  const std::string tmpl = options.compiler.empty() ? compiler_template() : options.compiler;
  for (const auto& arg : split_command(tmpl)) {
    if (arg == "{data}") {
      argv.insert(argv.end(), data_paths.begin(), data_paths.end());
      continue;
    }
    argv.push_back(replace_all(replace_all(arg, "{mzn}", model.string()), "{fzn}", fzn.string()));
  }
  const ProcessResult pr = run_process(argv);
  if (pr.exit_code != 0) {
    std::string cmd;
    for (const auto& a : argv) cmd += (cmd.empty() ? "" : " ") + a;
    throw ExternalError("compiler exited with status " + std::to_string(pr.exit_code) + ": " + cmd + "\n" + pr.err);
  }
  result.fzn = patch_fzn(read_file(fzn), result.table);
  return result;
}

}  // namespace zb::emzn
