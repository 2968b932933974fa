#pragma once

// Formulas over a declared set of binary operations: parsing, printing,
// evaluation, and evaluation over ciphertexts.
//
// Grammar:
//   formula := expr EOF
//   expr    := term { "+" term }
//   term    := factor { "*" factor }
//   factor  := ident | integer | call | "(" expr ")"
//   call    := NAME "(" expr "," expr ")"
//   NAME    := XOR | AND | STAR | G1 | G2 | G3 | G4 | GLIN
//   ident   := [a-z][a-z0-9_]*
//
// `*` is ring multiplication; STAR(a, b) = a b^(p-1) is the same operation as G1.

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "padicfhe/analysis.hpp"
#include "padicfhe/ciphers.hpp"
#include "padicfhe/error.hpp"
#include "padicfhe/padic.hpp"

namespace padicfhe {

enum class FormulaOp { add, mul, xor_digits, and_digits, star, g1, g2, g3, g4, glin };

inline std::string_view formula_op_name(FormulaOp op) {
  switch (op) {
    case FormulaOp::add: return "ADD";
    case FormulaOp::mul: return "MUL";
    case FormulaOp::xor_digits: return "XOR";
    case FormulaOp::and_digits: return "AND";
    case FormulaOp::star: return "STAR";
    case FormulaOp::g1: return "G1";
    case FormulaOp::g2: return "G2";
    case FormulaOp::g3: return "G3";
    case FormulaOp::g4: return "G4";
    case FormulaOp::glin: return "GLIN";
  }
  return "?";
}

// Operation names usable in call syntax.
inline std::optional<FormulaOp> call_op(std::string_view name) {
  for (auto op : {FormulaOp::xor_digits, FormulaOp::and_digits, FormulaOp::star, FormulaOp::g1,
                  FormulaOp::g2, FormulaOp::g3, FormulaOp::g4, FormulaOp::glin}) {
    if (formula_op_name(op) == name) return op;
  }
  return std::nullopt;
}

class FormulaAst {
 public:
  enum class Kind { var, lit, app };

  static FormulaAst var(std::string name) {
    return FormulaAst(std::make_shared<const Node>(Node{Kind::var, std::move(name), {}, {}, {}, 1}));
  }
  // Decimal literal, kept as text and reduced mod p^K at evaluation.
  static FormulaAst lit(std::string digits) {
    return FormulaAst(std::make_shared<const Node>(Node{Kind::lit, std::move(digits), {}, {}, {}, 1}));
  }
  static FormulaAst app(FormulaOp op, FormulaAst left, FormulaAst right) {
    const std::size_t height = 1 + std::max(left.height(), right.height());
    return FormulaAst(std::make_shared<const Node>(
        Node{Kind::app, {}, op, std::move(left.node_), std::move(right.node_), height}));
  }

  Kind kind() const noexcept { return node_->kind; }
  const std::string& text() const noexcept { return node_->text; }  // var name or literal
  FormulaOp op() const noexcept { return node_->op; }
  FormulaAst left() const { return FormulaAst(node_->left); }
  FormulaAst right() const { return FormulaAst(node_->right); }
  std::size_t height() const noexcept { return node_->height; }

  friend bool operator==(const FormulaAst& a, const FormulaAst& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    if (a.kind() != Kind::app) return a.text() == b.text();
    return a.op() == b.op() && a.left() == b.left() && a.right() == b.right();
  }

 private:
  struct Node {
    Kind kind;
    std::string text;
    FormulaOp op;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    std::size_t height;
  };

  explicit FormulaAst(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Parser

namespace detail {

class FormulaParser {
 public:
  static constexpr int kMaxDepth = 512;
  static constexpr std::size_t kMaxHeight = 4096;

  explicit FormulaParser(std::string_view text) : text_(text) {}

  FormulaAst parse() {
    FormulaAst out = expr();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError(pos_, "unexpected '" + std::string(1, text_[pos_]) + "'");
    return out;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& context) {
    if (!accept(c)) {
      const std::string found = pos_ < text_.size() ? std::string(1, text_[pos_]) : "end of input";
      throw SyntaxError(pos_, "expected '" + std::string(1, c) + "' " + context + ", found '" +
                                  found + "'");
    }
  }

  FormulaAst expr() {
    if (++depth_ > kMaxDepth) throw SyntaxError(pos_, "formula nested too deeply");
    FormulaAst left = term();
    while (accept('+')) left = checked(FormulaAst::app(FormulaOp::add, left, term()));
    --depth_;
    return left;
  }

  FormulaAst term() {
    FormulaAst left = factor();
    while (accept('*')) left = checked(FormulaAst::app(FormulaOp::mul, left, factor()));
    return left;
  }

  FormulaAst factor() {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      FormulaAst inner = expr();
      expect(')', "to close parenthesis");
      return inner;
    }
    const std::size_t start = pos_;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return FormulaAst::lit(std::string(text_.substr(start, pos_ - start)));
    }
    if (c >= 'a' && c <= 'z') {
      while (pos_ < text_.size() && (std::islower(static_cast<unsigned char>(text_[pos_])) ||
                                     std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_')) {
        ++pos_;
      }
      return FormulaAst::var(std::string(text_.substr(start, pos_ - start)));
    }
    if (c >= 'A' && c <= 'Z') {
      while (pos_ < text_.size() && (std::isupper(static_cast<unsigned char>(text_[pos_])) ||
                                     std::isdigit(static_cast<unsigned char>(text_[pos_])))) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      const auto op = call_op(name);
      if (!op) throw SyntaxError(start, "unknown operation '" + name + "'");
      return call(*op, name, start);
    }
    throw SyntaxError(pos_, "unexpected '" + std::string(1, c) + "'");
  }

  FormulaAst call(FormulaOp op, const std::string& name, std::size_t start) {
    expect('(', "after " + name);
    FormulaAst left = expr();
    if (!accept(',')) {
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        throw SyntaxError(start, name + " expects 2 arguments, got 1");
      }
      expect(',', "between arguments of " + name);
    }
    FormulaAst right = expr();
    if (accept(',')) throw SyntaxError(start, name + " expects 2 arguments, got more");
    expect(')', "to close " + name);
    return checked(FormulaAst::app(op, std::move(left), std::move(right)));
  }

  FormulaAst checked(FormulaAst node) const {
    if (node.height() > kMaxHeight) throw SyntaxError(pos_, "formula nested too deeply");
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace detail

inline FormulaAst parse_formula(std::string_view text) { return detail::FormulaParser(text).parse(); }

// Prints with the minimal parentheses that re-parse to the same tree.
inline std::string print_formula(const FormulaAst& ast) {
  switch (ast.kind()) {
    case FormulaAst::Kind::var:
    case FormulaAst::Kind::lit:
      return ast.text();
    case FormulaAst::Kind::app:
      break;
  }
  const auto wrap = [](const FormulaAst& sub, bool parens) {
    return parens ? "(" + print_formula(sub) + ")" : print_formula(sub);
  };
  const auto is = [](const FormulaAst& sub, FormulaOp op) {
    return sub.kind() == FormulaAst::Kind::app && sub.op() == op;
  };
  const FormulaAst l = ast.left();
  const FormulaAst r = ast.right();
  switch (ast.op()) {
    case FormulaOp::add:
      return wrap(l, false) + " + " + wrap(r, is(r, FormulaOp::add));
    case FormulaOp::mul:
      return wrap(l, is(l, FormulaOp::add)) + " * " +
             wrap(r, is(r, FormulaOp::add) || is(r, FormulaOp::mul));
    default:
      return std::string(formula_op_name(ast.op())) + "(" + print_formula(l) + ", " +
             print_formula(r) + ")";
  }
}

// ---------------------------------------------------------------------------
// Evaluation

using Env = std::map<std::string, PadicInt, std::less<>>;

inline OpSymbol to_op_symbol(FormulaOp op, const std::optional<LinearG>& glin) {
  switch (op) {
    case FormulaOp::add: return OpSymbol::add();
    case FormulaOp::mul: return OpSymbol::mul();
    case FormulaOp::xor_digits: return OpSymbol::xor_digits();
    case FormulaOp::and_digits: return OpSymbol::and_digits();
    case FormulaOp::star:
    case FormulaOp::g1: return OpSymbol::g(G1{});
    case FormulaOp::g2: return OpSymbol::g(G2{});
    case FormulaOp::g3: return OpSymbol::g(G3{});
    case FormulaOp::g4: return OpSymbol::g(G4{});
    case FormulaOp::glin:
      if (!glin) throw Error(errc::invalid_argument, "GLIN needs its a, b parameters");
      return OpSymbol::g(*glin);
  }
  throw Error(errc::invalid_argument, "unknown operation");
}

// Maps each literal before use; the ciphertext path encrypts constants.
using LiteralMap = std::function<PadicInt(const PadicInt&)>;

inline PadicInt eval_formula(const FormulaAst& ast, const PadicContext& ctx, const Env& env,
                             const std::optional<LinearG>& glin = std::nullopt,
                             const LiteralMap& literal = {}) {
  switch (ast.kind()) {
    case FormulaAst::Kind::var: {
      const auto it = env.find(ast.text());
      if (it == env.end()) throw Error(errc::invalid_argument, "unbound variable '" + ast.text() + "'");
      require_same_context(ctx, it->second.context());
      return it->second;
    }
    case FormulaAst::Kind::lit: {
      PadicInt value = PadicInt::from_decimal(ctx, ast.text());
      return literal ? literal(value) : value;
    }
    case FormulaAst::Kind::app:
      break;
  }
  return apply_op(to_op_symbol(ast.op(), glin), eval_formula(ast.left(), ctx, env, glin, literal),
                  eval_formula(ast.right(), ctx, env, glin, literal));
}

inline void collect_ops(const FormulaAst& ast, std::set<FormulaOp>& out) {
  if (ast.kind() != FormulaAst::Kind::app) return;
  out.insert(ast.op());
  collect_ops(ast.left(), out);
  collect_ops(ast.right(), out);
}

inline std::set<FormulaOp> ops_used(const FormulaAst& ast) {
  std::set<FormulaOp> out;
  collect_ops(ast, out);
  return out;
}

inline std::set<std::string> variables_used(const FormulaAst& ast) {
  if (ast.kind() == FormulaAst::Kind::var) return {ast.text()};
  if (ast.kind() == FormulaAst::Kind::lit) return {};
  auto out = variables_used(ast.left());
  out.merge(variables_used(ast.right()));
  return out;
}

// ---------------------------------------------------------------------------
// Compatibility with a cipher key

// Operations each family is homomorphic for. Linear G commutes with every
// x -> Ax, so it belongs to the additive and fhe families alike.
inline std::set<FormulaOp> homomorphic_ops(const CipherKey& key) {
  switch (key.family()) {
    case Family::additive: return {FormulaOp::add, FormulaOp::glin};
    case Family::multiplicative: return {FormulaOp::mul};
    case Family::xor_digits: return {FormulaOp::xor_digits};
    case Family::and_digits: return {FormulaOp::and_digits};
    case Family::fhe: break;
  }
  std::set<FormulaOp> out{FormulaOp::add, FormulaOp::glin};
  const auto& g = std::get<FheKey>(key.get()).g.get();
  if (std::holds_alternative<G1>(g)) out.insert({FormulaOp::g1, FormulaOp::star});
  if (std::holds_alternative<G2>(g)) out.insert(FormulaOp::g2);
  if (std::holds_alternative<G3>(g)) out.insert(FormulaOp::g3);
  if (std::holds_alternative<G4>(g)) out.insert(FormulaOp::g4);
  return out;
}

// GLIN parameters: explicit ones win, else those of an fhe key declared over GLIN.
inline std::optional<LinearG> resolve_glin(const CipherKey& key,
                                           const std::optional<LinearG>& glin) {
  if (glin) return glin;
  if (const auto* fhe = std::get_if<FheKey>(&key.get())) {
    if (const auto* lin = std::get_if<LinearG>(&fhe->g.get())) return *lin;
  }
  return std::nullopt;
}

// Operations of the formula the key does not commute with. The family table
// decides; each accepted operation is then re-checked on random pairs.
inline std::vector<FormulaOp> incompatible_ops(const FormulaAst& ast, const CipherKey& key,
                                               const std::optional<LinearG>& glin = std::nullopt) {
  const auto allowed = homomorphic_ops(key);
  const auto params = resolve_glin(key, glin);
  std::vector<FormulaOp> out;
  for (auto op : ops_used(ast)) {
    if (!allowed.contains(op)) {
      out.push_back(op);
      continue;
    }
    if (op == FormulaOp::glin && !params) {
      out.push_back(op);
      continue;
    }
    const auto report = homomorphism_test(key, to_op_symbol(op, params),
                                          SearchMode::randomized(0x5eed, 32));
    if (report.found()) out.push_back(op);
  }
  return out;
}

inline bool compatibility_check(const FormulaAst& ast, const CipherKey& key,
                                const std::optional<LinearG>& glin = std::nullopt) {
  return incompatible_ops(ast, key, glin).empty();
}

struct DemoReport {
  PadicInt plain;           // W(d)
  PadicInt cipher_result;   // W(f(d))
  PadicInt decrypted;       // f^-1(W(f(d)))
  Env encrypted_env;
  bool match;
};

// Evaluates the formula on plaintexts and on ciphertexts and compares.
inline DemoReport encrypted_eval_demo(const FormulaAst& ast, const Env& env, const CipherKey& key,
                                      const std::optional<LinearG>& glin = std::nullopt) {
  const auto bad = incompatible_ops(ast, key, glin);
  if (!bad.empty()) {
    std::string names;
    for (auto op : bad) names += (names.empty() ? "" : ", ") + std::string(formula_op_name(op));
    throw Error(errc::incompatible, "key family " + std::string(family_name(key.family())) +
                                        " is not homomorphic for: " + names);
  }
  const auto params = resolve_glin(key, glin);
  const auto& ctx = key.context();
  Env encrypted;
  for (const auto& [name, value] : env) encrypted.emplace(name, encrypt(key, value));
  PadicInt plain = eval_formula(ast, ctx, env, params);
  PadicInt cipher = eval_formula(ast, ctx, encrypted, params,
                                 [&](const PadicInt& c) { return encrypt(key, c); });
  PadicInt decrypted = decrypt(key, cipher);
  const bool match = decrypted == plain;
  return {std::move(plain), std::move(cipher), std::move(decrypted), std::move(encrypted), match};
}

// W(x, y, z) written with the operation a * b = a b^(p-1).
inline constexpr std::string_view kStarExampleFormula =
    "STAR(z, STAR(x, y)) + STAR(STAR(z, x), y) + STAR(STAR(x, x), STAR(y, y)) + "
    "STAR(x, STAR(STAR(x, y), y))";

// The same W expanded into monomials:
// x^(p-1) y^((p-1)^2) z + x^(p-1) y^(p-1) z + x^p y^(p(p-1)) (1 + y^(p^2-3p+2)).
inline PadicInt star_example_expanded(const PadicInt& x, const PadicInt& y, const PadicInt& z) {
  const std::uint64_t p = x.prime();
  const PadicInt one = PadicInt::one(x.context());
  return pow_nat(x, p - 1) * pow_nat(y, (p - 1) * (p - 1)) * z +
         pow_nat(x, p - 1) * pow_nat(y, p - 1) * z +
         pow_nat(x, p) * pow_nat(y, p * (p - 1)) * (one + pow_nat(y, p * p - 3 * p + 2));
}

}  // namespace padicfhe
