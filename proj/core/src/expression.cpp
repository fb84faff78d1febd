#include "bdlab/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "bdlab/error.hpp"

namespace bdlab {

enum class Kind { Number, Constant, MatrixVar, XVar, Neg, Add, Sub, Mul, Div, Pow, Call, Matrix };

struct Expression::Node {
  Kind kind = Kind::Number;
  bool is_matrix = false;
  std::size_t pos = 0;
  double number = 0.0;   // Number, Constant value, Pow exponent
  int index = 0;         // XVar (0-based)
  std::string name;      // Constant, Call
  std::vector<std::shared_ptr<const Node>> args;  // operands; Matrix: row-major entries
  int rows = 0;          // Matrix
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

enum class Tok { Number, Ident, Op, End };

struct Token {
  Tok type;
  std::string text;
  double value = 0.0;
  std::size_t pos = 0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      const std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      const std::string text(s.substr(start, i - start));
      out.push_back({Tok::Number, text, std::strtod(text.c_str(), nullptr), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), 0.0, start});
      continue;
    }
    if (std::string_view("+-*/^()[],").find(c) != std::string_view::npos) {
      out.push_back({Tok::Op, std::string(1, c), 0.0, i});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({Tok::End, "", 0.0, s.size()});
  return out;
}

struct FuncInfo {
  std::string_view name;
  int min_args, max_args;
  bool matrix_args;
};

constexpr FuncInfo kFunctions[] = {
    {"norm", 1, 1, true},   {"normsq", 1, 1, true}, {"tr", 1, 1, true},      {"dot", 2, 2, true},
    {"sqrt", 1, 1, false},  {"exp", 1, 1, false},   {"log", 1, 1, false},    {"sin", 1, 1, false},
    {"cos", 1, 1, false},   {"abs", 1, 1, false},   {"min", 2, 64, false},   {"max", 2, 64, false},
};

const FuncInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  NodePtr parse_all() {
    NodePtr n = expr();
    if (peek().type != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    if (n->is_matrix) throw ParseError("expression must be scalar; wrap matrices in norm, normsq, tr or dot", n->pos);
    return n;
  }

  bool uses_A = false;
  int max_x = 0;
  int literal_dim = 0;

 private:
  const Token& peek() const { return toks_[i_]; }
  bool is_op(const char* op) const { return peek().type == Tok::Op && peek().text == op; }
  Token take() { return toks_[i_++]; }
  void expect(const char* op) {
    if (!is_op(op)) {
      throw ParseError(std::string("expected '") + op + "'" + (peek().type == Tok::End ? " before end of input" : ""),
                       peek().pos);
    }
    ++i_;
  }

  static NodePtr make(Kind k, std::size_t pos, bool is_matrix, std::vector<NodePtr> args = {}) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->pos = pos;
    n->is_matrix = is_matrix;
    n->args = std::move(args);
    return n;
  }

  NodePtr binary(Kind k, std::size_t pos, NodePtr a, NodePtr b) {
    bool m = false;
    switch (k) {
      case Kind::Add:
      case Kind::Sub:
        if (a->is_matrix != b->is_matrix) throw ParseError("cannot add a matrix and a scalar", pos);
        m = a->is_matrix;
        break;
      case Kind::Mul:
        if (a->is_matrix && b->is_matrix) throw ParseError("matrix products are not supported", pos);
        m = a->is_matrix || b->is_matrix;
        break;
      case Kind::Div:
        if (b->is_matrix) throw ParseError("cannot divide by a matrix", pos);
        m = a->is_matrix;
        break;
      default: break;
    }
    return make(k, pos, m, {std::move(a), std::move(b)});
  }

  NodePtr expr() {
    NodePtr n = term();
    while (is_op("+") || is_op("-")) {
      const Token op = take();
      n = binary(op.text == "+" ? Kind::Add : Kind::Sub, op.pos, n, term());
    }
    return n;
  }

  NodePtr term() {
    NodePtr n = unary();
    while (is_op("*") || is_op("/")) {
      const Token op = take();
      n = binary(op.text == "*" ? Kind::Mul : Kind::Div, op.pos, n, unary());
    }
    return n;
  }

  NodePtr factor() {
    NodePtr n = base();
    if (is_op("^")) {
      const Token op = take();
      double sign = 1.0;
      if (is_op("-")) {
        take();
        sign = -1.0;
      }
      if (peek().type != Tok::Number) throw ParseError("exponent must be a number", peek().pos);
      if (n->is_matrix) throw ParseError("cannot raise a matrix to a power", op.pos);
      const Token num = take();
      auto p = std::make_shared<Node>();
      p->kind = Kind::Pow;
      p->pos = op.pos;
      p->number = sign * num.value;
      p->args = {n};
      n = p;
    }
    return n;
  }

  NodePtr unary() {
    if (is_op("-")) {
      const Token op = take();
      NodePtr a = unary();
      const bool m = a->is_matrix;
      return make(Kind::Neg, op.pos, m, {a});
    }
    return factor();
  }

  NodePtr base() {
    const Token t = peek();
    if (t.type == Tok::Number) {
      take();
      auto n = std::make_shared<Node>();
      n->kind = Kind::Number;
      n->pos = t.pos;
      n->number = t.value;
      return n;
    }
    if (is_op("(")) {
      take();
      NodePtr n = expr();
      expect(")");
      return n;
    }
    if (is_op("[")) return matrix();
    if (t.type == Tok::Ident) {
      take();
      if (t.text == "A") {
        uses_A = true;
        return make(Kind::MatrixVar, t.pos, true);
      }
      if (t.text == "x") {
        expect("[");
        if (peek().type != Tok::Number) throw ParseError("expected an index after 'x['", peek().pos);
        const Token idx = take();
        const double v = idx.value;
        if (v < 1 || v != std::floor(v) || v > 3) throw ParseError("x index must be 1, 2 or 3", idx.pos);
        expect("]");
        auto n = std::make_shared<Node>();
        n->kind = Kind::XVar;
        n->pos = t.pos;
        n->index = static_cast<int>(v) - 1;
        max_x = std::max(max_x, static_cast<int>(v));
        return n;
      }
      if (t.text == "pi" || t.text == "e") {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Constant;
        n->pos = t.pos;
        n->name = t.text;
        n->number = t.text == "pi" ? std::numbers::pi : std::numbers::e;
        return n;
      }
      const FuncInfo* f = find_function(t.text);
      if (!f) throw ParseError("unknown identifier '" + t.text + "'", t.pos);
      expect("(");
      std::vector<NodePtr> args{expr()};
      while (is_op(",")) {
        take();
        args.push_back(expr());
      }
      expect(")");
      if (static_cast<int>(args.size()) < f->min_args || static_cast<int>(args.size()) > f->max_args) {
        throw ParseError("wrong number of arguments to '" + t.text + "'", t.pos);
      }
      for (const auto& a : args) {
        if (a->is_matrix != f->matrix_args) {
          throw ParseError("'" + t.text + "' expects " + (f->matrix_args ? "matrix" : "scalar") + " arguments",
                           a->pos);
        }
      }
      auto n = std::make_shared<Node>();
      n->kind = Kind::Call;
      n->pos = t.pos;
      n->name = t.text;
      n->args = std::move(args);
      return n;
    }
    if (t.type == Tok::End) throw ParseError("unexpected end of input", t.pos);
    throw ParseError("unexpected '" + t.text + "'", t.pos);
  }

  NodePtr matrix() {
    const std::size_t pos = peek().pos;
    expect("[");
    std::vector<NodePtr> entries;
    int rows = 0, cols = -1;
    do {
      if (rows > 0) take();  // ','
      expect("[");
      int c = 0;
      do {
        if (c > 0) take();
        NodePtr e = expr();
        if (e->is_matrix) throw ParseError("matrix entries must be scalar", e->pos);
        entries.push_back(e);
        ++c;
      } while (is_op(","));
      expect("]");
      if (cols >= 0 && c != cols) throw ParseError("matrix rows have different lengths", pos);
      cols = c;
      ++rows;
    } while (is_op(","));
    expect("]");
    if (rows != cols) throw ParseError("matrix literal must be square", pos);
    if (literal_dim != 0 && literal_dim != rows) throw ParseError("matrix literals have different sizes", pos);
    literal_dim = rows;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Matrix;
    n->pos = pos;
    n->is_matrix = true;
    n->rows = rows;
    n->args = std::move(entries);
    return n;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

struct Value {
  double s = 0.0;
  SymMatrix m;
};

Value eval_node(const Node& n, std::span<const double> x, const SymMatrix& A) {
  switch (n.kind) {
    case Kind::Number:
    case Kind::Constant: return {n.number, {}};
    case Kind::MatrixVar: return {0.0, A};
    case Kind::XVar:
      if (n.index >= static_cast<int>(x.size())) throw InputError("x index exceeds point dimension");
      return {x[n.index], {}};
    case Kind::Neg: {
      Value v = eval_node(*n.args[0], x, A);
      if (n.is_matrix) v.m *= -1.0;
      else v.s = -v.s;
      return v;
    }
    case Kind::Add:
    case Kind::Sub: {
      Value a = eval_node(*n.args[0], x, A);
      const Value b = eval_node(*n.args[1], x, A);
      if (n.is_matrix) {
        if (a.m.dim() != b.m.dim()) throw InputError("matrix dimension mismatch in expression");
        if (n.kind == Kind::Add) a.m += b.m;
        else a.m -= b.m;
      } else {
        a.s = n.kind == Kind::Add ? a.s + b.s : a.s - b.s;
      }
      return a;
    }
    case Kind::Mul: {
      Value a = eval_node(*n.args[0], x, A);
      Value b = eval_node(*n.args[1], x, A);
      if (!n.is_matrix) return {a.s * b.s, {}};
      if (n.args[0]->is_matrix) return {0.0, a.m * b.s};
      return {0.0, b.m * a.s};
    }
    case Kind::Div: {
      Value a = eval_node(*n.args[0], x, A);
      const Value b = eval_node(*n.args[1], x, A);
      if (n.is_matrix) return {0.0, a.m / b.s};
      return {a.s / b.s, {}};
    }
    case Kind::Pow: {
      const Value a = eval_node(*n.args[0], x, A);
      return {std::pow(a.s, n.number), {}};
    }
    case Kind::Matrix: {
      std::vector<Vec> rows(n.rows, Vec(n.rows));
      for (int i = 0; i < n.rows; ++i)
        for (int j = 0; j < n.rows; ++j) rows[i][j] = eval_node(*n.args[i * n.rows + j], x, A).s;
      return {0.0, SymMatrix::from_rows(rows, 1e-12)};
    }
    case Kind::Call: {
      const std::string& f = n.name;
      if (f == "norm") return {eval_node(*n.args[0], x, A).m.norm(), {}};
      if (f == "normsq") return {eval_node(*n.args[0], x, A).m.norm_squared(), {}};
      if (f == "tr") return {eval_node(*n.args[0], x, A).m.trace(), {}};
      if (f == "dot") {
        return {frobenius_inner(eval_node(*n.args[0], x, A).m, eval_node(*n.args[1], x, A).m), {}};
      }
      if (f == "min" || f == "max") {
        double r = eval_node(*n.args[0], x, A).s;
        for (std::size_t k = 1; k < n.args.size(); ++k) {
          const double v = eval_node(*n.args[k], x, A).s;
          r = f == "min" ? std::min(r, v) : std::max(r, v);
        }
        return {r, {}};
      }
      const double a = eval_node(*n.args[0], x, A).s;
      if (f == "sqrt") return {std::sqrt(a), {}};
      if (f == "exp") return {std::exp(a), {}};
      if (f == "log") return {std::log(a), {}};
      if (f == "sin") return {std::sin(a), {}};
      if (f == "cos") return {std::cos(a), {}};
      if (f == "abs") return {std::abs(a), {}};
      break;
    }
  }
  throw Error("internal: unhandled expression node");
}

std::string number_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string print_node(const Node& n) {
  switch (n.kind) {
    case Kind::Number: return number_text(n.number);
    case Kind::Constant: return n.name;
    case Kind::MatrixVar: return "A";
    case Kind::XVar: return "x[" + std::to_string(n.index + 1) + "]";
    case Kind::Neg: return "(-" + print_node(*n.args[0]) + ")";
    case Kind::Add: return "(" + print_node(*n.args[0]) + " + " + print_node(*n.args[1]) + ")";
    case Kind::Sub: return "(" + print_node(*n.args[0]) + " - " + print_node(*n.args[1]) + ")";
    case Kind::Mul: return "(" + print_node(*n.args[0]) + " * " + print_node(*n.args[1]) + ")";
    case Kind::Div: return "(" + print_node(*n.args[0]) + " / " + print_node(*n.args[1]) + ")";
    case Kind::Pow: return "(" + print_node(*n.args[0]) + "^" + number_text(n.number) + ")";
    case Kind::Matrix: {
      std::string s = "[";
      for (int i = 0; i < n.rows; ++i) {
        s += i ? ", [" : "[";
        for (int j = 0; j < n.rows; ++j) s += (j ? ", " : "") + print_node(*n.args[i * n.rows + j]);
        s += "]";
      }
      return s + "]";
    }
    case Kind::Call: {
      std::string s = n.name + "(";
      for (std::size_t k = 0; k < n.args.size(); ++k) s += (k ? ", " : "") + print_node(*n.args[k]);
      return s + ")";
    }
  }
  return "?";
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser p(tokenize(text));
  Expression e;
  e.root_ = p.parse_all();
  e.uses_A_ = p.uses_A;
  e.max_x_ = p.max_x;
  e.literal_dim_ = p.literal_dim;
  return e;
}

double Expression::eval(std::span<const double> x, const SymMatrix& A) const { return eval_node(*root_, x, A).s; }

std::string Expression::to_string() const { return print_node(*root_); }

Integrand parse_integrand(std::string_view text, int dim) {
  const Expression e = Expression::parse(text);
  if (e.literal_dim() != 0 && e.literal_dim() != dim) {
    throw InputError("matrix literal is " + std::to_string(e.literal_dim()) + "x" +
                     std::to_string(e.literal_dim()) + " but the integrand acts on " + std::to_string(dim) +
                     "x" + std::to_string(dim) + " matrices");
  }
  if (e.max_x_index() > dim) throw InputError("x index exceeds the dimension");
  return make_integrand([e](std::span<const double> x, const SymMatrix& A) { return e.eval(x, A); }, dim,
                        e.to_string(), e.max_x_index() > 0);
}

std::function<double(std::span<const double>)> parse_scalar_function(std::string_view text, int nvars) {
  const Expression e = Expression::parse(text);
  if (e.uses_matrix() || e.literal_dim() != 0) throw InputError("scalar functions may not use matrices");
  if (e.max_x_index() > nvars) throw InputError("x index exceeds the number of variables");
  return [e](std::span<const double> x) {
    static const SymMatrix kNone;
    return e.eval(x, kNone);
  };
}

}  // namespace bdlab
