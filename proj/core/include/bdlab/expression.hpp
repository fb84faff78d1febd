#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "bdlab/integrand.hpp"
#include "bdlab/symtensor.hpp"

namespace bdlab {

/// Parsed integrand expression.
///
/// Grammar:
///   expr   := term (("+" | "-") term)*
///   term   := unary (("*" | "/") unary)*
///   unary  := "-" unary | factor
///   factor := base ("^" ["-"] number)?
///   base   := number | "A" | "x" "[" index "]" | "pi" | "e"
///           | func "(" expr ("," expr)* ")" | "(" expr ")" | matrix
///   matrix := "[" row ("," row)* "]",  row := "[" expr ("," expr)* "]"
///
/// Functions: norm, normsq, tr, dot (matrix arguments, scalar result) and
/// sqrt, exp, log, sin, cos, abs, min, max (scalar). `x[k]` is 1-based.
/// Matrix-valued subexpressions are closed under +, -, scalar * and /, and
/// must end up inside norm, normsq, tr or dot; the whole expression is
/// scalar.
class Expression {
 public:
  struct Node;

  static Expression parse(std::string_view text);

  double eval(std::span<const double> x, const SymMatrix& A) const;
  /// Fully parenthesized form; numbers are printed with 17 significant
  /// digits so that parse(to_string()) prints identically.
  std::string to_string() const;

  bool uses_matrix() const noexcept { return uses_A_; }
  /// Largest x index referenced (1-based), 0 when x is unused.
  int max_x_index() const noexcept { return max_x_; }
  /// Dimension of matrix literals, 0 when there are none.
  int literal_dim() const noexcept { return literal_dim_; }

 private:
  std::shared_ptr<const Node> root_;
  bool uses_A_ = false;
  int max_x_ = 0;
  int literal_dim_ = 0;
};

/// Parse an integrand over d x d symmetric matrices.
Integrand parse_integrand(std::string_view text, int dim = 2);

/// Parse a scalar function of x[1], ..., x[nvars]; A is not allowed.
std::function<double(std::span<const double>)> parse_scalar_function(std::string_view text, int nvars);

}  // namespace bdlab
