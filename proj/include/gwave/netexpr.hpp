#ifndef GWAVE_NETEXPR_HPP
#define GWAVE_NETEXPR_HPP

#include "gwave/netcalc.hpp"
#include "gwave/taylor.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace gwave {

// Expression language over `eps` and coordinates x1..xd:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := number ['i'] | 'eps' | 'x1' | 'x2' | fn '(' expr (',' expr)? ')' | '(' expr ')'
//   fn     := log | exp | sqrt | sin | cos | pow | abs
// '^' binds tighter than unary minus and is right-associative.

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Tag { Literal, Eps, Coord, Neg, Add, Sub, Mul, Div, Pow, Call };
    enum class Fn { Log, Exp, Sqrt, Sin, Cos, Pow, Abs };

    Tag tag;
    cxd literal{0.0, 0.0};
    int coord = 0;  // 0-based axis for Tag::Coord
    Fn fn = Fn::Log;
    std::vector<ExprPtr> args;
    long pos = 0;  // source offset
};

class ExprAst {
public:
    ExprAst() = default;
    ExprAst(ExprPtr root, int dimension, std::string source);

    const ExprPtr& root() const { return root_; }
    int dimension() const { return dimension_; }
    const std::string& source() const { return source_; }
    bool uses_coords() const { return uses_coords_; }
    bool uses_eps() const { return uses_eps_; }
    bool is_constant() const { return !uses_coords_ && !uses_eps_; }
    explicit operator bool() const { return static_cast<bool>(root_); }

private:
    ExprPtr root_;
    int dimension_ = 1;
    std::string source_;
    bool uses_coords_ = false;
    bool uses_eps_ = false;
};

ExprAst parse(const std::string& text, int dimension);

/// value at (eps, x); evaluation errors carry DomainError
cxd eval(const ExprAst& expr, double eps, std::array<double, 2> x);
/// eps-only expressions; NonScalar if the expression mentions coordinates
cxd eval_scalar(const ExprAst& expr, double eps);

/// Taylor jet in x1 (1D derivatives up to order 6)
CTaylor eval_jet1(const ExprAst& expr, double eps, double x1);
/// bivariate jet in (x1,x2) (2D partials up to total order 4)
CJet2 eval_jet2(const ExprAst& expr, double eps, std::array<double, 2> x);

ScalarNet net_from_expr(const ExprAst& expr, const GridPtr& grid);

std::string pretty_print(const ExprAst& expr);
bool ast_equal(const ExprAst& a, const ExprAst& b);

} // namespace gwave

#endif
