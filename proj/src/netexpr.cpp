#include "gwave/netexpr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace gwave {

namespace {

struct Token {
    enum class Kind { Number, Ident, Op, LParen, RParen, Comma, End };
    Kind kind;
    std::string text;
    cxd value{0, 0};
    long pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        tok_.pos = static_cast<long>(i_);
        if (i_ >= s_.size()) {
            tok_.kind = Token::Kind::End;
            tok_.text = "<end>";
            return;
        }
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t start = i_;
            while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
            if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
                size_t j = i_ + 1;
                if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
                if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
                    i_ = j;
                    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
                }
            }
            std::string num = s_.substr(start, i_ - start);
            char* endp = nullptr;
            double v = std::strtod(num.c_str(), &endp);
            if (endp != num.c_str() + num.size())
                throw Error(ErrorKind::SyntaxError, "malformed number '" + num + "'", static_cast<long>(start));
            bool imag = false;
            if (i_ < s_.size() && s_[i_] == 'i' &&
                (i_ + 1 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[i_ + 1])))) {
                imag = true;
                ++i_;
            }
            tok_.kind = Token::Kind::Number;
            tok_.text = num;
            tok_.value = imag ? cxd(0.0, v) : cxd(v, 0.0);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            tok_.kind = Token::Kind::Ident;
            tok_.text = s_.substr(start, i_ - start);
            return;
        }
        ++i_;
        switch (c) {
            case '(': tok_.kind = Token::Kind::LParen; break;
            case ')': tok_.kind = Token::Kind::RParen; break;
            case ',': tok_.kind = Token::Kind::Comma; break;
            case '+': case '-': case '*': case '/': case '^':
                tok_.kind = Token::Kind::Op;
                break;
            default:
                throw Error(ErrorKind::SyntaxError, std::string("unexpected character '") + c + "'",
                            static_cast<long>(i_ - 1));
        }
        tok_.text = std::string(1, c);
    }

    const std::string& s_;
    size_t i_ = 0;
    Token tok_;
};

ExprPtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

class Parser {
public:
    Parser(const std::string& s, int dim) : lex_(s), dim_(dim) {}

    ExprPtr parse_full() {
        ExprPtr e = parse_expr();
        expect_end();
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& expected) {
        const Token& t = lex_.peek();
        throw Error(ErrorKind::SyntaxError, "expected " + expected + ", found '" + t.text + "'", t.pos);
    }

    void expect_end() {
        if (lex_.peek().kind != Token::Kind::End) fail("end of expression or operator");
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (lex_.peek().kind == Token::Kind::Op && (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            Token op = lex_.take();
            ExprPtr rhs = parse_term();
            ExprNode n;
            n.tag = op.text == "+" ? ExprNode::Tag::Add : ExprNode::Tag::Sub;
            n.args = {lhs, rhs};
            n.pos = op.pos;
            lhs = make_node(std::move(n));
        }
        return lhs;
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        while (lex_.peek().kind == Token::Kind::Op && (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            Token op = lex_.take();
            ExprPtr rhs = parse_factor();
            ExprNode n;
            n.tag = op.text == "*" ? ExprNode::Tag::Mul : ExprNode::Tag::Div;
            n.args = {lhs, rhs};
            n.pos = op.pos;
            lhs = make_node(std::move(n));
        }
        return lhs;
    }

    ExprPtr parse_factor() {
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "-") {
            Token op = lex_.take();
            ExprPtr inner = parse_factor();
            ExprNode n;
            n.tag = ExprNode::Tag::Neg;
            n.args = {inner};
            n.pos = op.pos;
            return make_node(std::move(n));
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "^") {
            Token op = lex_.take();
            ExprPtr exp = parse_factor();  // right-assoc; allows eps^-1
            ExprNode n;
            n.tag = ExprNode::Tag::Pow;
            n.args = {base, exp};
            n.pos = op.pos;
            return make_node(std::move(n));
        }
        return base;
    }

    ExprPtr parse_atom() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Number) {
            Token tok = lex_.take();
            ExprNode n;
            n.tag = ExprNode::Tag::Literal;
            n.literal = tok.value;
            n.pos = tok.pos;
            return make_node(std::move(n));
        }
        if (t.kind == Token::Kind::LParen) {
            lex_.take();
            ExprPtr e = parse_expr();
            if (lex_.peek().kind != Token::Kind::RParen) fail("\")\"");
            lex_.take();
            return e;
        }
        if (t.kind == Token::Kind::Ident) {
            Token tok = lex_.take();
            if (tok.text == "eps") {
                ExprNode n;
                n.tag = ExprNode::Tag::Eps;
                n.pos = tok.pos;
                return make_node(std::move(n));
            }
            if (tok.text == "x1" || tok.text == "x2") {
                int axis = tok.text == "x1" ? 0 : 1;
                if (axis >= dim_)
                    throw Error(ErrorKind::UnknownSymbol,
                                "coordinate '" + tok.text + "' outside declared dimension", tok.pos);
                ExprNode n;
                n.tag = ExprNode::Tag::Coord;
                n.coord = axis;
                n.pos = tok.pos;
                return make_node(std::move(n));
            }
            static const std::pair<const char*, ExprNode::Fn> fns[] = {
                {"log", ExprNode::Fn::Log}, {"exp", ExprNode::Fn::Exp},   {"sqrt", ExprNode::Fn::Sqrt},
                {"sin", ExprNode::Fn::Sin}, {"cos", ExprNode::Fn::Cos},   {"pow", ExprNode::Fn::Pow},
                {"abs", ExprNode::Fn::Abs},
            };
            for (const auto& [name, fn] : fns) {
                if (tok.text == name) {
                    if (lex_.peek().kind != Token::Kind::LParen) fail("\"(\" after function name");
                    lex_.take();
                    ExprNode n;
                    n.tag = ExprNode::Tag::Call;
                    n.fn = fn;
                    n.pos = tok.pos;
                    n.args.push_back(parse_expr());
                    if (fn == ExprNode::Fn::Pow) {
                        if (lex_.peek().kind != Token::Kind::Comma) fail("\",\" in pow(base, exponent)");
                        lex_.take();
                        n.args.push_back(parse_expr());
                    }
                    if (lex_.peek().kind != Token::Kind::RParen) fail("\")\"");
                    lex_.take();
                    return make_node(std::move(n));
                }
            }
            throw Error(ErrorKind::UnknownSymbol, "unknown symbol '" + tok.text + "'", tok.pos);
        }
        fail("a number, symbol, function call or \"(\"");
    }

    Lexer lex_;
    int dim_;
};

void scan_usage(const ExprPtr& n, bool& coords, bool& eps) {
    if (!n) return;
    if (n->tag == ExprNode::Tag::Coord) coords = true;
    if (n->tag == ExprNode::Tag::Eps) eps = true;
    for (const ExprPtr& a : n->args) scan_usage(a, coords, eps);
}

// ---- generic evaluation -------------------------------------------------

template <class R>
struct RingOps;

template <>
struct RingOps<cxd> {
    static cxd from_const(cxd v) { return v; }
    static cxd add(cxd a, cxd b) { return a + b; }
    static cxd sub(cxd a, cxd b) { return a - b; }
    static cxd mul(cxd a, cxd b) { return a * b; }
    static cxd div(cxd a, cxd b) {
        if (b == cxd(0.0, 0.0)) throw Error(ErrorKind::DomainError, "division by zero");
        return a / b;
    }
    static cxd neg(cxd a) { return -a; }
    static cxd exp(cxd a) { return std::exp(a); }
    static cxd log(cxd a) {
        if (a == cxd(0.0, 0.0) || (detail::is_real(a) && a.real() <= 0.0))
            throw Error(ErrorKind::DomainError, "log of non-positive value");
        return std::log(a);
    }
    static cxd sqrt(cxd a) {
        if (detail::is_real(a) && a.real() < 0.0)
            throw Error(ErrorKind::DomainError, "sqrt of negative value");
        return std::sqrt(a);
    }
    static cxd sin(cxd a) { return std::sin(a); }
    static cxd cos(cxd a) { return std::cos(a); }
    static cxd pow_int(cxd a, long n) {
        if (n < 0 && a == cxd(0.0, 0.0)) throw Error(ErrorKind::DomainError, "zero to a negative power");
        cxd acc(1.0, 0.0), base = a;
        unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
        while (e) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return n < 0 ? cxd(1.0, 0.0) / acc : acc;
    }
    static cxd pow_real(cxd a, double p) {
        if (!detail::is_real(a) || a.real() < 0.0)
            throw Error(ErrorKind::DomainError, "fractional power of non-positive base");
        if (a.real() == 0.0) {
            if (p <= 0.0) throw Error(ErrorKind::DomainError, "zero to a non-positive fractional power");
            return cxd(0.0, 0.0);
        }
        return cxd(std::pow(a.real(), p), 0.0);
    }
    static cxd abs_op(cxd a) { return cxd(std::abs(a), 0.0); }
    static cxd constant_of(cxd a) { return a; }
};

template <class Jet>
struct JetRingOps {
    static Jet from_const(cxd v) { return Jet::constant(v); }
    static Jet add(const Jet& a, const Jet& b) { return a + b; }
    static Jet sub(const Jet& a, const Jet& b) { return a - b; }
    static Jet mul(const Jet& a, const Jet& b) { return a * b; }
    static Jet div(const Jet& a, const Jet& b) { return jet_div(a, b); }
    static Jet neg(const Jet& a) { return -a; }
    static Jet exp(const Jet& a) { return jet_exp(a); }
    static Jet log(const Jet& a) { return jet_log(a); }
    static Jet sqrt(const Jet& a) { return jet_sqrt(a); }
    static Jet sin(const Jet& a) { return jet_sin(a); }
    static Jet cos(const Jet& a) { return jet_cos(a); }
    static Jet pow_int(const Jet& a, long n) { return jet_pow_int(a, n); }
    static Jet pow_real(const Jet& a, double p) { return jet_pow_real(a, p); }
    static Jet abs_op(const Jet& a) {
        cxd c = a.constant_term();
        if (!detail::is_real(c) || c.real() == 0.0)
            throw Error(ErrorKind::DomainError, "abs is not differentiable here");
        return c.real() > 0.0 ? a : -a;
    }
    static cxd constant_of(const Jet& a) { return a.constant_term(); }
};

template <>
struct RingOps<CTaylor> : JetRingOps<CTaylor> {};
template <>
struct RingOps<CJet2> : JetRingOps<CJet2> {};

bool const_subtree(const ExprPtr& n) {
    bool c = false, e = false;
    scan_usage(n, c, e);
    return !c && !e;
}

template <class R>
struct EvalEnv {
    R eps;
    std::array<R, 2> x;
};

template <class R>
R eval_node(const ExprPtr& n, const EvalEnv<R>& env) {
    using Ops = RingOps<R>;
    switch (n->tag) {
        case ExprNode::Tag::Literal: return Ops::from_const(n->literal);
        case ExprNode::Tag::Eps: return env.eps;
        case ExprNode::Tag::Coord: return env.x[static_cast<size_t>(n->coord)];
        case ExprNode::Tag::Neg: return Ops::neg(eval_node(n->args[0], env));
        case ExprNode::Tag::Add: return Ops::add(eval_node(n->args[0], env), eval_node(n->args[1], env));
        case ExprNode::Tag::Sub: return Ops::sub(eval_node(n->args[0], env), eval_node(n->args[1], env));
        case ExprNode::Tag::Mul: return Ops::mul(eval_node(n->args[0], env), eval_node(n->args[1], env));
        case ExprNode::Tag::Div: return Ops::div(eval_node(n->args[0], env), eval_node(n->args[1], env));
        case ExprNode::Tag::Pow: {
            R base = eval_node(n->args[0], env);
            R expo = eval_node(n->args[1], env);
            cxd ec = Ops::constant_of(expo);
            if (!const_subtree(n->args[1]) || std::abs(ec.imag()) > 1e-14)
                throw Error(ErrorKind::DomainError, "exponents must be real constants", n->pos);
            double p = ec.real();
            if (std::abs(p - std::round(p)) < 1e-12) return Ops::pow_int(base, std::lround(p));
            return Ops::pow_real(base, p);
        }
        case ExprNode::Tag::Call: {
            R a = eval_node(n->args[0], env);
            switch (n->fn) {
                case ExprNode::Fn::Log: return Ops::log(a);
                case ExprNode::Fn::Exp: return Ops::exp(a);
                case ExprNode::Fn::Sqrt: return Ops::sqrt(a);
                case ExprNode::Fn::Sin: return Ops::sin(a);
                case ExprNode::Fn::Cos: return Ops::cos(a);
                case ExprNode::Fn::Abs: return Ops::abs_op(a);
                case ExprNode::Fn::Pow: {
                    R b = eval_node(n->args[1], env);
                    cxd ec = Ops::constant_of(b);
                    if (!const_subtree(n->args[1]) || std::abs(ec.imag()) > 1e-14)
                        throw Error(ErrorKind::DomainError, "exponents must be real constants", n->pos);
                    double p = ec.real();
                    if (std::abs(p - std::round(p)) < 1e-12) return Ops::pow_int(a, std::lround(p));
                    return Ops::pow_real(a, p);
                }
            }
            break;
        }
    }
    throw Error(ErrorKind::DomainError, "malformed expression tree");
}

void check_finite(cxd v, long pos) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(ErrorKind::DomainError, "expression evaluated to a non-finite value", pos);
}

} // namespace

ExprAst::ExprAst(ExprPtr root, int dimension, std::string source)
    : root_(std::move(root)), dimension_(dimension), source_(std::move(source)) {
    scan_usage(root_, uses_coords_, uses_eps_);
}

ExprAst parse(const std::string& text, int dimension) {
    if (text.empty()) throw Error(ErrorKind::SyntaxError, "empty expression", 0);
    if (dimension != 1 && dimension != 2)
        throw Error(ErrorKind::DimensionMismatch, "dimension must be 1 or 2");
    Parser p(text, dimension);
    return ExprAst(p.parse_full(), dimension, text);
}

cxd eval(const ExprAst& expr, double eps, std::array<double, 2> x) {
    EvalEnv<cxd> env{cxd(eps, 0.0), {cxd(x[0], 0.0), cxd(x[1], 0.0)}};
    cxd v = eval_node(expr.root(), env);
    check_finite(v, 0);
    return v;
}

cxd eval_scalar(const ExprAst& expr, double eps) {
    if (expr.uses_coords())
        throw Error(ErrorKind::NonScalar, "expression mentions coordinates");
    return eval(expr, eps, {0.0, 0.0});
}

CTaylor eval_jet1(const ExprAst& expr, double eps, double x1) {
    EvalEnv<CTaylor> env{CTaylor::constant(cxd(eps, 0.0)),
                         {CTaylor::variable(cxd(x1, 0.0)), CTaylor::constant(cxd(0.0, 0.0))}};
    CTaylor v = eval_node(expr.root(), env);
    check_finite(v.constant_term(), 0);
    return v;
}

CJet2 eval_jet2(const ExprAst& expr, double eps, std::array<double, 2> x) {
    EvalEnv<CJet2> env{CJet2::constant(cxd(eps, 0.0)),
                       {CJet2::variable(0, cxd(x[0], 0.0)), CJet2::variable(1, cxd(x[1], 0.0))}};
    CJet2 v = eval_node(expr.root(), env);
    check_finite(v.constant_term(), 0);
    return v;
}

ScalarNet net_from_expr(const ExprAst& expr, const GridPtr& grid) {
    std::vector<cxd> samples;
    samples.reserve(grid->size());
    for (size_t i = 0; i < grid->size(); ++i) {
        try {
            samples.push_back(eval_scalar(expr, (*grid)[i]));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NonScalar) throw;
            throw Error(e.kind(), std::string(e.what()) + " at grid index " + std::to_string(i),
                        static_cast<long>(i));
        }
    }
    return ScalarNet(grid, std::move(samples));
}

namespace {

int node_prec(const ExprNode& n) {
    switch (n.tag) {
        case ExprNode::Tag::Add:
        case ExprNode::Tag::Sub: return 1;
        case ExprNode::Tag::Mul:
        case ExprNode::Tag::Div: return 2;
        case ExprNode::Tag::Neg: return 3;
        case ExprNode::Tag::Pow: return 4;
        default: return 5;
    }
}

void print_node(std::ostringstream& os, const ExprPtr& n, int parent_prec) {
    int prec = node_prec(*n);
    bool paren = prec < parent_prec;
    if (paren) os << '(';
    switch (n->tag) {
        case ExprNode::Tag::Literal: {
            if (n->literal.imag() != 0.0) {
                std::ostringstream t;
                t << n->literal.imag();
                os << t.str() << 'i';
            } else {
                std::ostringstream t;
                double re = n->literal.real();
                t << re;
                std::string s = t.str();
                os << s;
            }
            break;
        }
        case ExprNode::Tag::Eps: os << "eps"; break;
        case ExprNode::Tag::Coord: os << (n->coord == 0 ? "x1" : "x2"); break;
        case ExprNode::Tag::Neg:
            os << '-';
            print_node(os, n->args[0], 3);
            break;
        case ExprNode::Tag::Add:
            print_node(os, n->args[0], 1);
            os << " + ";
            print_node(os, n->args[1], 2);
            break;
        case ExprNode::Tag::Sub:
            print_node(os, n->args[0], 1);
            os << " - ";
            print_node(os, n->args[1], 2);
            break;
        case ExprNode::Tag::Mul:
            print_node(os, n->args[0], 2);
            os << "*";
            print_node(os, n->args[1], 3);
            break;
        case ExprNode::Tag::Div:
            print_node(os, n->args[0], 2);
            os << "/";
            print_node(os, n->args[1], 3);
            break;
        case ExprNode::Tag::Pow:
            print_node(os, n->args[0], 5);
            os << "^";
            print_node(os, n->args[1], 3);
            break;
        case ExprNode::Tag::Call: {
            const char* names[] = {"log", "exp", "sqrt", "sin", "cos", "pow", "abs"};
            os << names[static_cast<int>(n->fn)] << '(';
            print_node(os, n->args[0], 0);
            if (n->args.size() > 1) {
                os << ", ";
                print_node(os, n->args[1], 0);
            }
            os << ')';
            break;
        }
    }
    if (paren) os << ')';
}

bool node_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->tag != b->tag) return false;
    switch (a->tag) {
        case ExprNode::Tag::Literal:
            if (a->literal != b->literal) return false;
            break;
        case ExprNode::Tag::Coord:
            if (a->coord != b->coord) return false;
            break;
        case ExprNode::Tag::Call:
            if (a->fn != b->fn) return false;
            break;
        default: break;
    }
    if (a->args.size() != b->args.size()) return false;
    for (size_t i = 0; i < a->args.size(); ++i)
        if (!node_equal(a->args[i], b->args[i])) return false;
    return true;
}

} // namespace

std::string pretty_print(const ExprAst& expr) {
    std::ostringstream os;
    print_node(os, expr.root(), 0);
    return os.str();
}

bool ast_equal(const ExprAst& a, const ExprAst& b) {
    return a.dimension() == b.dimension() && node_equal(a.root(), b.root());
}

} // namespace gwave
