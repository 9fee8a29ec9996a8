#include "nlf/expr.hpp"

#include <cctype>
#include <random>
#include <sstream>

namespace nlf {
namespace {

enum class TokKind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
    TokKind kind = TokKind::end;
    std::size_t pos = 0;
    double number = 0.0;
    bool is_integer = false;
    long long int_value = 0;
    std::string text;

    Token() = default;
    Token(TokKind k, std::size_t p) : kind(k), pos(p) {}
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_ = Token{TokKind::end, pos_};
        if (pos_ >= src_.size()) return;
        char c = src_[pos_];
        switch (c) {
            case '+': tok_ = {TokKind::plus, pos_++}; return;
            case '-': tok_ = {TokKind::minus, pos_++}; return;
            case '*': tok_ = {TokKind::star, pos_++}; return;
            case '/': tok_ = {TokKind::slash, pos_++}; return;
            case '^': tok_ = {TokKind::caret, pos_++}; return;
            case '(': tok_ = {TokKind::lparen, pos_++}; return;
            case ')': tok_ = {TokKind::rparen, pos_++}; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.' ||
                    src_[pos_] == 'e' || src_[pos_] == 'E' ||
                    ((src_[pos_] == '+' || src_[pos_] == '-') && pos_ > start &&
                     (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E'))))
                ++pos_;
            std::string text = src_.substr(start, pos_ - start);
            Token t{TokKind::number, start};
            try {
                std::size_t used = 0;
                t.number = std::stod(text, &used);
                if (used != text.size()) throw std::invalid_argument(text);
            } catch (const std::exception&) {
                throw SyntaxError(start, "malformed number '" + text + "'");
            }
            t.is_integer = text.find_first_of(".eE") == std::string::npos;
            if (t.is_integer) t.int_value = std::stoll(text);
            t.text = std::move(text);
            tok_ = std::move(t);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            Token t{TokKind::ident, start};
            t.text = src_.substr(start, pos_ - start);
            tok_ = std::move(t);
            return;
        }
        throw SyntaxError(pos_, std::string("unexpected character '") + c + "'");
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    Token tok_;
};

class Parser {
public:
    Parser(const std::string& text, std::shared_ptr<const ChartSpec> chart)
        : lex_(text), chart_(std::move(chart)) {}

    Expression run() {
        int root = parse_sum();
        if (lex_.peek().kind != TokKind::end)
            throw SyntaxError(lex_.peek().pos, "trailing input after expression");
        return Expression(chart_, std::move(nodes_), root);
    }

private:
    int add_node(ExprNode nd) {
        nodes_.push_back(nd);
        return static_cast<int>(nodes_.size()) - 1;
    }

    int parse_sum() {
        int lhs = parse_term();
        while (lex_.peek().kind == TokKind::plus || lex_.peek().kind == TokKind::minus) {
            TokKind op = lex_.take().kind;
            int rhs = parse_term();
            ExprNode nd;
            nd.op = op == TokKind::plus ? ExprOp::add : ExprOp::sub;
            nd.a = lhs;
            nd.b = rhs;
            lhs = add_node(nd);
        }
        return lhs;
    }

    int parse_term() {
        int lhs = parse_unary();
        while (lex_.peek().kind == TokKind::star || lex_.peek().kind == TokKind::slash) {
            TokKind op = lex_.take().kind;
            int rhs = parse_unary();
            ExprNode nd;
            nd.op = op == TokKind::star ? ExprOp::mul : ExprOp::div;
            nd.a = lhs;
            nd.b = rhs;
            lhs = add_node(nd);
        }
        return lhs;
    }

    int parse_unary() {
        if (lex_.peek().kind == TokKind::minus) {
            lex_.take();
            int child = parse_unary();
            ExprNode nd;
            nd.op = ExprOp::neg;
            nd.a = child;
            return add_node(nd);
        }
        return parse_power();
    }

    int parse_power() {
        int base = parse_primary();
        if (lex_.peek().kind != TokKind::caret) return base;
        lex_.take();
        auto [num, den] = parse_exponent();
        ExprNode nd;
        nd.op = ExprOp::pow_op;
        nd.a = base;
        nd.pow_num = num;
        nd.pow_den = den;
        return add_node(nd);
    }

    // Exponents are rational literals: an optionally signed integer, or a
    // parenthesized '(p/q)' with integer p, q.
    std::pair<long long, long long> parse_exponent() {
        long long sign = 1;
        if (lex_.peek().kind == TokKind::minus) {
            lex_.take();
            sign = -1;
        }
        if (lex_.peek().kind == TokKind::number) {
            Token t = lex_.take();
            if (!t.is_integer)
                throw SyntaxError(t.pos, "exponent must be an integer or a rational (p/q)");
            return {sign * t.int_value, 1};
        }
        if (lex_.peek().kind == TokKind::lparen) {
            lex_.take();
            long long num = sign * parse_signed_integer();
            long long den = 1;
            if (lex_.peek().kind == TokKind::slash) {
                lex_.take();
                den = parse_signed_integer();
                if (den == 0) throw SyntaxError(lex_.peek().pos, "zero exponent denominator");
            }
            expect(TokKind::rparen, "expected ')' after exponent");
            return {num, den};
        }
        throw SyntaxError(lex_.peek().pos, "expected exponent");
    }

    long long parse_signed_integer() {
        long long sign = 1;
        if (lex_.peek().kind == TokKind::minus) {
            lex_.take();
            sign = -1;
        }
        if (lex_.peek().kind != TokKind::number || !lex_.peek().is_integer)
            throw SyntaxError(lex_.peek().pos, "expected integer");
        return sign * lex_.take().int_value;
    }

    int parse_primary() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case TokKind::number: {
                Token tok = lex_.take();
                ExprNode nd;
                nd.op = ExprOp::constant;
                nd.value = tok.number;
                return add_node(nd);
            }
            case TokKind::lparen: {
                lex_.take();
                int inner = parse_sum();
                expect(TokKind::rparen, "expected ')'");
                return inner;
            }
            case TokKind::ident: {
                Token tok = lex_.take();
                if (lex_.peek().kind == TokKind::lparen) {
                    ExprOp op;
                    if (tok.text == "exp") op = ExprOp::exp_fn;
                    else if (tok.text == "log") op = ExprOp::log_fn;
                    else if (tok.text == "sqrt") op = ExprOp::sqrt_fn;
                    else if (tok.text == "sin") op = ExprOp::sin_fn;
                    else if (tok.text == "cos") op = ExprOp::cos_fn;
                    else throw UnknownSymbol(tok.text);
                    lex_.take();
                    int arg = parse_sum();
                    expect(TokKind::rparen, "expected ')' after function argument");
                    ExprNode nd;
                    nd.op = op;
                    nd.a = arg;
                    return add_node(nd);
                }
                int var = chart_->index_of(tok.text);
                if (var < 0) throw UnknownSymbol(tok.text);
                ExprNode nd;
                nd.op = ExprOp::variable;
                nd.var = var;
                return add_node(nd);
            }
            default:
                throw SyntaxError(t.pos, "expected a number, variable, function, or '('");
        }
    }

    void expect(TokKind kind, const std::string& msg) {
        if (lex_.peek().kind != kind) throw SyntaxError(lex_.peek().pos, msg);
        lex_.take();
    }

    Lexer lex_;
    std::shared_ptr<const ChartSpec> chart_;
    std::vector<ExprNode> nodes_;
};

// Printing precedence levels; parenthesize a child whenever its level is too
// weak for the position it appears in.
int precedence(ExprOp op) {
    switch (op) {
        case ExprOp::add:
        case ExprOp::sub: return 1;
        case ExprOp::mul:
        case ExprOp::div: return 2;
        case ExprOp::neg: return 3;
        case ExprOp::pow_op: return 4;
        default: return 5;
    }
}

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

std::string Expression::print() const {
    std::vector<std::string> out(nodes_.size());
    auto wrap = [&](int child, int min_prec) {
        const std::string& s = out[static_cast<std::size_t>(child)];
        if (precedence(nodes_[static_cast<std::size_t>(child)].op) < min_prec)
            return "(" + s + ")";
        return s;
    };
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        const ExprNode& nd = nodes_[k];
        switch (nd.op) {
            case ExprOp::constant:
                out[k] = nd.value < 0 ? "(" + format_number(nd.value) + ")"
                                      : format_number(nd.value);
                break;
            case ExprOp::variable: out[k] = chart_->name(nd.var); break;
            case ExprOp::neg: out[k] = "-" + wrap(nd.a, 3); break;
            case ExprOp::exp_fn: out[k] = "exp(" + out[static_cast<std::size_t>(nd.a)] + ")"; break;
            case ExprOp::log_fn: out[k] = "log(" + out[static_cast<std::size_t>(nd.a)] + ")"; break;
            case ExprOp::sqrt_fn: out[k] = "sqrt(" + out[static_cast<std::size_t>(nd.a)] + ")"; break;
            case ExprOp::sin_fn: out[k] = "sin(" + out[static_cast<std::size_t>(nd.a)] + ")"; break;
            case ExprOp::cos_fn: out[k] = "cos(" + out[static_cast<std::size_t>(nd.a)] + ")"; break;
            case ExprOp::add: out[k] = wrap(nd.a, 1) + " + " + wrap(nd.b, 2); break;
            case ExprOp::sub: out[k] = wrap(nd.a, 1) + " - " + wrap(nd.b, 2); break;
            case ExprOp::mul: out[k] = wrap(nd.a, 2) + "*" + wrap(nd.b, 3); break;
            case ExprOp::div: out[k] = wrap(nd.a, 2) + "/" + wrap(nd.b, 3); break;
            case ExprOp::pow_op: {
                std::string expo = nd.pow_den == 1
                                       ? (nd.pow_num < 0 ? "(" + std::to_string(nd.pow_num) + ")"
                                                         : std::to_string(nd.pow_num))
                                       : "(" + std::to_string(nd.pow_num) + "/" +
                                             std::to_string(nd.pow_den) + ")";
                out[k] = wrap(nd.a, 5) + "^" + expo;
                break;
            }
        }
    }
    return out[static_cast<std::size_t>(root_)];
}

Expression parse_lagrangian(const std::string& text, std::shared_ptr<const ChartSpec> chart) {
    if (text.empty()) throw SyntaxError(0, "empty expression");
    Parser p(text, std::move(chart));
    return p.run();
}

Jet evaluate_on_jets(const Expression& e, const std::vector<Jet>& seeds) {
    return e.eval(seeds);
}

double partial(const Expression& e, const ChartPoint& u, const MultiIndex& idx) {
    int total = 0;
    for (auto a : idx) total += a;
    if (total > JetContext::kMaxOrder)
        throw DomainError("partial derivatives are supported up to order 4");
    Jet j = e.eval(Jet::seed(u, total));
    return j.partial(idx);
}

bool check_homogeneity(const Expression& e, const ChartSpec& chart, int samples,
                       std::uint64_t seed) {
    if (samples < 1) throw InvalidInput("homogeneity check needs at least one sample");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xdist(-1.0, 1.0);
    std::uniform_real_distribution<double> ydist(0.25, 1.5);
    const double lambdas[] = {0.5, 2.0, 3.0};
    for (int s = 0; s < samples; ++s) {
        std::vector<double> coords(static_cast<std::size_t>(chart.dim()));
        for (int i = 0; i < chart.n(); ++i) coords[static_cast<std::size_t>(i)] = xdist(rng);
        for (int a = chart.n(); a < chart.dim(); ++a) {
            double sign = (rng() & 1u) ? 1.0 : -1.0;
            coords[static_cast<std::size_t>(a)] = sign * ydist(rng);
        }
        double base = e.eval(coords);
        for (double lambda : lambdas) {
            std::vector<double> scaled = coords;
            for (int a = chart.n(); a < chart.dim(); ++a)
                scaled[static_cast<std::size_t>(a)] *= lambda;
            double lhs = e.eval(scaled);
            double rhs = lambda * lambda * base;
            if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(rhs))) return false;
        }
    }
    return true;
}

} // namespace nlf
