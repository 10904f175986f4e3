#include "heun/expr.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace heun {

namespace detail {

struct ExprNode {
    enum class Kind { Num, Sym, Neg, Add, Sub, Mul, Div };
    Kind kind;
    double num = 0.0;
    int sym = -1;
    std::shared_ptr<const ExprNode> lhs, rhs;
};

}  // namespace detail

namespace {

using detail::ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

constexpr std::array<const char*, 6> kSymbols = {"a",     "q",     "alpha",
                                                 "beta",  "gamma", "delta"};

NodePtr leaf_num(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Num;
    n->num = v;
    return n;
}

NodePtr leaf_sym(int idx) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Sym;
    n->sym = idx;
    return n;
}

NodePtr unary(ExprNode::Kind k, NodePtr c) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->lhs = std::move(c);
    return n;
}

NodePtr binary(ExprNode::Kind k, NodePtr l, NodePtr r) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ < s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    NodePtr expr() {
        NodePtr l = term();
        for (;;) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                l = binary(ExprNode::Kind::Add, l, term());
            } else if (peek() == '-') {
                ++pos_;
                l = binary(ExprNode::Kind::Sub, l, term());
            } else {
                return l;
            }
        }
    }

    NodePtr term() {
        NodePtr l = factor();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                l = binary(ExprNode::Kind::Mul, l, factor());
            } else if (peek() == '/') {
                ++pos_;
                l = binary(ExprNode::Kind::Div, l, factor());
            } else {
                return l;
            }
        }
    }

    NodePtr factor() {
        skip_ws();
        if (peek() == '-') {
            ++pos_;
            return unary(ExprNode::Kind::Neg, factor());
        }
        return primary();
    }

    NodePtr primary() {
        skip_ws();
        char c = peek();
        if (c == '\0') fail("unexpected end of input");
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("malformed number");
            pos_ += static_cast<size_t>(end - begin);
            return leaf_num(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                    s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            for (size_t i = 0; i < kSymbols.size(); ++i)
                if (name == kSymbols[i]) return leaf_sym(static_cast<int>(i));
            std::ostringstream os;
            os << "unknown symbol '" << name << "' at position " << start;
            throw FormatError(os.str());
        }
        fail(std::string("unexpected character '") + c + "'");
        return nullptr;  // unreachable
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < s_.size() &&
               std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << "syntax error at position " << pos_ << ": " << what;
        throw FormatError(os.str());
    }

    const std::string& s_;
    size_t pos_ = 0;
};

double eval_node(const ExprNode& n, const HeunParams& b) {
    switch (n.kind) {
        case ExprNode::Kind::Num:
            return n.num;
        case ExprNode::Kind::Sym:
            switch (n.sym) {
                case 0: return b.a;
                case 1: return b.q;
                case 2: return b.alpha;
                case 3: return b.beta;
                case 4: return b.gamma;
                default: break;
            }
            return n.sym == 5 ? b.delta : 0.0;
        case ExprNode::Kind::Neg:
            return -eval_node(*n.lhs, b);
        case ExprNode::Kind::Add:
            return eval_node(*n.lhs, b) + eval_node(*n.rhs, b);
        case ExprNode::Kind::Sub:
            return eval_node(*n.lhs, b) - eval_node(*n.rhs, b);
        case ExprNode::Kind::Mul:
            return eval_node(*n.lhs, b) * eval_node(*n.rhs, b);
        case ExprNode::Kind::Div: {
            double d = eval_node(*n.rhs, b);
            if (d == 0.0)
                throw DomainError("division by zero in parameter expression");
            return eval_node(*n.lhs, b) / d;
        }
    }
    throw DomainError("corrupt expression node");
}

int precedence(const ExprNode& n) {
    switch (n.kind) {
        case ExprNode::Kind::Add:
        case ExprNode::Kind::Sub:
            return 1;
        case ExprNode::Kind::Mul:
        case ExprNode::Kind::Div:
            return 2;
        case ExprNode::Kind::Neg:
            return 3;
        default:
            return 4;
    }
}

void print_node(const ExprNode& n, int parent_min, std::ostringstream& os) {
    int prec = precedence(n);
    bool wrap = prec < parent_min;
    if (wrap) os << '(';
    switch (n.kind) {
        case ExprNode::Kind::Num: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", n.num);
            os << buf;
            break;
        }
        case ExprNode::Kind::Sym:
            os << kSymbols[static_cast<size_t>(n.sym)];
            break;
        case ExprNode::Kind::Neg:
            os << '-';
            print_node(*n.lhs, 3, os);
            break;
        case ExprNode::Kind::Add:
            print_node(*n.lhs, 1, os);
            os << " + ";
            print_node(*n.rhs, 2, os);
            break;
        case ExprNode::Kind::Sub:
            print_node(*n.lhs, 1, os);
            os << " - ";
            print_node(*n.rhs, 2, os);
            break;
        case ExprNode::Kind::Mul:
            print_node(*n.lhs, 2, os);
            os << "*";
            print_node(*n.rhs, 3, os);
            break;
        case ExprNode::Kind::Div:
            print_node(*n.lhs, 2, os);
            os << "/";
            print_node(*n.rhs, 3, os);
            break;
    }
    if (wrap) os << ')';
}

}  // namespace

double ParamExpr::eval(const HeunParams& binding) const {
    if (!root_) throw DomainError("empty expression");
    return eval_node(*root_, binding);
}

std::string ParamExpr::to_string() const {
    if (!root_) return "";
    std::ostringstream os;
    print_node(*root_, 0, os);
    return os.str();
}

ParamExpr parse_param_expr(const std::string& text) {
    return ParamExpr(Parser(text).run());
}

}  // namespace heun
