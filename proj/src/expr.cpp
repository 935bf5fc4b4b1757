#include "smms/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <vector>

#include "smms/errors.hpp"

namespace smms {

struct Expression::Node {
    enum class Kind { Number, Variable, Unary, Binary, Call } kind;
    double value = 0;
    std::string name;
    char op = 0;
    std::vector<std::shared_ptr<const Node>> args;

    double eval(const std::map<std::string, double>& vars) const {
        switch (kind) {
        case Kind::Number: return value;
        case Kind::Variable: return vars.at(name);
        case Kind::Unary: return -args[0]->eval(vars);
        case Kind::Binary: {
            const double a = args[0]->eval(vars), b = args[1]->eval(vars);
            switch (op) {
            case '+': return a + b;
            case '-': return a - b;
            case '*': return a * b;
            case '/': return a / b;
            default: return std::pow(a, b);
            }
        }
        case Kind::Call: {
            const double a = args[0]->eval(vars);
            if (args.size() == 2) {
                const double b = args[1]->eval(vars);
                if (name == "pow") return std::pow(a, b);
                if (name == "min") return std::min(a, b);
                return std::max(a, b);
            }
            return unary_fn(name)(a);
        }
        }
        return 0;
    }

    static double (*unary_fn(const std::string& n))(double) {
        if (n == "sin") return [](double a) { return std::sin(a); };
        if (n == "cos") return [](double a) { return std::cos(a); };
        if (n == "tan") return [](double a) { return std::tan(a); };
        if (n == "exp") return [](double a) { return std::exp(a); };
        if (n == "log") return [](double a) { return std::log(a); };
        if (n == "sqrt") return [](double a) { return std::sqrt(a); };
        if (n == "abs") return [](double a) { return std::abs(a); };
        if (n == "sinh") return [](double a) { return std::sinh(a); };
        if (n == "cosh") return [](double a) { return std::cosh(a); };
        if (n == "tanh") return [](double a) { return std::tanh(a); };
        if (n == "atan") return [](double a) { return std::atan(a); };
        if (n == "erf") return [](double a) { return std::erf(a); };
        return nullptr;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

class Parser {
public:
    Parser(const std::string& s, std::set<std::string> vars) : s_(s), vars_(std::move(vars)) {}

    NodePtr parse() {
        NodePtr n = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("expression '" + s_ + "': " + why + " at offset " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr make(Kind k, char op, std::vector<NodePtr> args, std::string name = {}, double v = 0) {
        auto n = std::make_shared<Expression::Node>();
        n->kind = k;
        n->op = op;
        n->args = std::move(args);
        n->name = std::move(name);
        n->value = v;
        return n;
    }

    NodePtr sum() {
        NodePtr lhs = product();
        for (;;) {
            if (eat('+')) lhs = make(Kind::Binary, '+', {lhs, product()});
            else if (eat('-')) lhs = make(Kind::Binary, '-', {lhs, product()});
            else return lhs;
        }
    }

    NodePtr product() {
        NodePtr lhs = unary();
        for (;;) {
            if (eat('*')) lhs = make(Kind::Binary, '*', {lhs, unary()});
            else if (eat('/')) lhs = make(Kind::Binary, '/', {lhs, unary()});
            else return lhs;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Kind::Unary, '-', {unary()});
        if (eat('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (eat('^')) return make(Kind::Binary, '^', {base, unary()});
        return base;
    }

    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (eat('(')) {
            NodePtr n = sum();
            if (!eat(')')) fail("expected ')'");
            return n;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(s_.substr(pos_), &used);
            } catch (const std::exception&) {
                fail("bad number");
            }
            pos_ += used;
            return make(Kind::Number, 0, {}, {}, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string id = s_.substr(start, pos_ - start);
            if (eat('(')) {
                std::vector<NodePtr> args{sum()};
                while (eat(',')) args.push_back(sum());
                if (!eat(')')) fail("expected ')'");
                const bool binary = id == "pow" || id == "min" || id == "max";
                if (binary ? args.size() != 2 : (args.size() != 1 || !Expression::Node::unary_fn(id))) {
                    fail("unknown function or wrong arity '" + id + "'");
                }
                return make(Kind::Call, 0, std::move(args), id);
            }
            if (id == "pi") return make(Kind::Number, 0, {}, {}, std::numbers::pi);
            if (id == "e") return make(Kind::Number, 0, {}, {}, std::numbers::e);
            if (id == "inf") return make(Kind::Number, 0, {}, {}, std::numeric_limits<double>::infinity());
            if (!vars_.count(id)) fail("unknown identifier '" + id + "'");
            return make(Kind::Variable, 0, {}, id);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::set<std::string> vars_;
    std::size_t pos_ = 0;
};

} // namespace

Expression::Expression(const std::string& text, std::initializer_list<std::string> variables)
    : text_(text), root_(Parser(text_, std::set<std::string>(variables)).parse()) {}

double Expression::operator()(double x) const { return root_->eval({{"x", x}}); }

double Expression::eval(const std::map<std::string, double>& vars) const { return root_->eval(vars); }

} // namespace smms
