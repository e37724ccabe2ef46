#ifndef LNELAB_RADIUS_HPP
#define LNELAB_RADIUS_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lnelab/polynomial.hpp"

namespace lnelab {

enum class RadiusKind { euclidean, maxnorm, coordinate, composite };

namespace radius_expr {

// Expression tree over {euclidean norm, max norm, coordinates, rational
// constants, +, -, *, rational powers of non-negative sub-expressions}.
struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum class Op { constant, coordinate, norm2, norm_inf, add, sub, mul, pow };
    Op op;
    Rational value{0};          // constant
    std::size_t index = 0;      // coordinate
    NodePtr lhs, rhs;           // binary ops; pow uses lhs only
    Rational exponent{1};       // pow
};

inline NodePtr make_constant(const Rational& c) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::constant;
    n->value = c;
    return n;
}

inline NodePtr make_coordinate(std::size_t i) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::coordinate;
    n->index = i;
    return n;
}

inline NodePtr make_norm(Node::Op which) {
    auto n = std::make_shared<Node>();
    n->op = which;
    return n;
}

inline NodePtr make_binary(Node::Op which, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->op = which;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

inline NodePtr make_pow(NodePtr base, const Rational& e) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::pow;
    n->lhs = std::move(base);
    n->exponent = e;
    return n;
}

inline double eval(const NodePtr& n, const Vec& x) {
    switch (n->op) {
        case Node::Op::constant: return to_double(n->value);
        case Node::Op::coordinate: return x.at(n->index);
        case Node::Op::norm2: return norm2(x);
        case Node::Op::norm_inf: return norm_inf(x);
        case Node::Op::add: return eval(n->lhs, x) + eval(n->rhs, x);
        case Node::Op::sub: return eval(n->lhs, x) - eval(n->rhs, x);
        case Node::Op::mul: return eval(n->lhs, x) * eval(n->rhs, x);
        case Node::Op::pow: {
            double base = eval(n->lhs, x);
            double e = to_double(n->exponent);
            if (n->exponent.denominator() != 1 && base < 0)
                throw Error(ErrorKind::numeric,
                            "radius expression: fractional power of a negative value");
            return std::pow(base, e);
        }
    }
    return 0.0;
}

struct ValueGrad {
    double value;
    Vec grad;
};

inline ValueGrad eval_with_gradient(const NodePtr& n, const Vec& x) {
    const std::size_t dim = x.size();
    switch (n->op) {
        case Node::Op::constant: return {to_double(n->value), Vec(dim, 0.0)};
        case Node::Op::coordinate: {
            Vec g(dim, 0.0);
            g.at(n->index) = 1.0;
            return {x.at(n->index), g};
        }
        case Node::Op::norm2: {
            double r = norm2(x);
            Vec g(dim, 0.0);
            if (r > 0)
                for (std::size_t i = 0; i < dim; ++i) g[i] = x[i] / r;
            return {r, g};
        }
        case Node::Op::norm_inf: {
            // Subgradient: unit vector at the first coordinate attaining the max.
            double best = -1.0;
            std::size_t arg = 0;
            for (std::size_t i = 0; i < dim; ++i)
                if (std::abs(x[i]) > best) {
                    best = std::abs(x[i]);
                    arg = i;
                }
            Vec g(dim, 0.0);
            if (best > 0) g[arg] = x[arg] > 0 ? 1.0 : -1.0;
            return {best < 0 ? 0.0 : best, g};
        }
        case Node::Op::add: {
            auto a = eval_with_gradient(n->lhs, x), b = eval_with_gradient(n->rhs, x);
            for (std::size_t i = 0; i < dim; ++i) a.grad[i] += b.grad[i];
            return {a.value + b.value, std::move(a.grad)};
        }
        case Node::Op::sub: {
            auto a = eval_with_gradient(n->lhs, x), b = eval_with_gradient(n->rhs, x);
            for (std::size_t i = 0; i < dim; ++i) a.grad[i] -= b.grad[i];
            return {a.value - b.value, std::move(a.grad)};
        }
        case Node::Op::mul: {
            auto a = eval_with_gradient(n->lhs, x), b = eval_with_gradient(n->rhs, x);
            Vec g(dim);
            for (std::size_t i = 0; i < dim; ++i) g[i] = a.value * b.grad[i] + b.value * a.grad[i];
            return {a.value * b.value, std::move(g)};
        }
        case Node::Op::pow: {
            auto a = eval_with_gradient(n->lhs, x);
            double e = to_double(n->exponent);
            if (n->exponent.denominator() != 1 && a.value < 0)
                throw Error(ErrorKind::numeric,
                            "radius expression: fractional power of a negative value");
            double v = std::pow(a.value, e);
            double slope = (a.value == 0.0) ? 0.0 : e * std::pow(a.value, e - 1.0);
            Vec g(dim);
            for (std::size_t i = 0; i < dim; ++i) g[i] = slope * a.grad[i];
            return {v, std::move(g)};
        }
    }
    return {0.0, Vec(dim, 0.0)};
}

// Grammar mirrors the polynomial parser plus the names `norm` / `maxnorm`
// and rational exponents written as ^(p/q).
class Parser {
public:
    Parser(const std::string& src, const std::vector<std::string>& variables)
        : lex_(src), vars_(variables) {}

    NodePtr parse() {
        NodePtr n = expression();
        if (lex_.peek().kind != detail::Token::Kind::end)
            throw ParseError("unexpected token '" + lex_.peek().text + "'", lex_.peek().pos);
        return n;
    }

private:
    using Token = detail::Token;

    NodePtr expression() {
        bool negate = false;
        while (lex_.peek().kind == Token::Kind::plus || lex_.peek().kind == Token::Kind::minus)
            if (lex_.take().kind == Token::Kind::minus) negate = !negate;
        NodePtr acc = term();
        if (negate) acc = make_binary(Node::Op::sub, make_constant(Rational(0)), acc);
        while (lex_.peek().kind == Token::Kind::plus || lex_.peek().kind == Token::Kind::minus) {
            bool minus = lex_.take().kind == Token::Kind::minus;
            acc = make_binary(minus ? Node::Op::sub : Node::Op::add, acc, term());
        }
        return acc;
    }

    NodePtr term() {
        NodePtr acc = factor();
        while (lex_.peek().kind == Token::Kind::star || lex_.peek().kind == Token::Kind::slash) {
            Token op = lex_.take();
            NodePtr f = factor();
            if (op.kind == Token::Kind::star) {
                acc = make_binary(Node::Op::mul, acc, f);
            } else {
                if (f->op != Node::Op::constant || f->value.numerator() == 0)
                    throw ParseError("division only by a nonzero constant", op.pos);
                acc = make_binary(Node::Op::mul, acc, make_constant(Rational(1) / f->value));
            }
        }
        return acc;
    }

    NodePtr factor() {
        NodePtr base = atom();
        if (lex_.peek().kind == Token::Kind::caret) {
            Token caret = lex_.take();
            Rational e = exponent(caret.pos);
            base = make_pow(base, e);
        }
        return base;
    }

    Rational exponent(std::size_t caret_pos) {
        Token t = lex_.peek();
        if (t.kind == Token::Kind::number) {
            lex_.take();
            if (t.text.find('.') != std::string::npos)
                throw ParseError("write fractional exponents as ^(p/q)", t.pos);
            return Rational(std::stoll(t.text));
        }
        if (t.kind == Token::Kind::lparen) {
            lex_.take();
            Token num = lex_.take();
            if (num.kind != Token::Kind::number || num.text.find('.') != std::string::npos)
                throw ParseError("integer numerator expected in exponent", num.pos);
            if (lex_.peek().kind != Token::Kind::slash)
                throw ParseError("'/' expected in rational exponent", lex_.peek().pos);
            lex_.take();
            Token den = lex_.take();
            if (den.kind != Token::Kind::number || den.text.find('.') != std::string::npos)
                throw ParseError("integer denominator expected in exponent", den.pos);
            if (lex_.peek().kind != Token::Kind::rparen)
                throw ParseError("')' expected after rational exponent", lex_.peek().pos);
            lex_.take();
            long long p = std::stoll(num.text), q = std::stoll(den.text);
            if (q == 0) throw ParseError("zero denominator in exponent", den.pos);
            return Rational(p, q);
        }
        throw ParseError("exponent expected after '^'", caret_pos);
    }

    NodePtr atom() {
        Token t = lex_.peek();
        switch (t.kind) {
            case Token::Kind::number:
                lex_.take();
                return make_constant(detail::rational_from_number(t.text, t.pos));
            case Token::Kind::ident: {
                lex_.take();
                if (t.text == "norm") return make_norm(Node::Op::norm2);
                if (t.text == "maxnorm") return make_norm(Node::Op::norm_inf);
                for (std::size_t v = 0; v < vars_.size(); ++v)
                    if (vars_[v] == t.text) return make_coordinate(v);
                throw ParseError("unknown name '" + t.text + "'", t.pos);
            }
            case Token::Kind::lparen: {
                lex_.take();
                NodePtr inner = expression();
                if (lex_.peek().kind != Token::Kind::rparen)
                    throw ParseError("')' expected", lex_.peek().pos);
                lex_.take();
                return inner;
            }
            case Token::Kind::minus:
                lex_.take();
                return make_binary(Node::Op::sub, make_constant(Rational(0)), atom());
            default:
                throw ParseError("operand expected", t.pos);
        }
    }

    detail::Lexer lex_;
    std::vector<std::string> vars_;
};

}  // namespace radius_expr

// Evaluable radius function. The equivalence rho(x) ~ ||x|| is never assumed:
// it is checked on sampled points and the constants are recorded.
class RadiusFunction {
public:
    static RadiusFunction euclidean() { return RadiusFunction(RadiusKind::euclidean); }
    static RadiusFunction maxnorm() { return RadiusFunction(RadiusKind::maxnorm); }

    static RadiusFunction coordinate(std::size_t index) {
        RadiusFunction r(RadiusKind::coordinate);
        r.index_ = index;
        return r;
    }

    static RadiusFunction composite(const std::string& expr_text,
                                    const std::vector<std::string>& variables,
                                    bool declared_lipschitz = true) {
        RadiusFunction r(RadiusKind::composite);
        r.expr_text_ = expr_text;
        r.expr_ = radius_expr::Parser(expr_text, variables).parse();
        r.declared_lipschitz_ = declared_lipschitz;
        return r;
    }

    RadiusKind kind() const { return kind_; }
    std::size_t coordinate_index() const { return index_; }
    const std::string& expression_text() const { return expr_text_; }
    const radius_expr::NodePtr& expression() const { return expr_; }
    bool declared_lipschitz() const { return declared_lipschitz_; }

    double eval(const Vec& x) const {
        switch (kind_) {
            case RadiusKind::euclidean: return norm2(x);
            case RadiusKind::maxnorm: return norm_inf(x);
            case RadiusKind::coordinate:
                if (index_ >= x.size())
                    throw Error(ErrorKind::input, "eval_radius: coordinate index out of range");
                return x[index_];
            case RadiusKind::composite: return radius_expr::eval(expr_, x);
        }
        return 0.0;
    }

    Vec gradient(const Vec& x) const {
        switch (kind_) {
            case RadiusKind::euclidean: {
                double r = norm2(x);
                Vec g(x.size(), 0.0);
                if (r > 0)
                    for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] / r;
                return g;
            }
            case RadiusKind::maxnorm:
            case RadiusKind::composite: {
                auto vg = radius_expr::eval_with_gradient(as_expr(), x);
                return vg.grad;
            }
            case RadiusKind::coordinate: {
                Vec g(x.size(), 0.0);
                g.at(index_) = 1.0;
                return g;
            }
        }
        return Vec(x.size(), 0.0);
    }

    std::string describe() const {
        switch (kind_) {
            case RadiusKind::euclidean: return "euclidean";
            case RadiusKind::maxnorm: return "maxnorm";
            case RadiusKind::coordinate: return "coordinate(" + std::to_string(index_) + ")";
            case RadiusKind::composite: return "composite(" + expr_text_ + ")";
        }
        return "?";
    }

private:
    explicit RadiusFunction(RadiusKind kind) : kind_(kind) {}

    radius_expr::NodePtr as_expr() const {
        if (kind_ == RadiusKind::composite) return expr_;
        if (kind_ == RadiusKind::maxnorm) return radius_expr::make_norm(radius_expr::Node::Op::norm_inf);
        return radius_expr::make_norm(radius_expr::Node::Op::norm2);
    }

    RadiusKind kind_;
    std::size_t index_ = 0;
    std::string expr_text_;
    radius_expr::NodePtr expr_;
    bool declared_lipschitz_ = true;
};

// Equivalence witness: c1*||x|| <= rho(x) <= c2*||x|| over the given points.
struct RadiusWitness {
    double c1 = kInf;
    double c2 = 0.0;
    std::size_t checked = 0;
    std::size_t violations = 0;  // rho <= 0 away from the origin
    bool valid() const { return checked > 0 && violations == 0 && c1 > 0; }
};

inline RadiusWitness check_radius_on_points(const RadiusFunction& rho, const std::vector<Vec>& points) {
    RadiusWitness w;
    for (const auto& x : points) {
        double n = norm2(x);
        if (n <= 0) continue;
        double value = rho.eval(x);
        ++w.checked;
        if (!(value > 0)) {
            ++w.violations;
            continue;
        }
        w.c1 = std::min(w.c1, value / n);
        w.c2 = std::max(w.c2, value / n);
    }
    return w;
}

// Slides x along its radial ray to the level rho = target: solves
// rho(sigma*x) = target by bracketing + bisection over sigma in [1/6, 6].
// Radius functions are strictly increasing along rays near 0; that is checked
// per ray here, not assumed. Empty result = bracketing failed on this ray.
inline std::optional<Vec> radial_slide_to_level(const RadiusFunction& rho, const Vec& x, double target) {
    if (!(target > 0)) return std::nullopt;
    if (norm2(x) <= 0) return std::nullopt;
    auto value_at = [&](double sigma) { return rho.eval(scaled(sigma, x)) - target; };

    const int scan_steps = 64;
    const double lo_bound = 1.0 / 6.0, hi_bound = 6.0;
    double prev_sigma = lo_bound;
    double prev_value;
    try {
        prev_value = value_at(prev_sigma);
    } catch (const Error&) {
        return std::nullopt;
    }
    double lo = 0.0, hi = 0.0;
    bool bracketed = false;
    if (prev_value == 0.0) return scaled(prev_sigma, x);
    for (int k = 1; k <= scan_steps && !bracketed; ++k) {
        double sigma = lo_bound * std::pow(hi_bound / lo_bound, static_cast<double>(k) / scan_steps);
        double value;
        try {
            value = value_at(sigma);
        } catch (const Error&) {
            return std::nullopt;
        }
        if (value == 0.0) return scaled(sigma, x);
        if ((prev_value < 0) != (value < 0)) {
            lo = prev_sigma;
            hi = sigma;
            bracketed = true;
        }
        prev_sigma = sigma;
        prev_value = value;
    }
    if (!bracketed) return std::nullopt;

    double flo = value_at(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = value_at(mid);
        if (fm == 0.0) return scaled(mid, x);
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return scaled(0.5 * (lo + hi), x);
}

// --- Radius document (JSON) ------------------------------------------------
//
// {"kind":"euclidean"} | {"kind":"maxnorm"}
// | {"kind":"coordinate","index":0}            (or "variable":"t")
// | {"kind":"composite","expr":"norm + norm^2","declared_lipschitz":true}

inline RadiusFunction radius_from_json(const nlohmann::json& doc,
                                       const std::vector<std::string>& variables) {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw Error(ErrorKind::input, "radius document: string 'kind' required");
    std::string kind = doc["kind"].get<std::string>();
    if (kind == "euclidean") return RadiusFunction::euclidean();
    if (kind == "maxnorm") return RadiusFunction::maxnorm();
    if (kind == "coordinate") {
        if (doc.contains("index")) {
            long long i = doc["index"].get<long long>();
            if (i < 0 || static_cast<std::size_t>(i) >= variables.size())
                throw Error(ErrorKind::input, "radius document: coordinate index out of range");
            return RadiusFunction::coordinate(static_cast<std::size_t>(i));
        }
        if (doc.contains("variable") && doc["variable"].is_string()) {
            std::string name = doc["variable"].get<std::string>();
            for (std::size_t v = 0; v < variables.size(); ++v)
                if (variables[v] == name) return RadiusFunction::coordinate(v);
            throw Error(ErrorKind::input, "radius document: unknown variable '" + name + "'");
        }
        throw Error(ErrorKind::input, "radius document: coordinate kind needs 'index' or 'variable'");
    }
    if (kind == "composite") {
        if (!doc.contains("expr") || !doc["expr"].is_string())
            throw Error(ErrorKind::input, "radius document: composite kind needs string 'expr'");
        bool lipschitz = true;
        if (doc.contains("declared_lipschitz")) lipschitz = doc["declared_lipschitz"].get<bool>();
        return RadiusFunction::composite(doc["expr"].get<std::string>(), variables, lipschitz);
    }
    throw Error(ErrorKind::input, "radius document: unknown kind '" + kind + "'");
}

inline nlohmann::json radius_to_json(const RadiusFunction& rho) {
    nlohmann::json doc;
    switch (rho.kind()) {
        case RadiusKind::euclidean: doc["kind"] = "euclidean"; break;
        case RadiusKind::maxnorm: doc["kind"] = "maxnorm"; break;
        case RadiusKind::coordinate:
            doc["kind"] = "coordinate";
            doc["index"] = rho.coordinate_index();
            break;
        case RadiusKind::composite:
            doc["kind"] = "composite";
            doc["expr"] = rho.expression_text();
            doc["declared_lipschitz"] = rho.declared_lipschitz();
            break;
    }
    return doc;
}

}  // namespace lnelab

#endif  // LNELAB_RADIUS_HPP
