#ifndef LNELAB_POLYNOMIAL_HPP
#define LNELAB_POLYNOMIAL_HPP

#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "lnelab/common.hpp"

namespace lnelab {

using Rational = boost::rational<long long>;

inline double to_double(const Rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

// Exponent vector of one monomial; length equals the ambient dimension.
using Exponents = std::vector<unsigned>;

// Sparse multivariate polynomial with exact rational coefficients. Terms are
// kept in an ordered map so printing and evaluation have a fixed term order.
class Polynomial {
public:
    using TermMap = std::map<Exponents, Rational>;

    explicit Polynomial(std::size_t ambient_dim) : dim_(ambient_dim) {
        if (ambient_dim == 0) throw Error(ErrorKind::input, "Polynomial: ambient_dim must be positive");
    }

    static Polynomial constant(std::size_t dim, const Rational& c) {
        Polynomial p(dim);
        if (c.numerator() != 0) p.terms_[Exponents(dim, 0)] = c;
        return p;
    }

    static Polynomial variable(std::size_t dim, std::size_t index) {
        Polynomial p(dim);
        Exponents e(dim, 0);
        e.at(index) = 1;
        p.terms_[e] = 1;
        return p;
    }

    std::size_t ambient_dim() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents(dim_, 0));
    }

    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        return terms_.begin()->second;
    }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_)
            d = std::max(d, std::accumulate(e.begin(), e.end(), 0u));
        return d;
    }

    void add_term(const Exponents& e, const Rational& c) {
        if (e.size() != dim_) throw Error(ErrorKind::input, "Polynomial: exponent vector length mismatch");
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (c.numerator() != 0) terms_[e] = c;
        } else {
            it->second += c;
            if (it->second.numerator() == 0) terms_.erase(it);
        }
    }

    Polynomial operator-() const {
        Polynomial r(dim_);
        for (const auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }

    Polynomial operator+(const Polynomial& o) const {
        Polynomial r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }

    Polynomial operator-(const Polynomial& o) const { return *this + (-o); }

    Polynomial operator*(const Polynomial& o) const {
        Polynomial r(dim_);
        for (const auto& [ea, ca] : terms_) {
            for (const auto& [eb, cb] : o.terms_) {
                Exponents e(dim_);
                for (std::size_t i = 0; i < dim_; ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    Polynomial pow(unsigned k) const {
        Polynomial r = constant(dim_, 1);
        Polynomial base = *this;
        while (k > 0) {
            if (k & 1u) r = r * base;
            base = base * base;
            k >>= 1u;
        }
        return r;
    }

    bool operator==(const Polynomial& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

    // Term-by-term evaluation in map order; powers by iterated squaring so the
    // result is deterministic for a fixed term ordering.
    double eval(const Vec& x) const {
        check_dim(x, dim_, "eval_poly");
        double sum = 0.0;
        for (const auto& [e, c] : terms_) sum += to_double(c) * monomial_value(e, x);
        return sum;
    }

    // Magnitude of the largest single term at x; the relative-tolerance scale
    // is 1 + this, so mixed-scale inputs share one tolerance knob.
    double term_scale(const Vec& x) const {
        check_dim(x, dim_, "term_scale");
        double m = 0.0;
        for (const auto& [e, c] : terms_)
            m = std::max(m, std::abs(to_double(c) * monomial_value(e, x)));
        return 1.0 + m;
    }

    Polynomial partial_derivative(std::size_t var) const {
        Polynomial r(dim_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exponents d = e;
            d[var] -= 1;
            r.add_term(d, c * Rational(static_cast<long long>(e[var])));
        }
        return r;
    }

    Vec gradient(const Vec& x) const {
        check_dim(x, dim_, "gradient_poly");
        Vec g(dim_, 0.0);
        for (const auto& [e, c] : terms_) {
            double coeff = to_double(c);
            for (std::size_t v = 0; v < dim_; ++v) {
                if (e[v] == 0) continue;
                Exponents d = e;
                d[v] -= 1;
                g[v] += coeff * static_cast<double>(e[v]) * monomial_value(d, x);
            }
        }
        return g;
    }

    std::string to_string(const std::vector<std::string>& variables) const {
        if (variables.size() != dim_)
            throw Error(ErrorKind::input, "to_string: variable list length mismatch");
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rational a = c;
            if (first) {
                if (a.numerator() < 0) {
                    out << "-";
                    a = -a;
                }
            } else {
                out << (a.numerator() < 0 ? " - " : " + ");
                if (a.numerator() < 0) a = -a;
            }
            first = false;
            bool has_vars = std::any_of(e.begin(), e.end(), [](unsigned k) { return k > 0; });
            bool coeff_shown = !has_vars || a != Rational(1);
            if (coeff_shown) {
                out << a.numerator();
                if (a.denominator() != 1) out << "/" << a.denominator();
            }
            bool first_var = true;
            for (std::size_t v = 0; v < dim_; ++v) {
                if (e[v] == 0) continue;
                if (coeff_shown || !first_var) out << "*";
                first_var = false;
                out << variables[v];
                if (e[v] > 1) out << "^" << e[v];
            }
        }
        return out.str();
    }

private:
    static double monomial_value(const Exponents& e, const Vec& x) {
        double m = 1.0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            unsigned k = e[i];
            double base = x[i];
            while (k > 0) {
                if (k & 1u) m *= base;
                base *= base;
                k >>= 1u;
            }
        }
        return m;
    }

    std::size_t dim_;
    TermMap terms_;
};

// Exact rational value of a finite double (mantissa over a power of two),
// with denominator capped at 2^62; values needing more precision are rounded.
inline Rational rational_from_double(double v) {
    if (v == 0.0) return Rational(0);
    if (!std::isfinite(v)) throw Error(ErrorKind::input, "rational_from_double: non-finite value");
    int exp = 0;
    double frac = std::frexp(v, &exp);
    long long mant = static_cast<long long>(std::ldexp(frac, 53));
    exp -= 53;
    while (mant != 0 && (mant & 1) == 0) {
        mant >>= 1;
        ++exp;
    }
    if (exp >= 0) {
        if (exp > 10) throw Error(ErrorKind::input, "rational_from_double: value too large");
        return Rational(mant << exp);
    }
    int shift = -exp;
    if (shift > 62) {
        mant >>= (shift - 62);
        shift = 62;
        if (mant == 0) return Rational(0);
    }
    return Rational(mant, 1ll << shift);
}

namespace detail {

// Shared lexer for polynomial and radius expressions.
struct Token {
    enum class Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };
    Kind kind = Kind::end;
    std::string text;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        current_.pos = i_;
        if (i_ >= src_.size()) {
            current_.kind = Token::Kind::end;
            current_.text.clear();
            return;
        }
        char c = src_[i_];
        switch (c) {
            case '+': current_ = {Token::Kind::plus, "+", i_++}; return;
            case '-': current_ = {Token::Kind::minus, "-", i_++}; return;
            case '*': current_ = {Token::Kind::star, "*", i_++}; return;
            case '/': current_ = {Token::Kind::slash, "/", i_++}; return;
            case '^': current_ = {Token::Kind::caret, "^", i_++}; return;
            case '(': current_ = {Token::Kind::lparen, "(", i_++}; return;
            case ')': current_ = {Token::Kind::rparen, ")", i_++}; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
            if (i_ < src_.size() && src_[i_] == '.') {
                ++i_;
                if (i_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[i_])))
                    throw ParseError("digit expected after decimal point", i_);
                while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
            }
            current_ = {Token::Kind::number, src_.substr(start, i_ - start), start};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
                ++i_;
            current_ = {Token::Kind::ident, src_.substr(start, i_ - start), start};
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", i_);
    }

    std::string src_;
    std::size_t i_ = 0;
    Token current_;
};

// Decimal literals become exact rationals (digits over a power of ten).
inline Rational rational_from_number(const std::string& text, std::size_t pos) {
    auto dot = text.find('.');
    try {
        if (dot == std::string::npos) return Rational(std::stoll(text));
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        long long den = 1;
        for (std::size_t k = dot + 1; k < text.size(); ++k) den *= 10;
        return Rational(std::stoll(digits), den);
    } catch (const std::exception&) {
        throw ParseError("numeric literal out of range: " + text, pos);
    }
}

class PolynomialParser {
public:
    PolynomialParser(const std::string& src, const std::vector<std::string>& variables)
        : lex_(src), vars_(variables) {}

    Polynomial parse() {
        Polynomial p = expression();
        if (lex_.peek().kind != Token::Kind::end)
            throw ParseError("unexpected token '" + lex_.peek().text + "'", lex_.peek().pos);
        return p;
    }

private:
    std::size_t dim() const { return vars_.size(); }

    Polynomial expression() {
        bool negate = false;
        while (lex_.peek().kind == Token::Kind::plus || lex_.peek().kind == Token::Kind::minus) {
            if (lex_.take().kind == Token::Kind::minus) negate = !negate;
        }
        Polynomial acc = term();
        if (negate) acc = -acc;
        while (lex_.peek().kind == Token::Kind::plus || lex_.peek().kind == Token::Kind::minus) {
            bool minus = lex_.take().kind == Token::Kind::minus;
            Polynomial t = term();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (lex_.peek().kind == Token::Kind::star || lex_.peek().kind == Token::Kind::slash) {
            Token op = lex_.take();
            Polynomial f = factor();
            if (op.kind == Token::Kind::star) {
                acc = acc * f;
            } else {
                if (!f.is_constant() || f.is_zero())
                    throw ParseError("division only by a nonzero constant", op.pos);
                acc = acc * Polynomial::constant(dim(), Rational(1) / f.constant_value());
            }
        }
        return acc;
    }

    Polynomial factor() {
        Polynomial base = atom();
        if (lex_.peek().kind == Token::Kind::caret) {
            Token caret = lex_.take();
            bool neg = false;
            while (lex_.peek().kind == Token::Kind::minus) {
                lex_.take();
                neg = true;
            }
            Token t = lex_.peek();
            if (t.kind != Token::Kind::number)
                throw ParseError("integer exponent expected after '^'", caret.pos);
            if (t.text.find('.') != std::string::npos)
                throw ParseError("fractional exponent not allowed in a polynomial", t.pos);
            if (neg) throw ParseError("negative exponent not allowed in a polynomial", t.pos);
            lex_.take();
            unsigned long k = std::stoul(t.text);
            if (k > 64) throw ParseError("exponent too large", t.pos);
            base = base.pow(static_cast<unsigned>(k));
        }
        return base;
    }

    Polynomial atom() {
        Token t = lex_.peek();
        switch (t.kind) {
            case Token::Kind::number:
                lex_.take();
                return Polynomial::constant(dim(), rational_from_number(t.text, t.pos));
            case Token::Kind::ident: {
                lex_.take();
                for (std::size_t v = 0; v < vars_.size(); ++v)
                    if (vars_[v] == t.text) return Polynomial::variable(dim(), v);
                throw ParseError("unknown variable '" + t.text + "'", t.pos);
            }
            case Token::Kind::lparen: {
                lex_.take();
                Polynomial inner = expression();
                if (lex_.peek().kind != Token::Kind::rparen)
                    throw ParseError("')' expected", lex_.peek().pos);
                lex_.take();
                return inner;
            }
            case Token::Kind::minus: {
                lex_.take();
                return -atom();
            }
            default:
                throw ParseError("operand expected", t.pos);
        }
    }

    Lexer lex_;
    std::vector<std::string> vars_;
};

}  // namespace detail

inline Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& variables) {
    if (variables.empty()) throw Error(ErrorKind::input, "parse_polynomial: no variables declared");
    return detail::PolynomialParser(text, variables).parse();
}

}  // namespace lnelab

#endif  // LNELAB_POLYNOMIAL_HPP
