#include "minigal/error.hpp"
#include "minigal/funcfield.hpp"

#include <cctype>
#include <ostream>

namespace minigal {

namespace {

class Parser {
public:
    Parser(std::uint32_t p, std::string const& text, bool allow_div) : p_(p), s_(text), allow_div_(allow_div) {}

    BivRat parse()
    {
        BivRat r = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(std::string const& what) const { throw parse_error(what, 1, pos_ + 1); }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::uint64_t number()
    {
        skip();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a number");
        std::uint64_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + static_cast<std::uint64_t>(s_[pos_++] - '0');
            if (v > (std::uint64_t{1} << 40)) fail("number too large");
        }
        return v;
    }

    BivRat expr()
    {
        BivRat acc = term();
        for (;;) {
            if (eat('+'))
                acc = acc + term();
            else if (eat('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    BivRat term()
    {
        BivRat acc = unary();
        for (;;) {
            if (eat('*')) {
                acc = acc * unary();
            } else if (eat('/')) {
                if (!allow_div_) fail("division is not allowed in a polynomial");
                std::size_t const at = pos_;
                BivRat d = unary();
                if (d.is_zero()) {
                    pos_ = at;
                    fail("division by zero");
                }
                acc = acc / d;
            } else {
                return acc;
            }
        }
    }

    BivRat unary()
    {
        if (eat('-')) return BivRat(BivPoly(p_, 0)) - unary();
        return power();
    }

    BivRat power()
    {
        BivRat base = atom();
        if (eat('^')) {
            auto const k = number();
            if (k > 10000) fail("exponent too large");
            base = base.pow(static_cast<std::int64_t>(k));
        }
        return base;
    }

    BivRat atom()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char const c = s_[pos_];
        if (c == '(') {
            ++pos_;
            BivRat r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            auto const v = number();
            return BivRat(BivPoly(p_, static_cast<std::int64_t>(v % p_)));
        }
        if (c == 't' || c == 'u') {
            ++pos_;
            return BivRat(c == 't' ? BivPoly::t(p_) : BivPoly::u(p_));
        }
        if (c == 'g') {
            ++pos_;
            auto const e = number();
            if (e == 0 || e > 64) fail("field degree out of range");
            return BivRat(BivPoly::constant(GFElem::generator(p_, static_cast<std::uint32_t>(e))));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::uint32_t p_;
    std::string const& s_;
    bool allow_div_;
    std::size_t pos_ = 0;
};

std::string coeff_string(GFElem const& c)
{
    std::string s = to_string(c);
    if (s.find('+') != std::string::npos) return "(" + s + ")";
    return s;
}

}  // namespace

GFElem parse_constant(std::uint32_t p, std::string const& text)
{
    BivPoly f = parse_poly(p, text);
    if (!f.is_constant()) throw parse_error("expected a constant", 1, 1);
    return f.coeff(0, 0);
}

BivPoly parse_poly(std::uint32_t p, std::string const& text)
{
    BivRat r = Parser(p, text, false).parse();
    return r.num();
}

BivRat parse_rat(std::uint32_t p, std::string const& text)
{
    return Parser(p, text, true).parse();
}

std::string to_string(BivPoly const& f)
{
    if (f.is_zero()) return "0";
    std::string out;
    for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
        auto const [j, i] = it->first;
        GFElem const& c = it->second;
        if (!out.empty()) out += " + ";
        std::string mono;
        if (i) mono += i == 1 ? "t" : "t^" + std::to_string(i);
        if (j) {
            if (!mono.empty()) mono += "*";
            mono += j == 1 ? "u" : "u^" + std::to_string(j);
        }
        if (mono.empty())
            out += coeff_string(c);
        else if (c.is_one())
            out += mono;
        else
            out += coeff_string(c) + "*" + mono;
    }
    return out;
}

std::string to_string(BivRat const& x)
{
    if (x.den().is_constant() && x.den().coeff(0, 0).is_one()) return to_string(x.num());
    return "(" + to_string(x.num()) + ")/(" + to_string(x.den()) + ")";
}

std::string to_string(UniPoly const& f, char var)
{
    std::string out;
    for (std::size_t i = f.size(); i-- > 0;) {
        if (f[i].is_zero()) continue;
        if (!out.empty()) out += " + ";
        std::string mono = i == 0 ? "" : i == 1 ? std::string(1, var) : std::string(1, var) + "^" + std::to_string(i);
        if (mono.empty())
            out += coeff_string(f[i]);
        else if (f[i].is_one())
            out += mono;
        else
            out += coeff_string(f[i]) + "*" + mono;
    }
    return out.empty() ? "0" : out;
}

std::string to_string(UniRat const& x, char var)
{
    return "(" + to_string(x.num, var) + ")/(" + to_string(x.den, var) + ")";
}

std::ostream& operator<<(std::ostream& os, BivPoly const& f)
{
    return os << to_string(f);
}

std::ostream& operator<<(std::ostream& os, BivRat const& x)
{
    return os << to_string(x);
}

}  // namespace minigal
