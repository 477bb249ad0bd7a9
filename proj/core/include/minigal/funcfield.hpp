#pragma once

// Rational function fields F̄_p(t) and F̄_p(t, u): sparse polynomials, fractions
// that are not gcd-reduced, orders of vanishing along curves, restriction to
// lines, and the deterministic stream of test elements used by the searches.

#include "minigal/gf.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace minigal {

/// K = F̄_p(t) for d = 1 and F̄_p(t, u) for d = 2.
struct FieldSpec {
    std::uint32_t p = 5;
    std::uint32_t d = 2;

    bool operator==(FieldSpec const&) const = default;
};

/// Sparse polynomial in t, u. Monomials are keyed (u-exponent, t-exponent),
/// so the map order is lex with u > t and the last entry is the leading term.
class BivPoly {
public:
    using Key = std::pair<std::uint32_t, std::uint32_t>;  // (j, i) for t^i u^j

    explicit BivPoly(std::uint32_t p) : p_(p) {}
    BivPoly(std::uint32_t p, std::int64_t c);
    static BivPoly constant(GFElem const& c);
    static BivPoly monomial(GFElem const& c, std::uint32_t i, std::uint32_t j);
    static BivPoly t(std::uint32_t p) { return monomial(GFElem(p, 1), 1, 0); }
    static BivPoly u(std::uint32_t p) { return monomial(GFElem(p, 1), 0, 1); }

    std::uint32_t p() const { return p_; }
    std::map<Key, GFElem> const& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    GFElem coeff(std::uint32_t i, std::uint32_t j) const;
    GFElem leading_coeff() const;
    std::uint32_t total_degree() const;
    std::uint32_t degree_t() const;
    std::uint32_t degree_u() const;

    BivPoly operator+(BivPoly const& o) const;
    BivPoly operator-(BivPoly const& o) const;
    BivPoly operator*(BivPoly const& o) const;
    BivPoly operator-() const;
    BivPoly scaled(GFElem const& c) const;
    BivPoly pow(std::uint32_t k) const;

    // Quotient if d divides *this exactly, nullopt otherwise.
    std::optional<BivPoly> divide_exact(BivPoly const& d) const;

    bool operator==(BivPoly const& o) const { return p_ == o.p_ && terms_ == o.terms_; }
    std::strong_ordering operator<=>(BivPoly const& o) const;

private:
    void add_term(Key k, GFElem const& c);

    std::uint32_t p_;
    std::map<Key, GFElem> terms_;
};

/// num/den with den != 0. Only common monomial factors are cancelled; den is
/// kept with leading coefficient 1.
class BivRat {
public:
    explicit BivRat(BivPoly num);
    BivRat(BivPoly num, BivPoly den);

    BivPoly const& num() const { return num_; }
    BivPoly const& den() const { return den_; }
    std::uint32_t p() const { return num_.p(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == den_; }

    BivRat operator+(BivRat const& o) const;
    BivRat operator-(BivRat const& o) const;
    BivRat operator*(BivRat const& o) const;
    BivRat operator/(BivRat const& o) const;
    BivRat inverse() const;
    BivRat one_minus() const;
    BivRat pow(std::int64_t k) const;

    // Equality as field elements.
    bool equals(BivRat const& o) const;

private:
    void normalize();

    BivPoly num_;
    BivPoly den_;
};

enum class RatOp { add, mul, inv, one_minus };
BivRat rat_arith(RatOp op, BivRat const& x, BivRat const* y = nullptr);

/// Univariate polynomial, coefficients low to high, no trailing zeros.
using UniPoly = std::vector<GFElem>;

struct UniRat {
    UniPoly num;
    UniPoly den;
};

// Multiplicity of c as a root (0 if not a root). f must be nonzero.
std::uint32_t root_multiplicity(UniPoly const& f, GFElem const& c);
// Order of vanishing of x at the point parameter = c.
std::int64_t order_at(UniRat const& x, GFElem const& c);
// Value of a univariate rational function with no zero or pole at c.
GFElem evaluate_at(UniRat const& x, GFElem const& c);

/// A line alpha t + beta u + gamma = 0 and its parametrization. With
/// beta != 0 the line is u = slope t + intercept with parameter t; otherwise
/// it is t = intercept and the parameter is u.
struct Line {
    bool vertical = false;  // t = intercept
    GFElem slope;
    GFElem intercept;
};

std::optional<Line> as_line(BivPoly const& f);

// Whether f is absolutely irreducible, when that can be decided here (total
// degree <= 2, and for degree 2 odd characteristic).
std::optional<bool> absolutely_irreducible(BivPoly const& f);

/// A registered prime divisor. Curves of higher degree (or degree 2 in
/// characteristic 2) are accepted only with `asserted` set.
struct Curve {
    BivPoly poly;
    std::optional<Line> line;
    bool asserted = false;

    static Curve make(BivPoly poly, bool assert_irreducible = false, std::uint32_t d = 2);
};

// Order of vanishing of x along {f = 0}.
std::int64_t curve_order(BivPoly const& f, BivRat const& x);

// x with every factor f removed from numerator and denominator; the removed
// exponents give curve_order.
BivRat strip_curve(BivPoly const& f, BivRat const& x, std::int64_t* order = nullptr);

// Substitute a line parametrization into a polynomial.
UniPoly restrict_poly(BivPoly const& f, Line const& line);
// Restriction of an order-zero element to the line; throws otherwise.
UniRat restrict_to_curve(BivRat const& x, BivPoly const& line_poly);

/// Search budget shared by every bounded search.
struct Budget {
    std::vector<BivPoly> pool;
    std::uint32_t max_factors = 2;
    std::int32_t max_exponent = 2;
    std::uint32_t max_constants = 200;

    // t, u, t-1, u-1, t-u (only t, t-1 for d = 1) followed by extra curves not
    // already present up to a constant factor.
    static Budget standard(FieldSpec const& field, std::vector<BivPoly> const& extra = {});
};

// Constants used as outer multipliers: 1, 2, ..., p-1, then the new elements
// of F_{p^2}, F_{p^3}, ... in GFElem order, `count` in total.
std::vector<GFElem> test_constants(std::uint32_t p, std::uint32_t count);

/// The finite, deterministic stream c * prod f_i^{e_i}. Order: constant
/// (outermost), then total |e| ascending, then the index tuple of the factors
/// lexicographically, then exponents with each e_i in the order 1, -1, 2, -2, ...
/// Never yields 0 or 1.
class ElementStream {
public:
    explicit ElementStream(Budget budget);

    std::optional<BivRat> next();
    std::size_t position() const { return position_; }

private:
    struct Shape {
        std::vector<std::uint32_t> factors;
        std::vector<std::int32_t> exponents;
    };
    void build_shapes();

    Budget budget_;
    std::vector<GFElem> constants_;
    std::vector<Shape> shapes_;
    std::vector<BivRat> shape_values_;
    std::size_t constant_index_ = 0;
    std::size_t shape_index_ = 0;
    std::size_t position_ = 0;
};

std::vector<BivRat> enum_test_elements(Budget const& budget);

// Polynomial text: sums and products of t, u, integers and field generators
// g<e>, with ^ for nonnegative powers and parentheses; '/' is accepted by
// parse_rat only. Canonical output lists monomials leading term first.
GFElem parse_constant(std::uint32_t p, std::string const& text);
BivPoly parse_poly(std::uint32_t p, std::string const& text);
BivRat parse_rat(std::uint32_t p, std::string const& text);

std::string to_string(BivPoly const& f);
std::string to_string(BivRat const& x);
std::string to_string(UniPoly const& f, char var = 't');
std::string to_string(UniRat const& x, char var = 't');
std::ostream& operator<<(std::ostream& os, BivPoly const& f);
std::ostream& operator<<(std::ostream& os, BivRat const& x);

}  // namespace minigal
