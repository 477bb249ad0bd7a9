#include "minigal/funcfield.hpp"

#include "minigal/error.hpp"

#include <algorithm>
#include <ostream>

namespace minigal {

// ---------------------------------------------------------------- BivPoly

BivPoly::BivPoly(std::uint32_t p, std::int64_t c) : p_(p)
{
    add_term({0, 0}, GFElem(p, c));
}

BivPoly BivPoly::constant(GFElem const& c)
{
    BivPoly f(c.p());
    f.add_term({0, 0}, c);
    return f;
}

BivPoly BivPoly::monomial(GFElem const& c, std::uint32_t i, std::uint32_t j)
{
    BivPoly f(c.p());
    f.add_term({j, i}, c);
    return f;
}

void BivPoly::add_term(Key k, GFElem const& c)
{
    if (c.p() != p_) throw level_mismatch("coefficient of characteristic " + std::to_string(c.p()) +
                                          " in a polynomial of characteristic " + std::to_string(p_));
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (inserted) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

bool BivPoly::is_constant() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
}

GFElem BivPoly::coeff(std::uint32_t i, std::uint32_t j) const
{
    auto it = terms_.find({j, i});
    return it == terms_.end() ? GFElem(p_, 0) : it->second;
}

GFElem BivPoly::leading_coeff() const
{
    if (terms_.empty()) throw precondition_error("zero polynomial has no leading coefficient");
    return terms_.rbegin()->second;
}

std::uint32_t BivPoly::total_degree() const
{
    std::uint32_t d = 0;
    for (auto const& [k, c] : terms_) d = std::max(d, k.first + k.second);
    return d;
}

std::uint32_t BivPoly::degree_t() const
{
    std::uint32_t d = 0;
    for (auto const& [k, c] : terms_) d = std::max(d, k.second);
    return d;
}

std::uint32_t BivPoly::degree_u() const
{
    return terms_.empty() ? 0 : terms_.rbegin()->first.first;
}

BivPoly BivPoly::operator+(BivPoly const& o) const
{
    BivPoly r = *this;
    for (auto const& [k, c] : o.terms_) r.add_term(k, c);
    return r;
}

BivPoly BivPoly::operator-(BivPoly const& o) const
{
    BivPoly r = *this;
    for (auto const& [k, c] : o.terms_) r.add_term(k, -c);
    return r;
}

BivPoly BivPoly::operator*(BivPoly const& o) const
{
    if (p_ != o.p_) throw level_mismatch("polynomials of different characteristic");
    BivPoly r(p_);
    for (auto const& [k1, c1] : terms_)
        for (auto const& [k2, c2] : o.terms_) r.add_term({k1.first + k2.first, k1.second + k2.second}, c1 * c2);
    return r;
}

BivPoly BivPoly::operator-() const
{
    BivPoly r(p_);
    for (auto const& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
}

BivPoly BivPoly::scaled(GFElem const& c) const
{
    BivPoly r(p_);
    for (auto const& [k, v] : terms_) r.add_term(k, v * c);
    return r;
}

BivPoly BivPoly::pow(std::uint32_t k) const
{
    BivPoly result(p_, 1), base = *this;
    while (k) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

std::optional<BivPoly> BivPoly::divide_exact(BivPoly const& d) const
{
    if (d.is_zero()) throw division_by_zero("polynomial division by zero");
    BivPoly r = *this, q(p_);
    auto const [dk, dc] = *d.terms_.rbegin();
    GFElem const dinv = dc.inverse();
    while (!r.is_zero()) {
        auto const [rk, rc] = *r.terms_.rbegin();
        // in a monomial order the leading term of a multiple of d is divisible by LT(d)
        if (rk.first < dk.first || rk.second < dk.second) return std::nullopt;
        Key const mk{rk.first - dk.first, rk.second - dk.second};
        GFElem const mc = rc * dinv;
        q.add_term(mk, mc);
        for (auto const& [k, c] : d.terms_) r.add_term({k.first + mk.first, k.second + mk.second}, -(c * mc));
    }
    return q;
}

std::strong_ordering BivPoly::operator<=>(BivPoly const& o) const
{
    if (auto c = p_ <=> o.p_; c != 0) return c;
    // compare from the leading term down
    auto a = terms_.rbegin(), b = o.terms_.rbegin();
    for (; a != terms_.rend() && b != o.terms_.rend(); ++a, ++b) {
        if (auto c = a->first <=> b->first; c != 0) return c;
        if (auto c = a->second <=> b->second; c != 0) return c;
    }
    return (a == terms_.rend()) == (b == o.terms_.rend()) ? std::strong_ordering::equal
           : a == terms_.rend()                           ? std::strong_ordering::less
                                                          : std::strong_ordering::greater;
}

// ---------------------------------------------------------------- BivRat

BivRat::BivRat(BivPoly num) : num_(std::move(num)), den_(num_.p(), 1) {}

BivRat::BivRat(BivPoly num, BivPoly den) : num_(std::move(num)), den_(std::move(den))
{
    if (den_.is_zero()) throw division_by_zero("rational function with zero denominator");
    if (num_.p() != den_.p()) throw level_mismatch("numerator and denominator of different characteristic");
    normalize();
}

void BivRat::normalize()
{
    std::uint32_t const p = num_.p();
    if (num_.is_zero()) {
        den_ = BivPoly(p, 1);
        return;
    }
    std::uint32_t mt = UINT32_MAX, mu = UINT32_MAX;
    for (auto const* f : {&num_, &den_})
        for (auto const& [k, c] : f->terms()) {
            mu = std::min(mu, k.first);
            mt = std::min(mt, k.second);
        }
    if (mt || mu) {
        auto const m = BivPoly::monomial(GFElem(p, 1), mt, mu);
        num_ = *num_.divide_exact(m);
        den_ = *den_.divide_exact(m);
    }
    if (!den_.is_constant()) {
        if (auto q = num_.divide_exact(den_)) {
            num_ = std::move(*q);
            den_ = BivPoly(p, 1);
        }
    }
    GFElem const lc = den_.leading_coeff();
    if (!lc.is_one()) {
        GFElem const inv = lc.inverse();
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

BivRat BivRat::operator+(BivRat const& o) const
{
    if (den_ == o.den_) return BivRat(num_ + o.num_, den_);
    return BivRat(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

BivRat BivRat::operator-(BivRat const& o) const
{
    if (den_ == o.den_) return BivRat(num_ - o.num_, den_);
    return BivRat(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

BivRat BivRat::operator*(BivRat const& o) const
{
    return BivRat(num_ * o.num_, den_ * o.den_);
}

BivRat BivRat::operator/(BivRat const& o) const
{
    return *this * o.inverse();
}

BivRat BivRat::inverse() const
{
    if (is_zero()) throw division_by_zero("inverse of the zero function");
    return BivRat(den_, num_);
}

BivRat BivRat::one_minus() const
{
    return BivRat(den_ - num_, den_);
}

BivRat BivRat::pow(std::int64_t k) const
{
    if (k < 0) return inverse().pow(-k);
    return BivRat(num_.pow(static_cast<std::uint32_t>(k)), den_.pow(static_cast<std::uint32_t>(k)));
}

bool BivRat::equals(BivRat const& o) const
{
    return num_ * o.den_ == o.num_ * den_;
}

BivRat rat_arith(RatOp op, BivRat const& x, BivRat const* y)
{
    switch (op) {
    case RatOp::add:
        if (!y) throw precondition_error("add needs two operands");
        return x + *y;
    case RatOp::mul:
        if (!y) throw precondition_error("mul needs two operands");
        return x * *y;
    case RatOp::inv:
        return x.inverse();
    case RatOp::one_minus:
        return x.one_minus();
    }
    throw precondition_error("unknown operation");
}

// ---------------------------------------------------------------- univariate

namespace {

void trim(UniPoly& f)
{
    while (!f.empty() && f.back().is_zero()) f.pop_back();
}

// f(X) = (X - c) q(X) + f(c)
std::pair<UniPoly, GFElem> synthetic_division(UniPoly const& f, GFElem const& c)
{
    UniPoly q(f.size() > 1 ? f.size() - 1 : 0, GFElem(c.p(), 0));
    GFElem acc(c.p(), 0);
    for (std::size_t i = f.size(); i-- > 0;) {
        acc = acc * c + f[i];
        if (i > 0) q[i - 1] = acc;
    }
    return {q, acc};
}

GFElem horner(UniPoly const& f, GFElem const& c)
{
    GFElem acc(c.p(), 0);
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * c + f[i];
    return acc;
}

}  // namespace

std::uint32_t root_multiplicity(UniPoly const& f, GFElem const& c)
{
    UniPoly g = f;
    trim(g);
    if (g.empty()) throw precondition_error("multiplicity of a root of the zero polynomial");
    std::uint32_t m = 0;
    for (;;) {
        auto [q, r] = synthetic_division(g, c);
        if (!r.is_zero()) return m;
        ++m;
        g = std::move(q);
    }
}

std::int64_t order_at(UniRat const& x, GFElem const& c)
{
    return static_cast<std::int64_t>(root_multiplicity(x.num, c)) -
           static_cast<std::int64_t>(root_multiplicity(x.den, c));
}

GFElem evaluate_at(UniRat const& x, GFElem const& c)
{
    GFElem const d = horner(x.den, c);
    if (d.is_zero()) throw precondition_error("pole at " + to_string(c));
    return horner(x.num, c) / d;
}

// ---------------------------------------------------------------- curves

std::optional<Line> as_line(BivPoly const& f)
{
    if (f.total_degree() != 1) return std::nullopt;
    GFElem const alpha = f.coeff(1, 0), beta = f.coeff(0, 1), gamma = f.coeff(0, 0);
    if (!beta.is_zero()) return Line{false, -(alpha / beta), -(gamma / beta)};
    return Line{true, GFElem(f.p(), 0), -(gamma / alpha)};
}

std::optional<bool> absolutely_irreducible(BivPoly const& f)
{
    std::uint32_t const deg = f.total_degree();
    if (deg == 0) return false;
    if (deg == 1) return true;
    if (deg > 2 || f.p() == 2) return std::nullopt;
    // a plane conic is a pair of lines exactly when its symmetric matrix is singular
    GFElem const half = GFElem(f.p(), 2).inverse();
    GFElem const a = f.coeff(2, 0), b = f.coeff(1, 1) * half, c = f.coeff(0, 2);
    GFElem const d = f.coeff(1, 0) * half, e = f.coeff(0, 1) * half, g = f.coeff(0, 0);
    GFElem const det = a * (c * g - e * e) - b * (b * g - e * d) + d * (b * e - c * d);
    return !det.is_zero();
}

Curve Curve::make(BivPoly poly, bool assert_irreducible, std::uint32_t d)
{
    if (poly.is_constant()) throw precondition_error("a curve needs a non-constant polynomial");
    poly = poly.scaled(poly.leading_coeff().inverse());
    if (d == 1) {
        if (poly.degree_u() != 0 || poly.total_degree() != 1)
            throw precondition_error("prime divisors of F(t) are the points t - c, got " + to_string(poly));
    } else {
        auto const irr = absolutely_irreducible(poly);
        if (irr && !*irr) throw precondition_error(to_string(poly) + " is not absolutely irreducible");
        if (!irr && !assert_irreducible)
            throw precondition_error("irreducibility of " + to_string(poly) +
                                     " cannot be checked here; declare it with assert_irreducible");
    }
    Curve c{poly, as_line(poly), assert_irreducible};
    return c;
}

BivRat strip_curve(BivPoly const& f, BivRat const& x, std::int64_t* order)
{
    if (f.is_constant()) throw precondition_error("order along a constant polynomial");
    if (x.is_zero()) throw precondition_error("order of zero is undefined");
    std::int64_t k = 0;
    BivPoly num = x.num(), den = x.den();
    while (auto q = num.divide_exact(f)) {
        num = std::move(*q);
        ++k;
    }
    while (auto q = den.divide_exact(f)) {
        den = std::move(*q);
        --k;
    }
    if (order) *order = k;
    return BivRat(std::move(num), std::move(den));
}

std::int64_t curve_order(BivPoly const& f, BivRat const& x)
{
    if (f.is_constant()) throw precondition_error("order along a constant polynomial");
    if (x.is_zero()) throw precondition_error("order of zero is undefined");
    std::int64_t k = 0;
    for (BivPoly num = x.num(); auto q = num.divide_exact(f); ++k) num = std::move(*q);
    for (BivPoly den = x.den(); auto q = den.divide_exact(f); --k) den = std::move(*q);
    return k;
}

UniPoly restrict_poly(BivPoly const& f, Line const& line)
{
    std::uint32_t const p = f.p();
    UniPoly out;
    auto add_at = [&](std::size_t i, GFElem const& c) {
        if (out.size() <= i) out.resize(i + 1, GFElem(p, 0));
        out[i] += c;
    };
    if (line.vertical) {
        // t = intercept, parameter u
        for (auto const& [k, c] : f.terms()) add_at(k.first, c * line.intercept.pow(k.second));
    } else {
        // u = slope t + intercept, parameter t
        std::vector<UniPoly> powers{UniPoly{GFElem(p, 1)}};
        for (auto const& [k, c] : f.terms()) {
            while (powers.size() <= k.first) {
                UniPoly const& prev = powers.back();
                UniPoly next(prev.size() + 1, GFElem(p, 0));
                for (std::size_t i = 0; i < prev.size(); ++i) {
                    next[i + 1] += prev[i] * line.slope;
                    next[i] += prev[i] * line.intercept;
                }
                powers.push_back(std::move(next));
            }
            for (std::size_t i = 0; i < powers[k.first].size(); ++i)
                add_at(i + k.second, c * powers[k.first][i]);
        }
    }
    trim(out);
    return out;
}

UniRat restrict_to_curve(BivRat const& x, BivPoly const& line_poly)
{
    auto const line = as_line(line_poly);
    if (!line) throw precondition_error("restriction is only defined along lines, got " + to_string(line_poly));
    std::int64_t ord = 0;
    BivRat const y = strip_curve(line_poly, x, &ord);
    if (ord != 0)
        throw precondition_error(to_string(x) + " has order " + std::to_string(ord) + " along " +
                                 to_string(line_poly));
    return UniRat{restrict_poly(y.num(), *line), restrict_poly(y.den(), *line)};
}

// ---------------------------------------------------------------- search space

Budget Budget::standard(FieldSpec const& field, std::vector<BivPoly> const& extra)
{
    std::uint32_t const p = field.p;
    BivPoly const t = BivPoly::t(p), u = BivPoly::u(p), one(p, 1);
    Budget b;
    if (field.d == 1)
        b.pool = {t, t - one};
    else
        b.pool = {t, u, t - one, u - one, t - u};
    for (auto f : extra) {
        if (f.is_constant()) continue;
        f = f.scaled(f.leading_coeff().inverse());
        bool known = false;
        for (auto const& g : b.pool) known = known || g.scaled(g.leading_coeff().inverse()) == f;
        if (!known) b.pool.push_back(f);
    }
    return b;
}

std::vector<GFElem> test_constants(std::uint32_t p, std::uint32_t count)
{
    std::vector<GFElem> out;
    for (std::uint32_t c = 1; c < p && out.size() < count; ++c) out.emplace_back(p, c);
    for (std::uint32_t e = 2; out.size() < count; ++e) {
        std::vector<GFElem> layer;
        FieldVector v{p, e, Coords(e, 0)};
        for (;;) {
            GFElem x = GFElem::from_vector(v);
            if (x.degree() == e) layer.push_back(x);
            std::uint32_t i = 0;
            while (i < e && ++v.coords[i] == p) v.coords[i++] = 0;
            if (i == e) break;
        }
        std::sort(layer.begin(), layer.end());
        for (auto const& x : layer) {
            if (out.size() == count) break;
            out.push_back(x);
        }
    }
    return out;
}

ElementStream::ElementStream(Budget budget) : budget_(std::move(budget))
{
    if (budget_.pool.empty()) throw precondition_error("the test element pool is empty");
    constants_ = test_constants(budget_.pool.front().p(), budget_.max_constants);
    build_shapes();
}

void ElementStream::build_shapes()
{
    auto const n = static_cast<std::uint32_t>(budget_.pool.size());
    std::uint32_t const kmax = std::min(budget_.max_factors, n);

    std::vector<std::vector<std::uint32_t>> tuples;
    std::vector<std::uint32_t> cur;
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t start) {
        if (!cur.empty()) tuples.push_back(cur);
        if (cur.size() == kmax) return;
        for (std::uint32_t i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    std::sort(tuples.begin(), tuples.end());

    // exponent codes 0, 1, 2, 3, ... stand for 1, -1, 2, -2, ...
    auto const codes = static_cast<std::uint32_t>(2 * budget_.max_exponent);
    auto decode = [](std::uint32_t code) {
        auto const mag = static_cast<std::int32_t>(code / 2 + 1);
        return code % 2 ? -mag : mag;
    };
    std::int32_t const max_grade = static_cast<std::int32_t>(kmax) * budget_.max_exponent;
    for (std::int32_t grade = 1; grade <= max_grade; ++grade)
        for (auto const& tuple : tuples) {
            std::vector<std::uint32_t> code(tuple.size(), 0);
            for (;;) {
                std::int32_t g = 0;
                for (auto c : code) g += std::abs(decode(c));
                if (g == grade) {
                    Shape s{tuple, {}};
                    for (auto c : code) s.exponents.push_back(decode(c));
                    shapes_.push_back(std::move(s));
                }
                // odometer, last position fastest so exponents run lexicographically
                std::size_t i = code.size();
                while (i-- > 0) {
                    if (++code[i] < codes) break;
                    code[i] = 0;
                }
                if (i == static_cast<std::size_t>(-1)) break;
            }
        }

    std::uint32_t const p = budget_.pool.front().p();
    for (auto const& s : shapes_) {
        BivPoly num(p, 1), den(p, 1);
        for (std::size_t i = 0; i < s.factors.size(); ++i) {
            auto const& f = budget_.pool[s.factors[i]];
            auto const e = s.exponents[i];
            if (e > 0)
                num = num * f.pow(static_cast<std::uint32_t>(e));
            else
                den = den * f.pow(static_cast<std::uint32_t>(-e));
        }
        shape_values_.emplace_back(num, den);
    }
}

std::optional<BivRat> ElementStream::next()
{
    while (constant_index_ < constants_.size()) {
        if (shape_index_ == shapes_.size()) {
            shape_index_ = 0;
            ++constant_index_;
            continue;
        }
        auto const& c = constants_[constant_index_];
        auto const& v = shape_values_[shape_index_++];
        BivRat x = c.is_one() ? v : BivRat(v.num().scaled(c), v.den());
        if (x.is_one()) continue;
        ++position_;
        return x;
    }
    return std::nullopt;
}

std::vector<BivRat> enum_test_elements(Budget const& budget)
{
    ElementStream s(budget);
    std::vector<BivRat> out;
    while (auto x = s.next()) out.push_back(std::move(*x));
    return out;
}

}  // namespace minigal
