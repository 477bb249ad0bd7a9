#include "minigal/error.hpp"
#include "minigal/funcfield.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace minigal;

namespace {

BivRat R(std::string const& s) { return parse_rat(5, s); }
BivPoly P(std::string const& s) { return parse_poly(5, s); }

BivRat random_element(std::mt19937_64& rng, std::vector<BivPoly> const& pool)
{
    BivRat x(BivPoly(5, 1 + static_cast<std::int64_t>(rng() % 4)));
    int const k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) {
        auto const& f = pool[rng() % pool.size()];
        int const e = static_cast<int>(rng() % 5) - 2;
        x = x * BivRat(f).pow(e);
    }
    return x;
}

}  // namespace

TEST_CASE("rational arithmetic examples")
{
    CHECK(R("t").one_minus().equals(R("1 - t")));
    CHECK(R("u*t^2/(u+1)").one_minus().equals(R("(u + 1 - u*t^2)/(u+1)")));
    CHECK((R("t/u") * R("u/t")).is_one());
    CHECK(rat_arith(RatOp::one_minus, R("t")).equals(R("1-t")));
    CHECK_THROWS_AS(R("0").inverse(), division_by_zero);
    CHECK(R("2*t/(2*u)").equals(R("t/u")));
    CHECK(R("(t^2 - 1)/(t - 1)").den().is_constant());
}

TEST_CASE("parser and serializer")
{
    CHECK(to_string(P("t - 1")) == "t + 4");
    CHECK(to_string(P("(u - t^2)*(u + 1)")) == "u^2 + 4*t^2*u + u + 4*t^2");
    CHECK(P(to_string(P("3*t^2*u + g2*t + 1"))) == P("3*t^2*u + g2*t + 1"));
    CHECK(to_string(P("g2*t + 2*g2 + 1")) == "g2*t + (2*g2+1)");
    CHECK(P("(2*g2+1)*t") == P("2*g2*t + t"));
    CHECK(to_string(P("0")) == "0");
    try {
        P("t + * u");
        FAIL("expected a parse error");
    } catch (parse_error const& e) {
        CHECK(e.line == 1);
        CHECK(e.column == 5);
    }
    CHECK_THROWS_AS(P("t/u"), parse_error);
    CHECK_THROWS_AS(P("(t"), parse_error);
    CHECK(parse_constant(5, "7") == GFElem(5, 2));
}

TEST_CASE("curve orders")
{
    CHECK(curve_order(P("u"), R("u^2*(t+1)")) == 2);
    CHECK(curve_order(P("u"), R("t/u^3")) == -3);
    CHECK(curve_order(P("u - t^2"), R("(u - t^2)*(u + 1)/u")) == 1);
    CHECK(curve_order(P("u"), R("3")) == 0);
    CHECK_THROWS_AS(curve_order(P("2"), R("u")), precondition_error);
    CHECK_THROWS_AS(curve_order(P("u"), R("0")), precondition_error);
    // common factors in a non-reduced fraction do not disturb the order
    CHECK(curve_order(P("t+u"), BivRat(P("(t+u)^2*(t-1)"), P("(t+u)*(t-1)"))) == 1);
}

TEST_CASE("restriction to lines")
{
    auto r = restrict_to_curve(R("t^2 + u"), P("u"));
    CHECK(to_string(r.num) == "t^2");
    auto s = restrict_to_curve(R("(t + u)/(1 + u)"), P("u"));
    CHECK(order_at(s, GFElem(5, 0)) == 1);
    CHECK(evaluate_at(s, GFElem(5, 2)) == GFElem(5, 2));
    CHECK(curve_order(P("u"), R("u/(u+t)")) == 1);
    CHECK_THROWS_AS(restrict_to_curve(R("u/(u + t)"), P("u")), precondition_error);
    // vertical line t = 1 is parametrized by u
    auto v = restrict_to_curve(R("t*u - u"), P("t - 2"));
    CHECK(order_at(v, GFElem(5, 0)) == 1);
    // sloped line u = t + 1
    auto w = restrict_to_curve(R("u - 1"), P("u - t - 1"));
    CHECK(to_string(w.num) == "t");
    CHECK_THROWS_AS(restrict_to_curve(R("t"), P("u - t^2")), precondition_error);
}

TEST_CASE("lines")
{
    auto l = as_line(P("2*u + t + 3"));
    REQUIRE(l);
    CHECK(!l->vertical);
    CHECK(l->slope == GFElem(5, 2));      // u = -t/2 - 3/2
    CHECK(l->intercept == GFElem(5, 1));
    auto v = as_line(P("t - 3"));
    REQUIRE(v);
    CHECK(v->vertical);
    CHECK(v->intercept == GFElem(5, 3));
    CHECK(!as_line(P("u - t^2")));
}

TEST_CASE("absolute irreducibility up to degree two")
{
    CHECK(*absolutely_irreducible(P("u - t^2")));
    CHECK(*absolutely_irreducible(P("t*u - 1")));
    CHECK(!*absolutely_irreducible(P("t^2 + 1")));      // (t - 2)(t + 2) over F_5
    CHECK(!*absolutely_irreducible(P("t^2 - 2")));      // splits over F_25
    CHECK(!*absolutely_irreducible(P("t*u")));
    CHECK(!*absolutely_irreducible(P("t^2 + u^2")));    // -1 is a square mod 5
    CHECK(!*absolutely_irreducible(P("(t + u + 1)^2")));
    CHECK(*absolutely_irreducible(P("t^2 + u^2 + 1")));
    CHECK(!absolutely_irreducible(P("u - t^3")));
    CHECK_THROWS_AS(Curve::make(P("t*u")), precondition_error);
    CHECK_THROWS_AS(Curve::make(P("u - t^3")), precondition_error);
    CHECK(Curve::make(P("u - t^3"), true).asserted);
    CHECK(Curve::make(P("2*u"), false).poly == P("u"));
    CHECK_THROWS_AS(Curve::make(P("u"), false, 1), precondition_error);
}

TEST_CASE("curve_order is a homomorphism and kills constants")
{
    std::mt19937_64 rng(17);
    std::vector<BivPoly> pool{P("t"), P("u"), P("t-1"), P("u-1"), P("t-u"), P("u-t^2"), P("t+u+1")};
    for (int trial = 0; trial < 200; ++trial) {
        auto x = random_element(rng, pool), y = random_element(rng, pool);
        for (auto const& f : pool) CHECK(curve_order(f, x * y) == curve_order(f, x) + curve_order(f, y));
    }
    for (std::int64_t c = 1; c < 5; ++c) CHECK(curve_order(P("u-t^2"), BivRat(BivPoly(5, c))) == 0);
    CHECK(curve_order(P("u"), BivRat(BivPoly::constant(GFElem::generator(5, 3)))) == 0);
}

TEST_CASE("restriction is multiplicative on order-zero elements")
{
    std::mt19937_64 rng(23);
    std::vector<BivPoly> pool{P("t"), P("t-1"), P("u-1"), P("t-u"), P("u-t^2")};
    auto const line = P("u");
    for (int trial = 0; trial < 100; ++trial) {
        auto x = random_element(rng, pool), y = random_element(rng, pool);
        auto rx = restrict_to_curve(x, line), ry = restrict_to_curve(y, line), rxy = restrict_to_curve(x * y, line);
        for (std::int64_t c = 0; c < 5; ++c) {
            GFElem const pt(5, c);
            CHECK(order_at(rxy, pt) == order_at(rx, pt) + order_at(ry, pt));
        }
        GFElem const pt = GFElem::generator(5, 2);
        CHECK(evaluate_at(rxy, pt) == evaluate_at(rx, pt) * evaluate_at(ry, pt));
    }
}

TEST_CASE("test constants")
{
    auto cs = test_constants(5, 30);
    REQUIRE(cs.size() == 30);
    CHECK(cs[0] == GFElem(5, 1));
    CHECK(cs[3] == GFElem(5, 4));
    CHECK(cs[4].degree() == 2);
    CHECK(cs[24].degree() == 3);
    std::set<std::string> seen;
    for (auto const& c : cs) seen.insert(to_string(c));
    CHECK(seen.size() == 30);
}

TEST_CASE("element stream")
{
    Budget b;
    b.pool = {P("t")};
    b.max_factors = 1;
    b.max_constants = 2;
    auto xs = enum_test_elements(b);
    REQUIRE(xs.size() == 8);
    CHECK(xs[0].equals(R("t")));
    CHECK(xs[1].equals(R("1/t")));
    CHECK(xs[2].equals(R("t^2")));
    CHECK(xs[3].equals(R("1/t^2")));
    CHECK(xs[4].equals(R("2*t")));
    CHECK(xs[7].equals(R("2/t^2")));

    auto std_budget = Budget::standard({5, 2}, {P("u"), P("2*u - 2*t^2")});
    CHECK(std_budget.pool.size() == 6);
    CHECK(std_budget.pool.back() == P("u - t^2"));
    auto all = enum_test_elements(std_budget);
    for (auto const& x : all) {
        CHECK(!x.is_zero());
        CHECK(!x.is_one());
    }
    // 6 single factors * 4 exponents + 15 pairs * 16 exponents, times 200 constants
    CHECK(all.size() == (6 * 4 + 15 * 16) * 200);
    auto again = enum_test_elements(std_budget);
    bool same = all.size() == again.size();
    for (std::size_t i = 0; same && i < all.size(); ++i) same = all[i].num() == again[i].num() && all[i].den() == again[i].den();
    CHECK(same);
    // grade ordering: nothing of grade 2 comes before the grade-1 elements
    CHECK(all[3].equals(R("1/u")));
    CHECK(all[9].equals(R("1/(t-u)")));
    CHECK(all[11].equals(R("1/(u-t^2)")));
    CHECK(all[12].equals(R("t^2")));
    CHECK(all[13].equals(R("1/t^2")));
    CHECK(all[14].equals(R("t*u")));
    CHECK(all[15].equals(R("t/u")));

    ElementStream d1(Budget::standard({5, 1}));
    auto first = d1.next();
    REQUIRE(first);
    CHECK(first->equals(R("t")));
}
