#include "minigal/error.hpp"
#include "minigal/valuations.hpp"

#include <doctest.h>

#include <random>

using namespace minigal;

namespace {

BivRat R(std::string const& s) { return parse_rat(5, s); }
BivPoly P(std::string const& s) { return parse_poly(5, s); }
FlagValuation div(std::string const& f) { return FlagValuation(Curve::make(P(f))); }
FlagValuation flag(std::string const& f, std::int64_t c) { return FlagValuation(Curve::make(P(f)), GFElem(5, c)); }
LexVector lv(std::vector<std::int64_t> a) { return LexVector{std::move(a)}; }

}  // namespace

TEST_CASE("flag values")
{
    auto v = flag("u", 0);
    CHECK(flag_value(v, R("u*t^2")) == lv({1, 2}));
    CHECK(flag_value(v, R("t - 1")) == lv({0, 0}));
    CHECK(flag_value(v, R("(1 + u)/t")) == lv({0, -1}));
    CHECK(flag_value(div("u - t^2"), R("(u - t^2)^3/t")) == lv({3}));
    CHECK_THROWS_AS(flag_value(v, R("0")), precondition_error);
    // vertical line t = 1 with points in the u-parameter
    auto w = flag("t - 1", 2);
    CHECK(flag_value(w, R("(t - 1)*(u - 2)^2")) == lv({1, 2}));
    CHECK(flag_last_coordinate(w, R("(t - 1)*(u - 2)^2")) == 2);
    // a point of F_25 on the line u = 0
    FlagValuation g(Curve::make(P("u")), GFElem::generator(5, 2));
    CHECK(flag_value(g, R("t^2 + t + 1")) == lv({0, 1}));
    CHECK_THROWS_AS(FlagValuation(Curve::make(P("u - t^2")), GFElem(5, 0)), precondition_error);
}

TEST_CASE("lex order")
{
    CHECK(lv({0, 1}) > lv({0, 0}));
    CHECK(lv({1, -5}) > lv({0, 7}));
    CHECK(lv({0, 1}).is_positive());
    CHECK(!lv({-1, 9}).is_positive());
    CHECK(lv({1, 2}) + lv({0, -2}) == lv({1, 0}));
}

TEST_CASE("units and principal units")
{
    auto v = flag("u", 0);
    CHECK(is_principal_unit(v, R("1 + u")));
    CHECK(is_unit(v, R("2")));
    CHECK(!is_principal_unit(v, R("2")));
    CHECK(is_principal_unit(v, R("1 + t")));
    CHECK(!is_unit(v, R("u")));
    CHECK(!is_principal_unit(v, R("u")));
    CHECK(is_principal_unit(v, R("1")));
    CHECK(is_principal_unit(div("u"), R("t/(t - u)")));
}

TEST_CASE("coarsening and comparability")
{
    auto v = flag("u", 0);
    CHECK(coarsen(v, {1}) == div("u"));
    CHECK(coarsen(v, {2}) == v);
    CHECK(coarsen(v, {0}).is_trivial());
    CHECK_THROWS_AS(coarsen(v, {3}), precondition_error);
    for (std::size_t j = 0; j <= 2; ++j)
        for (std::size_t k = 0; k <= 2; ++k)
            CHECK(coarsen(coarsen(v, {j}), {std::min(j, k)}) == coarsen(v, {std::min(j, k)}));
    CHECK(comparable(div("u"), v));
    CHECK(!comparable(flag("u", 0), flag("u", 1)));
    CHECK(!comparable(div("u"), div("t")));
    CHECK(comparable(div("2*u"), div("u")));
}

TEST_CASE("max_convex_inside")
{
    auto L = [](std::int64_t x) { return Lambda(2, 1, x); };
    CHECK(max_convex_inside(2, {{L(0), L(1)}}) == ConvexIndex{2});
    CHECK(max_convex_inside(2, {{L(1), L(0)}}) == ConvexIndex{1});
    CHECK(max_convex_inside(2, {}) == ConvexIndex{0});
    CHECK(max_convex_inside(2, {{L(1), L(0)}, {L(0), L(1)}}) == ConvexIndex{2});
    // oracle: brute force over a box of Z^2 for every pair of maps at level 1
    for (std::int64_t a = 0; a < 2; ++a)
        for (std::int64_t b = 0; b < 2; ++b) {
            std::vector<std::vector<Lambda>> k{{L(a), L(b)}};
            auto in_H = [&](std::int64_t x, std::int64_t y) { return (a * x + b * y) % 2 == 0; };
            std::size_t jprime = 0;
            bool last_inside = true, both_inside = true;
            for (std::int64_t y = -3; y <= 3; ++y) last_inside = last_inside && in_H(0, y);
            for (std::int64_t x = -3; x <= 3; ++x)
                for (std::int64_t y = -3; y <= 3; ++y) both_inside = both_inside && in_H(x, y);
            if (last_inside) jprime = both_inside ? 2 : 1;
            CHECK(max_convex_inside(2, k).j == 2 - jprime);
        }
}

TEST_CASE("ell-rank, census and classification")
{
    CHECK(ell_rank(div("u"), 2) == 1);
    CHECK(ell_rank(flag("u", 0), 3) == 2);
    CHECK(ell_rank(FlagValuation(), 2) == 0);
    for (std::size_t r = 0; r <= 3; ++r)
        for (std::uint32_t ell : {2u, 3u}) {
            auto c = convex_census(r, ell);
            CHECK(c.convex_subgroups == r + 1);
            CHECK(c.ell_divisible_nontrivial == 0);
        }
    CHECK(classify_quasi_divisorial(div("u - t^2"), 2) == QDClass{QDKind::quasi_divisorial, 1});
    CHECK(classify_quasi_divisorial(flag("u", 0), 2) == QDClass{QDKind::almost_quasi_divisorial, 2});
    CHECK(to_string(classify_quasi_divisorial(flag("u", 0), 2)) == "almost-2-quasi-divisorial");
    CHECK_THROWS_AS(classify_quasi_divisorial(flag("u", 0), 1), precondition_error);
    CHECK(classify_quasi_divisorial(FlagValuation(), 2).kind == QDKind::neither);
    CHECK(visibility(div("u"), 2, 2).visible());
    CHECK(!visibility(flag("u", 0), 2, 2).visible());
    CHECK(!visibility(flag("u", 0), 2, 2).v2);
    CHECK(!visibility(FlagValuation(Curve::make(P("t"), false, 1)), 1, 2).visible());
}

TEST_CASE("registry")
{
    FlagRegistry reg({5, 2});
    auto a = reg.add(flag("u", 0));
    CHECK(reg.size() == 2);
    auto u = *reg.find(div("u"));
    CHECK(u < a);
    CHECK(reg.parent(a) == u);
    CHECK(reg.add(flag("u", 0)) == a);
    auto b = reg.add(flag("u", 1));
    CHECK(reg.size() == 3);
    CHECK(reg.is_prefix(u, a));
    CHECK(reg.is_prefix(a, a));
    CHECK(!reg.is_prefix(a, b));
    CHECK(!reg.comparable(a, b));
    CHECK(reg.prefix(b, 1) == u);
    reg.add(div("t - 1"));
    CHECK(reg.curves().size() == 2);
    CHECK_THROWS_AS(reg.add(FlagValuation()), precondition_error);
    FlagRegistry line({5, 1});
    CHECK_THROWS_AS(line.add(flag("u", 0)), precondition_error);
}

TEST_CASE("flag values are additive")
{
    std::mt19937_64 rng(29);
    std::vector<BivPoly> pool{P("t"), P("u"), P("t-1"), P("u-1"), P("t-u"), P("u-t^2"), P("u-t-1")};
    std::vector<FlagValuation> flags{div("u"), flag("u", 0), flag("u", 1), flag("t - u", 0), flag("t-1", 1),
                                     flag("u - t - 1", 0), div("u - t^2")};
    auto rnd = [&] {
        BivRat x(BivPoly(5, 1 + static_cast<std::int64_t>(rng() % 4)));
        for (int i = 0; i < 3; ++i) x = x * BivRat(pool[rng() % pool.size()]).pow(static_cast<int>(rng() % 5) - 2);
        return x;
    };
    for (auto const& v : flags)
        for (int trial = 0; trial < 200; ++trial) {
            auto x = rnd(), y = rnd();
            CHECK(flag_value(v, x * y) == flag_value(v, x) + flag_value(v, y));
            if (is_principal_unit(v, x)) CHECK(is_unit(v, x));
            if (v.rank() == 2 && is_unit(v, x)) CHECK(is_unit(coarsen(v, {1}), x));
            if (v.rank() == 2 && is_principal_unit(coarsen(v, {1}), x)) CHECK(is_principal_unit(v, x));
        }
}
