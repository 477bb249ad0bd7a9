#include "minigal/coeff.hpp"
#include "minigal/error.hpp"

#include <doctest.h>

#include <vector>

using namespace minigal;

TEST_CASE("projection examples")
{
    CHECK(lambda_project(Lambda(2, 3, 5), 2) == Lambda(2, 2, 1));
    CHECK(lambda_project(Lambda(3, 2, 0), 1).is_zero());
    CHECK(lambda_project(Lambda(2, 2, 3), 2) == Lambda(2, 2, 3));
    CHECK_THROWS_AS(lambda_project(Lambda(2, 2, 3), 3), precondition_error);
}

TEST_CASE("lift examples and round trip")
{
    CHECK(lambda_lift(Lambda(2, 1, 1), 2) == Lambda(2, 2, 1));
    CHECK(lambda_lift(Lambda(3, 1, 2), 3) == Lambda(3, 3, 2));
    CHECK_THROWS_AS(lambda_lift(Lambda(3, 2, 2), 1), precondition_error);
    for (std::uint32_t ell : {2u, 3u, 5u})
        for (std::int64_t a = 0; a < ell; ++a)
            for (std::uint32_t m = 1; m <= 4; ++m)
                CHECK(lambda_project(lambda_lift(Lambda(ell, 1, a), m), 1) == Lambda(ell, 1, a));
}

TEST_CASE("projections compose")
{
    for (std::uint32_t m = 1; m <= 4; ++m)
        for (std::int64_t a = 0; a < (1 << m); ++a)
            for (std::uint32_t k = 1; k <= m; ++k)
                for (std::uint32_t n = 1; n <= k; ++n)
                    CHECK(lambda_project(lambda_project(Lambda(2, m, a), k), n) ==
                          lambda_project(Lambda(2, m, a), n));
}

TEST_CASE("mixed levels are rejected")
{
    CHECK_THROWS_AS(Lambda(2, 1, 1) + Lambda(2, 2, 1), level_mismatch);
    CHECK_THROWS_AS(Lambda(2, 1, 1) * Lambda(3, 1, 1), level_mismatch);
    CHECK_THROWS_AS(Lambda(4, 1, 1), precondition_error);
}

TEST_CASE("ring arithmetic")
{
    Lambda a(3, 2, 7), b(3, 2, 5);
    CHECK((a + b).residue() == 3);
    CHECK((a - b).residue() == 2);
    CHECK((a * b).residue() == 8);
    CHECK((-a).residue() == 2);
    CHECK(Lambda(3, 2, -1).residue() == 8);
    CHECK(Lambda(3, 2, 6).valuation() == 1);
    CHECK(Lambda(3, 2, 0).valuation() == 2);
}

TEST_CASE("constants")
{
    CHECK(const_M(1, 1) == 1);
    CHECK(const_M(1, 2) == 3);
    CHECK(const_M(2, 3) == 7);
    for (std::uint32_t ell : {2u, 3u, 5u}) {
        CHECK(const_N(1, ell) == 1);
        CHECK(const_R(1, ell) == 1);
    }
    CHECK(const_N(2, 2) == 185);
    CHECK(const_N(2, 3) == 965);
    CHECK(const_R(2, 2) == BigInt(37748689));
    for (std::uint32_t ell : {2u, 3u})
        for (int n = 1; n <= 5; ++n) {
            BigInt const m1 = const_M(1, n), m2 = const_M(2, m1);
            CHECK(n <= m1);
            CHECK(m1 <= m2);
            CHECK(m2 <= const_R(n, ell));
        }
}

TEST_CASE("N is pluggable")
{
    ConstantFormulas linear{[](BigInt const& n, std::uint32_t) { return 2 * n; }};
    CHECK(const_N(3, 2, linear) == 6);
    CHECK(const_R(2, 2, linear) == 14);  // M_2(M_1(2)) = 7
}

TEST_CASE("cancellation examples")
{
    std::vector<Lambda> c{Lambda(2, 3, 2)};
    CHECK(check_cancellation(c, Lambda(2, 3, 1), Lambda(2, 3, 5), 2));
    std::vector<Lambda> one{Lambda(2, 1, 1)};
    CHECK(check_cancellation(one, Lambda(2, 1, 1), Lambda(2, 1, 1), 1));
    std::vector<Lambda> bad{Lambda(2, 3, 4)};
    CHECK_THROWS_AS(check_cancellation(bad, Lambda(2, 3, 1), Lambda(2, 3, 5), 2), cancellation_precondition);
    // level below M_1(2) = 3
    std::vector<Lambda> low{Lambda(2, 2, 1)};
    CHECK_THROWS_AS(check_cancellation(low, Lambda(2, 2, 1), Lambda(2, 2, 1), 2), cancellation_precondition);
    CHECK_THROWS_AS(check_cancellation({}, Lambda(2, 2, 1), Lambda(2, 2, 1), 1), cancellation_precondition);
}


TEST_CASE("small exhaustive sweeps")
{
    for (std::uint32_t ell : {2u, 3u})
        for (std::uint32_t r : {1u, 2u}) {
            auto s = sweep_cancellation(ell, 1, r);
            CHECK(s.level == 1);
            CHECK(s.counterexamples == 0);
            CHECK(s.checked > 0);
        }
    auto s = sweep_cancellation(2, 2, 1);
    CHECK(s.level == 3);
    CHECK(s.checked == 6 * 8 * 8);
    CHECK(s.counterexamples == 0);
}

TEST_CASE("sweep agrees with instance-by-instance checks")
{
    // ell = 2, n = 2, r = 2: R = 4, literally through check_cancellation
    std::uint64_t checked = 0, failures = 0;
    for (std::int64_t c1 = 0; c1 < 16; ++c1)
        for (std::int64_t c2 = 0; c2 < 16; ++c2) {
            if (c1 % 4 == 0 || c2 % 4 == 0) continue;
            std::vector<Lambda> c{Lambda(2, 4, c1), Lambda(2, 4, c2)};
            for (std::int64_t a = 0; a < 16; ++a)
                for (std::int64_t b = 0; b < 16; ++b) {
                    ++checked;
                    if (!check_cancellation(c, Lambda(2, 4, a), Lambda(2, 4, b), 2)) ++failures;
                }
        }
    auto s = sweep_cancellation(2, 2, 2);
    CHECK(s.checked == checked);
    CHECK(s.counterexamples == failures);
    CHECK(failures == 0);
}

TEST_CASE("the bound is needed: level n alone admits counterexamples")
{
    // c = ell at level n + 0 = M_1(n) - (n - 1); for n = 2 use level 2 < 3
    Lambda c(2, 2, 2);
    Lambda a(2, 2, 0), b(2, 2, 2);
    CHECK(a * c == b * c);
    CHECK(lambda_project(a, 2) != lambda_project(b, 2));
}
