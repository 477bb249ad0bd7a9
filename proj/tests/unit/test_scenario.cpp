#include "minigal/error.hpp"
#include "minigal/scenario.hpp"

#include <doctest.h>

#include <filesystem>
#include <string>

using namespace minigal;

namespace {

std::size_t error_line(std::string_view text)
{
    try {
        auto s = parse_scenario(text);
        build_workspace(s);
    } catch (parse_error const& e) {
        return e.line;
    }
    return 0;
}

constexpr std::string_view header = "config p=5 ell=2 n=1 N=1\nfield vars=t,u\n";

}  // namespace

TEST_CASE("budget specs")
{
    auto b = BudgetSpec::parse("factors=1,constants=50");
    CHECK(b.preset == "default");
    CHECK(b.factors == 1u);
    CHECK(b.constants == 50u);
    CHECK_FALSE(b.exponent);
    auto made = BudgetSpec::parse("small").make({5, 2}, {});
    CHECK(made.max_factors == 1);
    CHECK(made.max_constants == 20);
    CHECK(BudgetSpec::parse("large").make({5, 2}, {}).max_exponent == 3);
    CHECK_THROWS(BudgetSpec::parse("huge"));
    CHECK_THROWS(BudgetSpec::parse("factors=x"));
}

TEST_CASE("list splitting keeps nested brackets together")
{
    CHECK(split_list("[a, b,c]") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_list("[]").empty());
    CHECK(split_list("[(x, y), (z, w)]") == std::vector<std::string>{"(x, y)", "(z, w)"});
}

TEST_CASE("parse errors carry line numbers")
{
    std::string bad = std::string(header) + "flag#u: [curve \"u\"]\nfun#a: level=1 terms=[(flag#v, 1, 1)]\n";
    CHECK(error_line(bad) == 4);
    CHECK(error_line(std::string(header) + "\nwat#x: 1\n") == 4);
    CHECK(error_line(std::string(header) + "flag#u: [curve \"u\"\n") == 3);
    CHECK(error_line(std::string(header) + "flag#u: [curve \"u\"]\nflag#u: [curve \"t\"]\n") == 4);
    CHECK(error_line(std::string(header) + "fun#z: level=1 terms=[]\nuniverse#U: lower=[z, q]\n") == 4);
    CHECK(error_line("config p=4 ell=2 n=1 N=1\n") == 1);
    CHECK(error_line(std::string(header) + "task#t: cpair a=x b=y expect=yes frobnicate\n") == 3);
    try {
        parse_scenario(std::string(header) + "flag#u: [curve \"u\"] extra\n");
        FAIL("expected a parse error");
    } catch (parse_error const& e) {
        CHECK(e.line == 3);
        CHECK(e.column > 1);
    }
}

TEST_CASE("configuration is validated")
{
    CHECK(error_line("config p=5 ell=5 n=1 N=1\n") == 1);   // p = ell
    CHECK(error_line("config p=5 ell=2 n=2 N=1\n") == 1);   // N < n
    CHECK(error_line("config p=5 ell=2 n=1 N=1\nfield vars=t,u,w\n") == 2);
}

TEST_CASE("serialization is canonical and round-trips")
{
    for (auto name : {"u0", "u1", "kt", "rank2"}) {
        CAPTURE(name);
        auto const once = serialize(parse_scenario(curated_declarations(name)));
        CHECK(serialize(parse_scenario(once)) == once);
        CHECK_NOTHROW(build_workspace(parse_scenario(once)));
    }
    // formatting noise does not survive
    auto a = serialize(parse_scenario(std::string(header) + "flag#u:[curve \"u\"]\n# note\nfun#x: level=1 terms=[(flag#u,1,3)]\n"));
    auto b = serialize(parse_scenario(std::string(header) + "\nflag#u: [curve \"u\"]\nfun#x: level=1 terms=[(flag#u, 1, 3)]\n"));
    CHECK(a == b);
}

TEST_CASE("bundled scenarios parse, build and round-trip")
{
    std::size_t seen = 0;
    for (auto const& entry : std::filesystem::directory_iterator(MINIGAL_SCENARIO_DIR)) {
        if (entry.path().extension() != ".scn") continue;
        CAPTURE(entry.path().string());
        auto const s = load_scenario(entry.path().string());
        auto const once = serialize(s);
        CHECK(serialize(parse_scenario(once)) == once);
        CHECK_NOTHROW(build_workspace(s));
        ++seen;
    }
    CHECK(seen >= 5);
}

TEST_CASE("canonical upper sort")
{
    auto ws = build_workspace(parse_scenario("config p=5 ell=2 n=1 N=2\nfield vars=t,u\nflag#u: [curve \"u\"]\n"
                                             "fun#a: level=1 terms=[(flag#u, 1, 1)]\nuniverse#U: lower=[a]\n"));
    auto const& U = ws.universe("U");
    REQUIRE(U.upper.size() == 1);
    CHECK(U.upper_names[0] == "a'");
    CHECK(U.upper[0].level() == 2);
    CHECK(project(U.upper[0], 1) == U.lower[0]);
}

TEST_CASE("runner statuses")
{
    std::string text = std::string(curated_declarations("u0")) +
                       "task#ok: cpair a=a b=b expect=no\n"
                       "task#bad: cpair a=a b=b expect=yes\n"
                       "task#info: cpair a=ord_u b=a\n"
                       "task#err: cpair a=a b=nope expect=no\n";
    auto r = run_scenario(parse_scenario(text));
    CHECK(r.passed == 1);
    CHECK(r.failed == 2);
    CHECK(r.info == 1);
    CHECK(r.report.find("task=err op=cpair subject=a=a,b=nope verdict=error") != std::string::npos);
    CHECK(r.report.rfind("# minigal report\n", 0) == 0);
}

TEST_CASE("reports do not depend on the thread count")
{
    std::string text = std::string(curated_declarations("u0")) +
                       "task#m: cpair_matrix universe=U0 expect=0\n"
                       "task#d: def_D universe=U0 sigma=[ord_u]\n";
    auto const s = parse_scenario(text);
    RunOptions one, four;
    four.threads = 4;
    CHECK(run_scenario(s, one).report == run_scenario(s, four).report);
}
