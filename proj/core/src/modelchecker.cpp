#include "minigal/modelchecker.hpp"

#include "minigal/error.hpp"

#include <algorithm>
#include <numeric>

namespace minigal {

namespace {

Tri k_not(Tri a)
{
    return a == Tri::yes ? Tri::no : a == Tri::no ? Tri::yes : Tri::unknown;
}

Tri k_and(Tri a, Tri b)
{
    if (a == Tri::no || b == Tri::no) return Tri::no;
    if (a == Tri::unknown || b == Tri::unknown) return Tri::unknown;
    return Tri::yes;
}

Tri k_or(Tri a, Tri b)
{
    if (a == Tri::yes || b == Tri::yes) return Tri::yes;
    if (a == Tri::unknown || b == Tri::unknown) return Tri::unknown;
    return Tri::no;
}

// Does the three-valued set `got` equal the decided set `want`?
Tri set_equals(std::vector<Tri> const& got, std::vector<Tri> const& want)
{
    Tri acc = Tri::yes;
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (got[i] == Tri::unknown)
            acc = k_and(acc, Tri::unknown);
        else if (got[i] != want[i])
            return Tri::no;
    }
    return acc;
}

}  // namespace

// ---------------------------------------------------------------- Universe

Universe Universe::same_level(std::vector<Functional> S, std::vector<std::string> names)
{
    if (S.empty()) throw precondition_error("a universe needs at least one element");
    if (names.size() != S.size()) throw precondition_error("one name per element");
    Universe U;
    U.ell = S.front().ell();
    U.n = U.N = S.front().level();
    U.upper = S;
    U.lower = std::move(S);
    U.upper_names = names;
    U.lower_names = std::move(names);
    for (std::size_t i = 0; i < U.lower.size(); ++i) U.lifts.push_back({i});
    return U;
}

std::size_t Universe::index_of(std::string const& name) const
{
    auto it = std::find(lower_names.begin(), lower_names.end(), name);
    if (it == lower_names.end()) throw precondition_error("'" + name + "' is not in the universe");
    return static_cast<std::size_t>(it - lower_names.begin());
}

void validate(Universe const& U)
{
    if (U.lower.empty()) throw precondition_error("empty universe");
    if (U.N < U.n) throw precondition_error("N must be at least n");
    if (BigInt(U.N) < const_R(U.n, U.ell))
        throw precondition_error("N = " + std::to_string(U.N) + " is below R(n)");
    if (U.lower_names.size() != U.lower.size() || U.upper_names.size() != U.upper.size())
        throw precondition_error("one name per element");
    auto const& reg = U.lower.front().registry();
    if (reg.field().p == U.ell) throw precondition_error("the characteristic must differ from ell");
    for (auto const& s : U.lower)
        if (s.level() != U.n || s.ell() != U.ell || &s.registry() != &reg)
            throw precondition_error("S_n element at the wrong level");
    for (auto const& s : U.upper)
        if (s.level() != U.N || s.ell() != U.ell || &s.registry() != &reg)
            throw precondition_error("S_N element at the wrong level");
    if (U.lifts.size() != U.lower.size()) throw precondition_error("lift table does not cover S_n");
    for (std::size_t i = 0; i < U.lower.size(); ++i) {
        if (U.lifts[i].empty()) throw precondition_error(U.lower_names[i] + " has no lift");
        bool canonical = false;
        for (auto a : U.lifts[i]) {
            if (a >= U.upper.size()) throw precondition_error("lift index out of range");
            if (!(project(U.upper[a], U.n) == U.lower[i]))
                throw precondition_error(U.upper_names[a] + " is not a lift of " + U.lower_names[i]);
            canonical = canonical || U.upper[a] == lift(U.lower[i], U.N);
        }
        if (!canonical) throw precondition_error("the canonical lift of " + U.lower_names[i] + " is missing");
    }
    for (std::size_t a = 0; a < U.upper.size(); ++a) {
        auto const p = project(U.upper[a], U.n);
        if (std::find(U.lower.begin(), U.lower.end(), p) == U.lower.end())
            throw precondition_error("projection of " + U.upper_names[a] + " is not in S_n");
    }
}

std::vector<std::size_t> SetOutcome::members() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < membership.size(); ++i)
        if (membership[i] == Tri::yes) out.push_back(i);
    return out;
}

std::vector<std::size_t> SetOutcome::undecided() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < membership.size(); ++i)
        if (membership[i] == Tri::unknown) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------- verdicts

ModelChecker::ModelChecker(Universe U, CPairEngine& engine) : U_(std::move(U)), engine_(&engine)
{
    validate(U_);
    if (&U_.lower.front().registry() != &engine.registry())
        throw precondition_error("engine and universe use different registries");
}

void ModelChecker::precompute()
{
    engine_->precompute(U_.lower);
    engine_->precompute(U_.upper);
    for (std::size_t i = 0; i < U_.lower.size(); ++i)
        for (std::size_t j = i; j < U_.lower.size(); ++j) lower_verdict(i, j);
    for (std::size_t a = 0; a < U_.upper.size(); ++a)
        for (std::size_t b = a; b < U_.upper.size(); ++b) upper_verdict(a, b);
}

CVerdict const& ModelChecker::lower_verdict(std::size_t i, std::size_t j)
{
    auto key = std::minmax(i, j);
    auto it = lower_.find(key);
    if (it == lower_.end()) it = lower_.emplace(key, engine_->verdict(U_.lower[i], U_.lower[j])).first;
    return it->second;
}

CVerdict const& ModelChecker::upper_verdict(std::size_t a, std::size_t b)
{
    auto key = std::minmax(a, b);
    auto it = upper_.find(key);
    if (it == upper_.end()) it = upper_.emplace(key, engine_->verdict(U_.upper[a], U_.upper[b])).first;
    return it->second;
}

Tri ModelChecker::cn(std::size_t i, std::size_t j)
{
    Tri const v = lower_verdict(i, j).value;
    if (v == Tri::unknown) {
        auto [a, b] = std::minmax(i, j);
        blocking_.insert(U_.lower_names[a] + "~" + U_.lower_names[b]);
    }
    return v;
}

Tri ModelChecker::cN(std::size_t a, std::size_t b)
{
    Tri const v = upper_verdict(a, b).value;
    if (v == Tri::unknown) {
        auto [x, y] = std::minmax(a, b);
        blocking_.insert(U_.upper_names[x] + "~" + U_.upper_names[y]);
    }
    return v;
}

Tri ModelChecker::lifted_pair(std::size_t i, std::size_t j)
{
    Tri acc = Tri::no;
    for (auto a : U_.lifts[i])
        for (auto b : U_.lifts[j]) {
            acc = k_or(acc, cN(a, b));
            if (acc == Tri::yes) return acc;
        }
    return acc;
}

Tri ModelChecker::lifted_pair2(std::size_t i, std::size_t j1, std::size_t j2)
{
    return lifted_triple(i, j1, j1, j2);
}

Tri ModelChecker::lifted_triple(std::size_t s, std::size_t t, std::size_t t1, std::size_t t2)
{
    Tri acc = Tri::no;
    for (auto a : U_.lifts[s]) {
        Tri all = Tri::yes;
        for (auto j : {t, t1, t2}) {
            Tri some = Tri::no;
            for (auto b : U_.lifts[j]) {
                some = k_or(some, cN(a, b));
                if (some == Tri::yes) break;
            }
            all = k_and(all, some);
            if (all == Tri::no) break;
        }
        acc = k_or(acc, all);
        if (acc == Tri::yes) return acc;
    }
    return acc;
}

void ModelChecker::begin()
{
    blocking_.clear();
}

std::vector<std::string> ModelChecker::end()
{
    std::vector<std::string> out(blocking_.begin(), blocking_.end());
    blocking_.clear();
    return out;
}

std::vector<Tri> ModelChecker::as_set(std::vector<std::size_t> const& idx) const
{
    std::vector<Tri> m(U_.lower.size(), Tri::no);
    for (auto i : idx) {
        if (i >= m.size()) throw precondition_error("index outside the universe");
        m[i] = Tri::yes;
    }
    return m;
}

// ---------------------------------------------------------------- predicates

Outcome ModelChecker::visible_inertia(std::size_t i)
{
    if (i >= U_.lower.size()) throw precondition_error("element outside S_n");
    begin();
    Tri acc = Tri::no;
    std::size_t const L = U_.lower.size();
    for (std::size_t j1 = 0; j1 < L; ++j1)
        for (std::size_t j2 = j1 + 1; j2 < L; ++j2) {
            Tri const a = k_not(cn(j1, j2));
            if (a == Tri::no) continue;
            Tri const both = k_and(a, lifted_pair2(i, j1, j2));
            if (both == Tri::yes) {
                end();
                return {Tri::yes, "tau1=" + U_.lower_names[j1] + " tau2=" + U_.lower_names[j2], {}};
            }
            acc = k_or(acc, both);
        }
    auto blocking = end();
    if (acc == Tri::no) return {Tri::no, "exhausted", {}};
    return {acc, "", blocking};
}

Outcome ModelChecker::common_inertia(std::vector<std::size_t> const& sigma)
{
    if (sigma.empty()) throw precondition_error("common inertia of an empty set");
    for (auto i : sigma)
        if (i >= U_.lower.size()) throw precondition_error("element outside S_n");
    begin();
    Tri pairwise = Tri::yes;
    std::string fail;
    for (std::size_t x = 0; x < sigma.size() && pairwise != Tri::no; ++x)
        for (std::size_t y = x; y < sigma.size(); ++y) {
            Tri const c = lifted_pair(sigma[x], sigma[y]);
            if (c == Tri::no) fail = "pair=" + U_.lower_names[sigma[x]] + "," + U_.lower_names[sigma[y]];
            pairwise = k_and(pairwise, c);
            if (pairwise == Tri::no) break;
        }
    if (pairwise == Tri::no) {
        end();
        return {Tri::no, fail, {}};
    }
    Tri exists = Tri::no;
    std::string wit;
    std::size_t const L = U_.lower.size();
    for (std::size_t j1 = 0; j1 < L && exists != Tri::yes; ++j1)
        for (std::size_t j2 = j1 + 1; j2 < L; ++j2) {
            Tri cond = k_not(cn(j1, j2));
            for (auto s : sigma) {
                if (cond == Tri::no) break;
                cond = k_and(cond, lifted_pair2(s, j1, j2));
            }
            exists = k_or(exists, cond);
            if (exists == Tri::yes) {
                wit = "tau1=" + U_.lower_names[j1] + " tau2=" + U_.lower_names[j2];
                break;
            }
        }
    Tri const value = k_and(pairwise, exists);
    auto blocking = end();
    if (value == Tri::yes) return {value, wit, {}};
    if (value == Tri::no) return {value, "exhausted", {}};
    return {value, "", blocking};
}

SetOutcome ModelChecker::def_D(std::vector<Tri> const& sigma)
{
    if (sigma.size() != U_.lower.size()) throw precondition_error("membership vector of the wrong size");
    begin();
    std::size_t const L = U_.lower.size();
    SetOutcome out;
    out.membership.assign(L, Tri::no);
    for (std::size_t t = 0; t < L; ++t) {
        Tri all = Tri::yes;
        for (std::size_t s = 0; s < L && all != Tri::no; ++s) {
            if (sigma[s] == Tri::no) continue;
            Tri some = Tri::no;
            for (std::size_t j1 = 0; j1 < L && some != Tri::yes; ++j1)
                for (std::size_t j2 = j1 + 1; j2 < L; ++j2) {
                    Tri const a = k_not(cn(j1, j2));
                    if (a == Tri::no) continue;
                    some = k_or(some, k_and(a, lifted_triple(s, t, j1, j2)));
                    if (some == Tri::yes) break;
                }
            all = k_and(all, k_or(k_not(sigma[s]), some));
        }
        out.membership[t] = all;
    }
    out.blocking = end();
    return out;
}

SetOutcome ModelChecker::def_I(std::vector<Tri> const& sigma)
{
    if (sigma.size() != U_.lower.size()) throw precondition_error("membership vector of the wrong size");
    begin();
    std::size_t const L = U_.lower.size();
    SetOutcome out;
    out.membership.assign(L, Tri::no);
    for (std::size_t s = 0; s < L; ++s) {
        if (sigma[s] == Tri::no) continue;
        Tri some_lift = Tri::no;
        for (auto a : U_.lifts[s]) {
            Tri all = Tri::yes;
            for (std::size_t t = 0; t < L && all != Tri::no; ++t) {
                if (sigma[t] == Tri::no) continue;
                Tri paired = Tri::no;
                for (auto b : U_.lifts[t]) {
                    paired = k_or(paired, cN(a, b));
                    if (paired == Tri::yes) break;
                }
                all = k_and(all, k_or(k_not(sigma[t]), paired));
            }
            some_lift = k_or(some_lift, all);
            if (some_lift == Tri::yes) break;
        }
        out.membership[s] = k_and(sigma[s], some_lift);
    }
    out.blocking = end();
    return out;
}

SetOutcome ModelChecker::c_centralizer(std::vector<std::size_t> const& sigma)
{
    begin();
    SetOutcome out;
    for (std::size_t t = 0; t < U_.lower.size(); ++t) {
        Tri all = Tri::yes;
        for (auto s : sigma) all = k_and(all, cn(s, t));
        out.membership.push_back(all);
    }
    out.blocking = end();
    return out;
}

SetOutcome ModelChecker::c_center(std::vector<std::size_t> const& sigma)
{
    begin();
    SetOutcome out;
    out.membership.assign(U_.lower.size(), Tri::no);
    for (auto s : sigma) {
        Tri all = Tri::yes;
        for (auto t : sigma) all = k_and(all, cn(s, t));
        out.membership[s] = all;
    }
    out.blocking = end();
    return out;
}

Outcome ModelChecker::quasi_divisorial_detect(std::vector<std::size_t> const& I, std::vector<std::size_t> const& D,
                                              std::uint32_t d)
{
    if (d != 2) throw precondition_error("quasi-divisorial detection is implemented for d = 2");
    if (U_.lower.front().registry().field().d != 2)
        throw precondition_error("quasi-divisorial detection needs a universe over F(t, u)");
    auto const Iset = as_set(I), Dset = as_set(D);
    Tri acc = Tri::no;
    std::set<std::string> blocking;
    for (std::size_t s = 0; s < U_.lower.size(); ++s) {
        std::vector<Functional> single{U_.lower[s]};
        if (module_rank(single) != d - 1) continue;
        auto const ci = common_inertia({s});
        Tri cond = ci.value;
        blocking.insert(ci.blocking.begin(), ci.blocking.end());
        if (cond != Tri::no) {
            auto const dd = def_D(std::vector<std::size_t>{s});
            blocking.insert(dd.blocking.begin(), dd.blocking.end());
            cond = k_and(cond, set_equals(dd.membership, Dset));
        }
        if (cond != Tri::no) {
            auto const ii = def_I(Dset);
            blocking.insert(ii.blocking.begin(), ii.blocking.end());
            cond = k_and(cond, set_equals(ii.membership, Iset));
        }
        if (cond != Tri::no) {
            std::vector<Tri> span(U_.lower.size(), Tri::no);
            for (std::size_t t = 0; t < U_.lower.size(); ++t)
                if (submodule_member(U_.lower[t], single)) span[t] = Tri::yes;
            cond = k_and(cond, set_equals(span, Iset));
        }
        if (cond == Tri::yes) return {Tri::yes, "sigma1=" + U_.lower_names[s], {}};
        acc = k_or(acc, cond);
    }
    if (acc == Tri::no) return {Tri::no, "exhausted", {}};
    return {acc, "", std::vector<std::string>(blocking.begin(), blocking.end())};
}

TrdegEstimate ModelChecker::trdeg_estimate()
{
    std::vector<std::size_t> nonzero;
    for (std::size_t i = 0; i < U_.lower.size(); ++i)
        if (!U_.lower[i].is_zero()) nonzero.push_back(i);
    TrdegEstimate est;
    for (std::size_t r = 1; r <= nonzero.size(); ++r) {
        std::size_t blocked = 0;
        std::string found;
        // lexicographic r-subsets of `nonzero`
        std::vector<std::size_t> pick(r);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            std::vector<Functional> S;
            for (auto k : pick) S.push_back(U_.lower[nonzero[k]]);
            if (module_rank(S) == r) {
                begin();
                Tri cset = Tri::yes;
                for (std::size_t a = 0; a < r && cset != Tri::no; ++a)
                    for (std::size_t b = a + 1; b < r; ++b) cset = k_and(cset, cn(nonzero[pick[a]], nonzero[pick[b]]));
                end();
                if (cset == Tri::yes) {
                    for (auto k : pick) found += (found.empty() ? "" : ",") + U_.lower_names[nonzero[k]];
                    break;
                }
                if (cset == Tri::unknown) ++blocked;
            }
            std::size_t k = r;
            while (k > 0 && pick[k - 1] == nonzero.size() - r + k - 1) --k;
            if (k == 0) break;
            ++pick[k - 1];
            for (std::size_t m = k; m < r; ++m) pick[m] = pick[m - 1] + 1;
        }
        if (found.empty()) {
            est.blocked = blocked;
            break;
        }
        est.r = r;
        est.witness = found;
    }
    return est;
}

// ---------------------------------------------------------------- valuative subsets

FlagValuation associated_valuation(std::vector<Functional> const& sigma)
{
    if (sigma.empty()) throw precondition_error("associated valuation of an empty set");
    auto const& reg = sigma.front().registry();
    std::vector<FlagId> order(reg.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](FlagId a, FlagId b) { return reg.get(a).rank() > reg.get(b).rank(); });
    for (FlagId w : order) {
        auto const& flag = reg.get(w);
        bool const common = std::all_of(sigma.begin(), sigma.end(),
                                        [&](Functional const& s) { return structurally_inertial(s, flag); });
        if (!common) continue;
        std::size_t const r = flag.rank();
        std::vector<std::vector<Lambda>> kappas;
        for (auto const& s : sigma) {
            std::vector<Lambda> k(r, Lambda::zero(s.ell(), s.level()));
            for (std::size_t i = 1; i <= r; ++i)
                if (auto it = s.terms().find(reg.prefix(w, i)); it != s.terms().end()) k[i - 1] = it->second;
            kappas.push_back(std::move(k));
        }
        return coarsen(flag, max_convex_inside(r, kappas));
    }
    throw precondition_error("not valuative in registry: no registered flag has every element in its inertia");
}

TriBool h_membership_probe(BivRat const& t, std::vector<Functional> const& sigma, Budget const& budget)
{
    auto in_perp = [&](BivRat const& y) {
        return std::all_of(sigma.begin(), sigma.end(), [&](Functional const& s) { return eval(s, y).is_zero(); });
    };
    if (!in_perp(t)) return {Tri::no, t, "outside-orthogonal"};
    ElementStream stream(budget);
    while (auto x = stream.next()) {
        if (in_perp(*x)) continue;
        BivRat const diff = t - *x;
        if (diff.is_zero()) continue;
        if (!in_perp(diff / x->one_minus())) return {Tri::no, *x, "refuted"};
    }
    return {Tri::unknown, std::nullopt, "not-refuted"};
}

bool ground_truth_visible_inertia(Functional const& s, std::uint32_t ell)
{
    auto const& reg = s.registry();
    for (FlagId w = 0; w < reg.size(); ++w) {
        auto const& flag = reg.get(w);
        if (visibility(flag, reg.field().d, ell).visible() && structurally_inertial(s, flag)) return true;
    }
    return false;
}

}  // namespace minigal
