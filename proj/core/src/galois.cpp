#include "minigal/galois.hpp"

#include "minigal/error.hpp"
#include "minigal/linalg.hpp"

#include <algorithm>
#include <set>

namespace minigal {

std::string to_string(Tri t)
{
    switch (t) {
    case Tri::yes:
        return "yes";
    case Tri::no:
        return "no";
    case Tri::unknown:
        break;
    }
    return "unknown";
}

// ---------------------------------------------------------------- Functional

Functional::Functional(FlagRegistry const& registry, std::uint32_t ell, std::uint32_t level)
    : registry_(&registry), ell_(ell), level_(level)
{
    lambda_modulus(ell, level);  // validates
}

Functional Functional::coordinate(FlagRegistry const& registry, FlagId flag, std::size_t i, Lambda const& c)
{
    Functional s(registry, c.ell(), c.level());
    s.add_term(flag, i, c);
    return s;
}

Functional& Functional::add_term(FlagId flag, std::size_t i, Lambda const& c)
{
    if (c.ell() != ell_ || c.level() != level_) throw level_mismatch("coefficient at a different level");
    auto const r = registry_->get(flag).rank();
    if (i < 1 || i > r)
        throw precondition_error("coordinate " + std::to_string(i) + " of a rank-" + std::to_string(r) + " flag");
    put(registry_->prefix(flag, i), c);
    return *this;
}

void Functional::put(FlagId key, Lambda const& c)
{
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        if (!c.is_zero()) terms_.emplace(key, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

void Functional::check_compatible(Functional const& o) const
{
    if (ell_ != o.ell_ || level_ != o.level_) throw level_mismatch("functionals at different levels");
    if (registry_ != o.registry_) throw precondition_error("functionals over different flag registries");
}

Functional Functional::operator+(Functional const& o) const
{
    check_compatible(o);
    Functional r = *this;
    for (auto const& [k, c] : o.terms_) r.put(k, c);
    return r;
}

Functional Functional::operator-(Functional const& o) const
{
    return *this + (-o);
}

Functional Functional::operator-() const
{
    Functional r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

Functional Functional::scaled(Lambda const& a) const
{
    if (a.ell() != ell_ || a.level() != level_) throw level_mismatch("scalar at a different level");
    Functional r(*registry_, ell_, level_);
    for (auto const& [k, c] : terms_) r.put(k, c * a);
    return r;
}

bool Functional::operator==(Functional const& o) const
{
    return registry_ == o.registry_ && ell_ == o.ell_ && level_ == o.level_ && terms_ == o.terms_;
}

bool Functional::operator<(Functional const& o) const
{
    if (ell_ != o.ell_) return ell_ < o.ell_;
    if (level_ != o.level_) return level_ < o.level_;
    return terms_ < o.terms_;
}

std::string to_string(Functional const& s)
{
    std::string out = "level=" + std::to_string(s.level()) + " terms=[";
    bool first = true;
    for (auto const& [k, c] : s.terms()) {
        if (!first) out += ", ";
        first = false;
        out += "(flag#" + std::to_string(k) + ", " + std::to_string(s.registry().get(k).rank()) + ", " +
               std::to_string(c.residue()) + ")";
    }
    return out + "]";
}

Lambda eval(Functional const& s, BivRat const& x)
{
    if (x.is_zero()) throw precondition_error("characters are evaluated on nonzero elements");
    std::uint64_t const mod = lambda_modulus(s.ell(), s.level());
    Lambda acc = Lambda::zero(s.ell(), s.level());
    for (auto const& [k, c] : s.terms()) {
        std::int64_t const coord = flag_last_coordinate(s.registry().get(k), x);
        acc += c * Lambda(s.ell(), s.level(), coord % static_cast<std::int64_t>(mod));
    }
    return acc;
}

Functional project(Functional const& s, std::uint32_t n)
{
    if (n > s.level()) throw precondition_error("projection to a higher level");
    Functional r(s.registry(), s.ell(), n);
    for (auto const& [k, c] : s.terms()) {
        auto const a = lambda_project(c, n);
        if (!a.is_zero()) r.add_term(k, s.registry().get(k).rank(), a);
    }
    return r;
}

Functional lift(Functional const& s, std::uint32_t m)
{
    if (m < s.level()) throw precondition_error("lift to a lower level");
    Functional r(s.registry(), s.ell(), m);
    for (auto const& [k, c] : s.terms()) r.add_term(k, s.registry().get(k).rank(), lambda_lift(c, m));
    return r;
}

Budget default_budget(FlagRegistry const& registry)
{
    return Budget::standard(registry.field(), registry.search_polys());
}

// ---------------------------------------------------------------- membership

namespace {

enum class Relation { prefix, refinement, incomparable };

Relation relation(FlagValuation const& w, FlagValuation const& v)
{
    if (w.is_prefix_of(v)) return Relation::prefix;
    if (v.is_prefix_of(w)) return Relation::refinement;
    return Relation::incomparable;
}

struct TermCensus {
    bool any_refinement = false;
    bool any_incomparable = false;
};

TermCensus census(Functional const& s, FlagValuation const& v)
{
    if (v.is_trivial()) throw precondition_error("membership for the trivial valuation");
    TermCensus c;
    for (auto const& [k, coeff] : s.terms()) {
        switch (relation(s.registry().get(k), v)) {
        case Relation::prefix:
            break;
        case Relation::refinement:
            c.any_refinement = true;
            break;
        case Relation::incomparable:
            c.any_incomparable = true;
            break;
        }
    }
    return c;
}

BivRat one_plus(BivRat const& y)
{
    return y + BivRat(BivPoly(y.p(), 1));
}

// First x in the stream (checking y, then 1 + y when v(y) > 0) accepted by
// `wanted` with eval(s, x) != 0.
template <class Pred>
std::optional<BivRat> search(Functional const& s, FlagValuation const& v, Budget const& budget, Pred wanted)
{
    ElementStream stream(budget);
    while (auto y = stream.next()) {
        if (wanted(*y) && !eval(s, *y).is_zero()) return *y;
        if (flag_value(v, *y).is_positive()) {
            BivRat x = one_plus(*y);
            if (!eval(s, x).is_zero()) return x;
        }
    }
    return std::nullopt;
}

}  // namespace

bool structurally_inertial(Functional const& s, FlagValuation const& v)
{
    auto const c = census(s, v);
    return !c.any_refinement && !c.any_incomparable;
}

bool structurally_decomposed(Functional const& s, FlagValuation const& v)
{
    return !census(s, v).any_incomparable;
}

TriBool in_inertia(Functional const& s, FlagValuation const& v, Budget const& budget)
{
    auto const c = census(s, v);
    if (!c.any_refinement && !c.any_incomparable) return {Tri::yes, std::nullopt, "prefix"};
    if (!c.any_incomparable) {
        // v has rank 1 along a line; the parameter minus a refining point is
        // a unit of v seen only by that point's coordinate.
        Line const& line = *v.curve().line;
        std::uint32_t const p = s.registry().field().p;
        BivPoly const param = line.vertical ? BivPoly::u(p) : BivPoly::t(p);
        for (auto const& [k, coeff] : s.terms()) {
            auto const& w = s.registry().get(k);
            if (relation(w, v) != Relation::refinement) continue;
            BivRat x(param - BivPoly::constant(w.point()));
            if (!eval(s, x).is_zero()) return {Tri::no, x, "refinement"};
        }
        throw error("internal: no refinement witness for " + to_string(s));
    }
    if (auto x = search(s, v, budget, [&](BivRat const& y) { return is_unit(v, y); }))
        return {Tri::no, *x, "search"};
    return {};
}

TriBool in_inertia(Functional const& s, FlagValuation const& v)
{
    return in_inertia(s, v, default_budget(s.registry()));
}

TriBool in_decomposition(Functional const& s, FlagValuation const& v, Budget const& budget)
{
    auto const c = census(s, v);
    if (!c.any_incomparable) return {Tri::yes, std::nullopt, "comparable"};
    if (auto x = search(s, v, budget, [&](BivRat const& y) { return is_principal_unit(v, y); }))
        return {Tri::no, *x, "search"};
    return {};
}

TriBool in_decomposition(Functional const& s, FlagValuation const& v)
{
    return in_decomposition(s, v, default_budget(s.registry()));
}

// ---------------------------------------------------------------- residues

namespace {

void require_residue_setup(FlagValuation const& v, FlagRegistry const& residue, std::uint32_t p)
{
    if (v.rank() != 1 || !v.curve().line)
        throw precondition_error("residue functionals need a rank-1 flag along a line, got " + to_string(v));
    if (residue.field().d != 1 || residue.field().p != p)
        throw precondition_error("residue registry must be over F(t) of the same characteristic");
}

BivRat uni_to_t(UniRat const& r, std::uint32_t p)
{
    auto conv = [p](UniPoly const& f) {
        BivPoly out(p);
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!f[i].is_zero()) out = out + BivPoly::monomial(f[i], static_cast<std::uint32_t>(i), 0);
        return out;
    };
    return BivRat(conv(r.num), conv(r.den));
}

}  // namespace

Functional residue_functional(Functional const& s, FlagValuation const& v, FlagRegistry& residue)
{
    std::uint32_t const p = s.registry().field().p;
    require_residue_setup(v, residue, p);
    Functional out(residue, s.ell(), s.level());
    for (auto const& [k, c] : s.terms()) {
        auto const& w = s.registry().get(k);
        switch (relation(w, v)) {
        case Relation::prefix:
            break;
        case Relation::refinement: {
            BivPoly const point = BivPoly::t(p) - BivPoly::constant(w.point());
            FlagId const id = residue.add(FlagValuation(Curve::make(point, false, 1)));
            out.add_term(id, 1, c);
            break;
        }
        case Relation::incomparable:
            throw precondition_error("term on " + to_string(w) + " is incomparable to " + to_string(v));
        }
    }
    return out;
}

BivRat residue_element(BivRat const& x, FlagValuation const& v)
{
    if (v.rank() != 1 || !v.curve().line)
        throw precondition_error("residues are taken along rank-1 line flags, got " + to_string(v));
    return uni_to_t(restrict_to_curve(x, v.curve().poly), x.p());
}

// ---------------------------------------------------------------- module rank

namespace {

ModMatrix coefficient_matrix(std::span<Functional const> S, Functional const* extra, std::vector<std::uint64_t>* b)
{
    std::uint32_t const ell = extra ? extra->ell() : S.front().ell();
    std::uint32_t const level = extra ? extra->level() : S.front().level();
    std::set<FlagId> keys;
    for (auto const& s : S) {
        if (s.ell() != ell || s.level() != level) throw level_mismatch("functionals at different levels");
        for (auto const& [k, c] : s.terms()) keys.insert(k);
    }
    if (extra)
        for (auto const& [k, c] : extra->terms()) keys.insert(k);
    std::vector<FlagId> const rows(keys.begin(), keys.end());
    auto row_of = [&](FlagId k) {
        return static_cast<std::size_t>(std::lower_bound(rows.begin(), rows.end(), k) - rows.begin());
    };
    ModMatrix m(ell, level, rows.size(), S.size());
    for (std::size_t j = 0; j < S.size(); ++j)
        for (auto const& [k, c] : S[j].terms()) m.at(row_of(k), j) = c.residue();
    if (b) {
        b->assign(rows.size(), 0);
        for (auto const& [k, c] : extra->terms()) (*b)[row_of(k)] = c.residue();
    }
    return m;
}

}  // namespace

std::size_t module_rank(std::span<Functional const> S)
{
    if (S.empty()) return 0;
    return column_module_rank(coefficient_matrix(S, nullptr, nullptr));
}

bool submodule_member(Functional const& t, std::span<Functional const> S)
{
    if (S.empty()) return t.is_zero();
    std::vector<std::uint64_t> b;
    auto const m = coefficient_matrix(S, &t, &b);
    return in_column_span(m, b);
}

}  // namespace minigal
