#include "minigal/valuations.hpp"

#include "minigal/error.hpp"

#include <algorithm>
#include <mutex>

namespace minigal {

bool LexVector::is_zero() const
{
    return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

bool LexVector::is_positive() const
{
    for (auto x : a)
        if (x != 0) return x > 0;
    return false;
}

LexVector LexVector::operator+(LexVector const& o) const
{
    if (rank() != o.rank()) throw precondition_error("adding value vectors of different rank");
    LexVector r = *this;
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
    return r;
}

LexVector LexVector::operator-(LexVector const& o) const
{
    if (rank() != o.rank()) throw precondition_error("subtracting value vectors of different rank");
    LexVector r = *this;
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] -= o.a[i];
    return r;
}

std::strong_ordering LexVector::operator<=>(LexVector const& o) const
{
    return std::lexicographical_compare_three_way(a.begin(), a.end(), o.a.begin(), o.a.end());
}

std::string to_string(LexVector const& v)
{
    std::string out = "(";
    for (std::size_t i = 0; i < v.a.size(); ++i) out += (i ? "," : "") + std::to_string(v.a[i]);
    return out + ")";
}

// ---------------------------------------------------------------- FlagValuation

FlagValuation::FlagValuation(Curve curve) : curve_(std::move(curve)) {}

FlagValuation::FlagValuation(Curve curve, GFElem point) : curve_(std::move(curve)), point_(std::move(point))
{
    if (!curve_->line)
        throw precondition_error("a second stage needs a line as first stage, got " + to_string(curve_->poly));
    if (point_->p() != curve_->poly.p()) throw level_mismatch("point of a different characteristic");
}

Curve const& FlagValuation::curve() const
{
    if (!curve_) throw precondition_error("the trivial valuation has no curve");
    return *curve_;
}

GFElem const& FlagValuation::point() const
{
    if (!point_) throw precondition_error("flag has no point stage");
    return *point_;
}

bool FlagValuation::is_prefix_of(FlagValuation const& w) const
{
    if (!curve_) return true;
    if (!w.curve_ || curve_->poly != w.curve_->poly) return false;
    if (!point_) return true;
    return w.point_ && *point_ == *w.point_;
}

bool FlagValuation::operator==(FlagValuation const& o) const
{
    return rank() == o.rank() && is_prefix_of(o);
}

std::string to_string(FlagValuation const& v)
{
    if (v.is_trivial()) return "[]";
    std::string out = "[curve \"" + to_string(v.curve().poly) + "\"";
    if (v.has_point()) out += ", point \"" + to_string(v.point()) + "\"";
    return out + "]";
}

namespace {

void require_nonzero(BivRat const& x)
{
    if (x.is_zero()) throw precondition_error("valuation of zero");
}

std::int64_t second_stage(FlagValuation const& v, BivRat const& x)
{
    BivRat const y = strip_curve(v.curve().poly, x);
    Line const& line = *v.curve().line;
    UniRat const r{restrict_poly(y.num(), line), restrict_poly(y.den(), line)};
    return order_at(r, v.point());
}

}  // namespace

LexVector flag_value(FlagValuation const& v, BivRat const& x)
{
    require_nonzero(x);
    LexVector out;
    if (v.rank() >= 1) out.a.push_back(curve_order(v.curve().poly, x));
    if (v.rank() >= 2) out.a.push_back(second_stage(v, x));
    return out;
}

std::int64_t flag_last_coordinate(FlagValuation const& v, BivRat const& x)
{
    require_nonzero(x);
    switch (v.rank()) {
    case 0:
        throw precondition_error("the trivial valuation has no coordinates");
    case 1:
        return curve_order(v.curve().poly, x);
    default:
        return second_stage(v, x);
    }
}

bool is_unit(FlagValuation const& v, BivRat const& x)
{
    return flag_value(v, x).is_zero();
}

bool is_principal_unit(FlagValuation const& v, BivRat const& x)
{
    require_nonzero(x);
    BivRat const y = x - BivRat(BivPoly(x.p(), 1));
    if (y.is_zero()) return true;
    return flag_value(v, y).is_positive();
}

FlagValuation coarsen(FlagValuation const& v, ConvexIndex c)
{
    if (c.j > v.rank())
        throw precondition_error("coarsening index " + std::to_string(c.j) + " exceeds rank " +
                                 std::to_string(v.rank()));
    if (c.j == 0) return FlagValuation();
    if (c.j == 1) return FlagValuation(v.curve());
    return v;
}

bool comparable(FlagValuation const& v, FlagValuation const& w)
{
    return v.is_prefix_of(w) || w.is_prefix_of(v);
}

ConvexIndex max_convex_inside(std::size_t r, std::vector<std::vector<Lambda>> const& kappas)
{
    for (auto const& k : kappas)
        if (k.size() != r) throw precondition_error("coordinate map of the wrong length");
    std::size_t jprime = 0;
    for (std::size_t k = r; k-- > 0;) {
        bool const vanishes =
            std::all_of(kappas.begin(), kappas.end(), [&](std::vector<Lambda> const& kap) { return kap[k].is_zero(); });
        if (!vanishes) break;
        ++jprime;
    }
    return ConvexIndex{r - jprime};
}

std::size_t ell_rank(FlagValuation const& v, std::uint32_t ell)
{
    // Z^r tensor Z/ell has dimension r for every ell.
    if (!is_prime(ell)) throw precondition_error("ell must be prime");
    return v.rank();
}

ConvexCensus convex_census(std::size_t r, std::uint32_t ell)
{
    // The convex subgroups of Z^r lex are H_j = 0^j x Z^(r-j). H_j is
    // ell-divisible iff each of its generators e_{j+1..r} is ell times an
    // element of H_j, i.e. has all coordinates divisible by ell.
    ConvexCensus c;
    c.convex_subgroups = r + 1;
    for (std::size_t j = 0; j < r; ++j) {
        bool divisible = true;
        for (std::size_t g = j; g < r; ++g) {
            std::vector<std::int64_t> e(r, 0);
            e[g] = 1;
            divisible = divisible && std::all_of(e.begin(), e.end(), [&](std::int64_t x) { return x % ell == 0; });
        }
        if (divisible) ++c.ell_divisible_nontrivial;
    }
    return c;
}

std::string to_string(QDClass const& c)
{
    switch (c.kind) {
    case QDKind::quasi_divisorial:
        return "quasi-divisorial";
    case QDKind::almost_quasi_divisorial:
        return "almost-" + std::to_string(c.r) + "-quasi-divisorial";
    case QDKind::neither:
        break;
    }
    return "neither";
}

QDClass classify_quasi_divisorial(FlagValuation const& v, std::uint32_t d, std::uint32_t ell)
{
    if (d < 1 || d > 2) throw precondition_error("transcendence degree must be 1 or 2");
    std::size_t const r = v.rank();
    if (r > d)
        throw precondition_error("rank " + std::to_string(r) + " exceeds transcendence degree " + std::to_string(d));
    if (r == 0) return {QDKind::neither, 0};
    if (convex_census(r, ell).ell_divisible_nontrivial != 0) return {QDKind::neither, 0};
    // residue transcendence degree is d - r, so there is no defect
    if (r == 1) return {QDKind::quasi_divisorial, 1};
    return {QDKind::almost_quasi_divisorial, r};
}

Visibility visibility(FlagValuation const& v, std::uint32_t d, std::uint32_t ell)
{
    Visibility vis;
    if (v.is_trivial()) return vis;
    vis.v1 = convex_census(v.rank(), ell).ell_divisible_nontrivial == 0;
    vis.v2 = v.rank() < d;
    vis.v3 = classify_quasi_divisorial(v, d, ell).kind == QDKind::quasi_divisorial;
    return vis;
}

// ---------------------------------------------------------------- FlagRegistry

FlagId FlagRegistry::add(FlagValuation const& v)
{
    if (v.is_trivial()) throw precondition_error("the trivial valuation is not registered");
    if (field_.d == 1 && v.rank() > 1) throw precondition_error("flags on F(t) have rank 1");
    if (v.curve().poly.p() != field_.p) throw level_mismatch("flag over a different characteristic");
    if (field_.d == 1 && v.curve().poly.degree_u() != 0)
        throw precondition_error("flag on F(t) mentions u: " + to_string(v));
    std::optional<FlagId> parent;
    if (v.rank() == 2) parent = add(coarsen(v, {1}));
    if (auto id = find(v)) return *id;
    std::unique_lock lock(mutex_);
    for (FlagId i = 0; i < entries_.size(); ++i)
        if (entries_[i].flag == v) return i;
    entries_.push_back({v, parent});
    return static_cast<FlagId>(entries_.size() - 1);
}

std::optional<FlagId> FlagRegistry::find(FlagValuation const& v) const
{
    std::shared_lock lock(mutex_);
    for (FlagId i = 0; i < entries_.size(); ++i)
        if (entries_[i].flag == v) return i;
    return std::nullopt;
}

FlagValuation const& FlagRegistry::get(FlagId id) const
{
    std::shared_lock lock(mutex_);
    if (id >= entries_.size()) throw precondition_error("unknown flag id " + std::to_string(id));
    return entries_[id].flag;
}

std::optional<FlagId> FlagRegistry::parent(FlagId id) const
{
    std::shared_lock lock(mutex_);
    if (id >= entries_.size()) throw precondition_error("unknown flag id " + std::to_string(id));
    return entries_[id].parent;
}

std::size_t FlagRegistry::size() const
{
    std::shared_lock lock(mutex_);
    return entries_.size();
}

FlagId FlagRegistry::prefix(FlagId id, std::size_t j) const
{
    auto const r = get(id).rank();
    if (j == 0 || j > r) throw precondition_error("prefix rank out of range");
    while (j < get(id).rank()) id = *parent(id);
    return id;
}

bool FlagRegistry::is_prefix(FlagId a, FlagId b) const
{
    auto const ra = get(a).rank(), rb = get(b).rank();
    if (ra > rb) return false;
    return prefix(b, ra) == a;
}

std::vector<BivPoly> FlagRegistry::curves() const
{
    std::shared_lock lock(mutex_);
    std::vector<BivPoly> out;
    for (auto const& e : entries_) {
        auto const& f = e.flag.curve().poly;
        if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    }
    return out;
}

std::vector<BivPoly> FlagRegistry::search_polys() const
{
    auto out = curves();
    std::shared_lock lock(mutex_);
    for (auto const& e : entries_) {
        if (!e.flag.has_point()) continue;
        auto const& line = *e.flag.curve().line;
        auto const p = field_.p;
        BivPoly const param = line.vertical ? BivPoly::u(p) : BivPoly::t(p);
        auto f = param - BivPoly::constant(e.flag.point());
        if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    }
    return out;
}

}  // namespace minigal
