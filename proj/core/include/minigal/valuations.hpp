#pragma once

// Flag valuations on F̄_p(t) and F̄_p(t, u): value groups Z^r ordered
// lexicographically, evaluation, units, coarsening, comparability, the
// convex-subgroup lattice, and quasi-divisorial bookkeeping.

#include "minigal/coeff.hpp"
#include "minigal/funcfield.hpp"

#include <compare>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace minigal {

/// An element of Z^r with the lexicographic order, first coordinate dominant.
struct LexVector {
    std::vector<std::int64_t> a;

    std::size_t rank() const { return a.size(); }
    bool is_zero() const;
    bool is_positive() const;  // > 0 in the lex order

    LexVector operator+(LexVector const& o) const;
    LexVector operator-(LexVector const& o) const;
    bool operator==(LexVector const&) const = default;
    std::strong_ordering operator<=>(LexVector const& o) const;
};

std::string to_string(LexVector const& v);

/// The valuation of a flag (curve, point): rank 0 (trivial), rank 1 (order
/// along a prime divisor) or rank 2 (order along a line, then order of the
/// residue at a point of the line, measured in the line's parameter).
class FlagValuation {
public:
    FlagValuation() = default;
    explicit FlagValuation(Curve curve);
    FlagValuation(Curve curve, GFElem point);

    std::size_t rank() const { return curve_ ? (point_ ? 2 : 1) : 0; }
    bool is_trivial() const { return !curve_; }
    Curve const& curve() const;
    GFElem const& point() const;
    bool has_point() const { return point_.has_value(); }

    // Stage-prefix order: this is a coarsening of w.
    bool is_prefix_of(FlagValuation const& w) const;

    bool operator==(FlagValuation const& o) const;

private:
    std::optional<Curve> curve_;
    std::optional<GFElem> point_;
};

// "[curve \"u\", point \"0\"]" style description.
std::string to_string(FlagValuation const& v);

LexVector flag_value(FlagValuation const& v, BivRat const& x);
// Last coordinate of flag_value, computed without the earlier ones where possible.
std::int64_t flag_last_coordinate(FlagValuation const& v, BivRat const& x);

bool is_unit(FlagValuation const& v, BivRat const& x);
bool is_principal_unit(FlagValuation const& v, BivRat const& x);

/// j in [0, r]: the convex subgroup 0^j x Z^(r-j) of Z^r, equivalently the
/// coarsening keeping the first j stages.
struct ConvexIndex {
    std::size_t j = 0;
    bool operator==(ConvexIndex const&) const = default;
};

FlagValuation coarsen(FlagValuation const& v, ConvexIndex c);
bool comparable(FlagValuation const& v, FlagValuation const& w);

// H = { z in Z^r : kappa_i(z) = 0 in Lambda_n }. Returns the coarsening index
// of the largest convex subgroup contained in H.
ConvexIndex max_convex_inside(std::size_t r, std::vector<std::vector<Lambda>> const& kappas);

std::size_t ell_rank(FlagValuation const& v, std::uint32_t ell);

// Number of convex subgroups of Z^r lex and how many of the nontrivial ones
// are ell-divisible (computed, not assumed).
struct ConvexCensus {
    std::size_t convex_subgroups = 0;
    std::size_t ell_divisible_nontrivial = 0;
};
ConvexCensus convex_census(std::size_t r, std::uint32_t ell);

enum class QDKind { quasi_divisorial, almost_quasi_divisorial, neither };

struct QDClass {
    QDKind kind = QDKind::neither;
    std::size_t r = 0;  // rank for almost-r-quasi-divisorial
    bool operator==(QDClass const&) const = default;
};

std::string to_string(QDClass const& c);

QDClass classify_quasi_divisorial(FlagValuation const& v, std::uint32_t d, std::uint32_t ell = 2);

/// Visibility of a registered flag: V1 from the convex census, V2 from the
/// residue transcendence degree (the residue Galois group is a C-set exactly
/// when the residue field is algebraic over F̄_p, i.e. rank = d), V3 from the
/// fact that quasi-divisorial valuations are visible.
struct Visibility {
    bool v1 = false;
    bool v2 = false;
    bool v3 = false;
    bool visible() const { return v1 && v2 && v3; }
};

Visibility visibility(FlagValuation const& v, std::uint32_t d, std::uint32_t ell);

using FlagId = std::uint32_t;

/// Append-only table of flags over one field. Registering a flag registers
/// its coarsenings first, so every prefix has an id smaller than the flag.
/// Reads take a shared lock; registration a unique one.
class FlagRegistry {
public:
    explicit FlagRegistry(FieldSpec field) : field_(field) {}

    FieldSpec const& field() const { return field_; }

    FlagId add(FlagValuation const& v);
    std::optional<FlagId> find(FlagValuation const& v) const;
    FlagValuation const& get(FlagId id) const;
    std::optional<FlagId> parent(FlagId id) const;
    std::size_t size() const;

    // Id of the rank-j coarsening of a registered flag (j >= 1).
    FlagId prefix(FlagId id, std::size_t j) const;
    bool is_prefix(FlagId a, FlagId b) const;
    bool comparable(FlagId a, FlagId b) const { return is_prefix(a, b) || is_prefix(b, a); }

    // Distinct curve polynomials in registration order.
    std::vector<BivPoly> curves() const;
    // curves(), then the parameter minus the point of each rank-2 flag, so a
    // search pool can reach elements with a zero at every registered point.
    std::vector<BivPoly> search_polys() const;

private:
    struct Entry {
        FlagValuation flag;
        std::optional<FlagId> parent;
    };
    FieldSpec field_;
    mutable std::shared_mutex mutex_;
    std::deque<Entry> entries_;
};

}  // namespace minigal
