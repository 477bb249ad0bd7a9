#pragma once

// Characters K^x -> Lambda_m in normal form: finite Lambda_m-combinations of
// the lex coordinates of registered flags. Evaluation, projection and lifts,
// membership in inertia and decomposition groups, residue functionals, and
// module rank over Lambda_n.

#include "minigal/coeff.hpp"
#include "minigal/funcfield.hpp"
#include "minigal/valuations.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>

namespace minigal {

enum class Tri { yes, no, unknown };

std::string to_string(Tri t);

/// Three-valued answer. A yes/no carries a field element or a certificate
/// tag that can be re-checked.
struct TriBool {
    Tri value = Tri::unknown;
    std::optional<BivRat> element;
    std::string certificate;

    bool is_yes() const { return value == Tri::yes; }
    bool is_no() const { return value == Tri::no; }
    bool decisive() const { return value != Tri::unknown; }
};

/// An element of Hom(K^x, Lambda_m) in normal form. The coordinate i of a
/// flag is keyed by the id of its rank-i prefix, so two functionals are equal
/// iff their term maps are. Zero coefficients are never stored.
class Functional {
public:
    Functional(FlagRegistry const& registry, std::uint32_t ell, std::uint32_t level);

    // c times coordinate i (1-based) of a registered flag.
    static Functional coordinate(FlagRegistry const& registry, FlagId flag, std::size_t i, Lambda const& c);

    Functional& add_term(FlagId flag, std::size_t i, Lambda const& c);

    FlagRegistry const& registry() const { return *registry_; }
    std::uint32_t ell() const { return ell_; }
    std::uint32_t level() const { return level_; }
    std::map<FlagId, Lambda> const& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Functional operator+(Functional const& o) const;
    Functional operator-(Functional const& o) const;
    Functional operator-() const;
    Functional scaled(Lambda const& a) const;

    bool operator==(Functional const& o) const;
    // Total order on (ell, level, terms) for use as a map key.
    bool operator<(Functional const& o) const;

private:
    void check_compatible(Functional const& o) const;
    void put(FlagId key, Lambda const& c);

    FlagRegistry const* registry_;
    std::uint32_t ell_;
    std::uint32_t level_;
    std::map<FlagId, Lambda> terms_;
};

// "level=1 terms=[(flag#0, 1, 1), (flag#1, 2, 1)]" with the flag id of each
// key's coordinate owner.
std::string to_string(Functional const& s);

Lambda eval(Functional const& s, BivRat const& x);

Functional project(Functional const& s, std::uint32_t n);
Functional lift(Functional const& s, std::uint32_t m);

// Budget with the registry's curves added to the standard pool.
Budget default_budget(FlagRegistry const& registry);

// Every term on a coarsening of v (resp. on a flag comparable to v). On
// normal forms the first is exactly membership in I_v.
bool structurally_inertial(Functional const& s, FlagValuation const& v);
bool structurally_decomposed(Functional const& s, FlagValuation const& v);

TriBool in_inertia(Functional const& s, FlagValuation const& v, Budget const& budget);
TriBool in_inertia(Functional const& s, FlagValuation const& v);
TriBool in_decomposition(Functional const& s, FlagValuation const& v, Budget const& budget);
TriBool in_decomposition(Functional const& s, FlagValuation const& v);

// The image of s in Hom(Kv^x, Lambda_m) for a rank-1 line flag v, as a
// functional on `residue` (a registry over F(t) whose variable is the line's
// parameter). Point flags are registered there as needed.
Functional residue_functional(Functional const& s, FlagValuation const& v, FlagRegistry& residue);

// The residue of x along a line, as an element of F(t) in the line's parameter.
BivRat residue_element(BivRat const& x, FlagValuation const& v);

// dim over Z/ell of M / ell M for M the span of S.
std::size_t module_rank(std::span<Functional const> S);
bool submodule_member(Functional const& t, std::span<Functional const> S);

}  // namespace minigal
