#pragma once

// Internal: arithmetic in a single finite field F_{p^e} given by a monic
// defining polynomial, and dense univariate polynomials over such a field.
// Elements are coordinate vectors in the power basis 1, a, ..., a^{e-1}.

#include "minigal/coeff.hpp"
#include "minigal/gf.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace minigal::detail {

class ExtRing {
public:
    using Elem = Coords;

    ExtRing(std::uint32_t p, std::vector<std::uint32_t> modulus);

    std::uint32_t p() const { return p_; }
    std::uint32_t degree() const { return e_; }
    BigInt order() const;  // p^e
    std::vector<std::uint32_t> const& modulus() const { return modulus_; }

    Elem zero() const { return Elem(e_, 0); }
    Elem one() const;
    Elem constant(std::uint32_t c) const;
    // The generator a (the class of X); for e = 1 this is the root of X, i.e. 0.
    Elem generator() const;

    bool is_zero(Elem const& a) const;
    Elem add(Elem const& a, Elem const& b) const;
    Elem sub(Elem const& a, Elem const& b) const;
    Elem neg(Elem const& a) const;
    Elem mul(Elem const& a, Elem const& b) const;
    Elem scale(Elem const& a, std::uint32_t c) const;
    Elem pow(Elem const& a, BigInt const& exponent) const;
    Elem inv(Elem const& a) const;
    // x -> x^p is F_p-linear: one matrix-vector product
    Elem frobenius(Elem const& a) const;
    Elem frobenius(Elem a, std::uint32_t times) const;

private:
    std::uint32_t p_;
    std::uint32_t e_;
    std::vector<std::uint32_t> modulus_;  // monic, length e + 1, low to high
    std::vector<Elem> frob_;              // (a^j)^p for j < e
};

// Dense polynomial over an ExtRing, coefficients low to high, no trailing zeros.
using RPoly = std::vector<Coords>;

class PolyOps {
public:
    explicit PolyOps(ExtRing const& ring) : r_(ring) {}

    ExtRing const& ring() const { return r_; }

    void trim(RPoly& f) const;
    int deg(RPoly const& f) const { return static_cast<int>(f.size()) - 1; }
    RPoly x() const { return {r_.zero(), r_.one()}; }
    RPoly constant(Coords const& c) const;

    RPoly add(RPoly const& f, RPoly const& g) const;
    RPoly sub(RPoly const& f, RPoly const& g) const;
    RPoly mul(RPoly const& f, RPoly const& g) const;
    // Quotient and remainder; g must be nonzero.
    std::pair<RPoly, RPoly> divmod(RPoly const& f, RPoly const& g) const;
    RPoly rem(RPoly const& f, RPoly const& g) const { return divmod(f, g).second; }
    RPoly monic(RPoly const& f) const;
    RPoly gcd(RPoly f, RPoly g) const;
    RPoly powmod(RPoly const& base, BigInt const& exponent, RPoly const& mod) const;

    // Distinct roots in this field of an arbitrary nonzero polynomial,
    // sorted by coordinate vector. Deterministic.
    std::vector<Coords> roots(RPoly const& f) const;

    // Roots of a monic squarefree polynomial splitting into linear factors.
    std::vector<Coords> split_linear(RPoly const& g) const;

private:
    ExtRing const& r_;
};

// Lex order on coordinate vectors, low-degree coordinate first.
bool coords_less(Coords const& a, Coords const& b);

// Rabin's irreducibility test over F_p; f is monic, low to high.
bool is_irreducible_fp(std::uint32_t p, std::vector<std::uint32_t> const& f);

}  // namespace minigal::detail
