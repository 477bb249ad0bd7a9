#pragma once

// Exact arithmetic in the algebraic closure of a prime field, realized as a
// tower of finite fields F_{p^e} with deterministic defining polynomials and
// compatible embeddings.
//
// Defining polynomial of F_{p^e}: the lexicographically smallest monic
// irreducible of degree e over F_p, coefficient vectors (c_0, ..., c_{e-1})
// compared with c_0 most significant. Embeddings F_{p^d} -> F_{p^E} are fixed
// once per pair and chosen so that every triangle d | d' | E commutes.
//
// GFElem values always live in their minimal subfield.

#include "minigal/coeff.hpp"

#include <boost/container/small_vector.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace minigal {

using Coords = boost::container::small_vector<std::uint32_t, 2>;

/// An element of a specific field F_{p^degree} in its power basis; unlike
/// GFElem this is not normalized, it is the image in a chosen field.
struct FieldVector {
    std::uint32_t p = 0;
    std::uint32_t degree = 0;
    Coords coords;

    bool operator==(FieldVector const&) const = default;
};

class GFElem {
public:
    GFElem() = default;
    // An element of the prime field.
    GFElem(std::uint32_t p, std::int64_t value);

    // The registered generator of F_{p^e} (the class of X modulo the
    // defining polynomial). For e = 1 this is 0.
    static GFElem generator(std::uint32_t p, std::uint32_t e);
    static GFElem from_vector(FieldVector const& v);

    std::uint32_t p() const { return p_; }
    std::uint32_t degree() const { return degree_; }
    Coords const& coords() const { return coords_; }
    bool valid() const { return p_ != 0; }

    bool is_zero() const;
    bool is_one() const;
    // Value of a prime-field element in [0, p); throws otherwise.
    std::uint32_t prime_value() const;

    GFElem operator+(GFElem const& o) const;
    GFElem operator-(GFElem const& o) const;
    GFElem operator*(GFElem const& o) const;
    GFElem operator/(GFElem const& o) const;
    GFElem operator-() const;
    GFElem& operator+=(GFElem const& o) { return *this = *this + o; }
    GFElem& operator-=(GFElem const& o) { return *this = *this - o; }
    GFElem& operator*=(GFElem const& o) { return *this = *this * o; }

    GFElem inverse() const;
    GFElem pow(BigInt const& exponent) const;

    // Multiplicative order of a nonzero element.
    BigInt multiplicative_order() const;

    bool operator==(GFElem const& o) const = default;
    // Total order: by degree, then coordinates low-degree first.
    std::strong_ordering operator<=>(GFElem const& o) const;

private:
    friend class FieldTower;
    GFElem(std::uint32_t p, std::uint32_t degree, Coords coords)
        : p_(p), degree_(degree), coords_(std::move(coords)) {}

    std::uint32_t p_ = 0;
    std::uint32_t degree_ = 0;
    Coords coords_;
};

// Generator notation: prime-field elements print as integers, others as a
// polynomial in g<e>, e.g. "2*g2+1".
std::string to_string(GFElem const& x);
std::ostream& operator<<(std::ostream& os, GFElem const& x);

enum class GFOp { add, mul, neg, inv };

// Dispatcher over the field operations; y is required for add and mul.
GFElem gf_arith(GFOp op, GFElem const& x, GFElem const* y = nullptr);

// Image of x under the registered embedding into F_{p^e2}; deg(x) must divide e2.
FieldVector gf_embed(GFElem const& x, std::uint32_t e2);
// Same for an element already given in some field F_{p^d}, d | e2.
FieldVector gf_embed(FieldVector const& x, std::uint32_t e2);

/// Complete root multiset over the algebraic closure of a nonzero univariate
/// polynomial (coefficients low to high). Roots are sorted by GFElem order;
/// multiplicities sum to the degree.
std::vector<std::pair<GFElem, unsigned>> poly_roots(std::span<GFElem const> coeffs);

namespace detail {
class ExtRing;
}

/// Per-characteristic registry of defining polynomials and embeddings.
/// Shared process-wide; lookups take a shared lock, construction of new
/// entries a unique one.
class FieldTower {
public:
    static FieldTower& of(std::uint32_t p);

    std::uint32_t p() const { return p_; }

    // Monic, coefficients low to high, length e + 1.
    std::vector<std::uint32_t> defining_polynomial(std::uint32_t e);

    detail::ExtRing const& ring(std::uint32_t e);

    FieldVector embed(FieldVector const& x, std::uint32_t e2);
    GFElem normalize(FieldVector const& x);

    // Image of the generator of F_{p^d} in F_{p^E}.
    Coords generator_image(std::uint32_t d, std::uint32_t E);

    explicit FieldTower(std::uint32_t p);
    ~FieldTower();
    FieldTower(FieldTower const&) = delete;
    FieldTower& operator=(FieldTower const&) = delete;

private:
    struct Embedding {
        std::vector<Coords> columns;          // images of a_d^j, j < d, in F_E
        std::vector<std::uint32_t> rows;      // d rows of columns forming an invertible block
        std::vector<std::vector<std::uint32_t>> block_inverse;
    };

    Embedding const& embedding(std::uint32_t d, std::uint32_t E);
    Embedding build_embedding(std::uint32_t d, std::uint32_t E);
    Coords compute_generator_image(std::uint32_t d, std::uint32_t E);
    std::vector<std::uint32_t> find_defining_polynomial(std::uint32_t e) const;

    std::uint32_t p_;
    std::shared_mutex mutex_;
    std::map<std::uint32_t, std::unique_ptr<detail::ExtRing>> rings_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, Coords> generator_images_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<Embedding>> embeddings_;
};

}  // namespace minigal
