#pragma once

// Coefficient rings Lambda_m = Z/ell^m, the projections and canonical
// lifts between levels, the auxiliary constants M_r, N, R, and the
// cancellation principle.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>

namespace minigal {

using BigInt = boost::multiprecision::cpp_int;

bool is_prime(std::uint64_t n);

// ell^level, checked to fit comfortably in 62 bits.
std::uint64_t lambda_modulus(std::uint32_t ell, std::uint32_t level);

// ell-adic valuation of a residue modulo ell^level (level if zero).
std::uint32_t ell_valuation(std::uint64_t residue, std::uint32_t ell, std::uint32_t level);

/// An element of Z/ell^level. Immutable; arithmetic requires matching
/// (ell, level) and throws level_mismatch otherwise.
class Lambda {
public:
    Lambda(std::uint32_t ell, std::uint32_t level, std::int64_t value);

    static Lambda zero(std::uint32_t ell, std::uint32_t level) { return {ell, level, 0}; }
    static Lambda from_residue(std::uint32_t ell, std::uint32_t level, std::uint64_t residue);

    std::uint32_t ell() const { return ell_; }
    std::uint32_t level() const { return level_; }
    std::uint64_t residue() const { return residue_; }
    std::uint64_t modulus() const { return modulus_; }

    bool is_zero() const { return residue_ == 0; }
    bool is_unit() const { return residue_ % ell_ != 0; }
    std::uint32_t valuation() const { return ell_valuation(residue_, ell_, level_); }

    Lambda operator+(Lambda const& o) const;
    Lambda operator-(Lambda const& o) const;
    Lambda operator*(Lambda const& o) const;
    Lambda operator-() const;
    Lambda& operator+=(Lambda const& o) { return *this = *this + o; }
    Lambda& operator*=(Lambda const& o) { return *this = *this * o; }

    bool operator==(Lambda const& o) const = default;
    std::strong_ordering operator<=>(Lambda const& o) const = default;

private:
    void check_same_ring(Lambda const& o) const;

    std::uint32_t ell_;
    std::uint32_t level_;
    std::uint64_t modulus_;
    std::uint64_t residue_;
};

std::ostream& operator<<(std::ostream& os, Lambda const& a);

// a mod ell^n, as an element of level n.
Lambda lambda_project(Lambda const& a, std::uint32_t n);

// The canonical representative lift of a to level m.
Lambda lambda_lift(Lambda const& a, std::uint32_t m);

// M_r(n) = (r+1) n - r.
BigInt const_M(BigInt const& r, BigInt const& n);

// The formula for N is not believed to be optimal, so it is a pluggable
// policy; R is always N(M_2(M_1(n))) for whichever N is installed.
struct ConstantFormulas {
    std::function<BigInt(BigInt const& n, std::uint32_t ell)> N;

    static ConstantFormulas standard();
};

BigInt const_N(BigInt const& n, std::uint32_t ell,
               ConstantFormulas const& formulas = ConstantFormulas::standard());
BigInt const_R(BigInt const& n, std::uint32_t ell,
               ConstantFormulas const& formulas = ConstantFormulas::standard());

/// Checks one instance of the cancellation principle: returns whether
/// a * prod(c) == b * prod(c) implies a_n == b_n. All inputs live at a
/// common level R. Throws cancellation_precondition if R < M_r(n) with
/// r = c.size(), if some (c_i)_n vanishes, or if c is empty.
bool check_cancellation(std::span<Lambda const> c, Lambda const& a, Lambda const& b,
                        std::uint32_t n);

struct CancellationSweep {
    std::uint32_t ell = 0;
    std::uint32_t n = 0;
    std::uint32_t r = 0;
    std::uint32_t level = 0;         // R = M_r(n)
    std::uint64_t checked = 0;       // admissible (c, a, b) tuples
    std::uint64_t counterexamples = 0;
};

// Every admissible (c_1..c_r, a, b) in Lambda_R with R = M_r(n).
CancellationSweep sweep_cancellation(std::uint32_t ell, std::uint32_t n, std::uint32_t r);

}  // namespace minigal
