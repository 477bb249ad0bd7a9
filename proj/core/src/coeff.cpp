#include "minigal/coeff.hpp"

#include "minigal/error.hpp"

#include <limits>
#include <ostream>
#include <vector>

namespace minigal {

namespace {

__extension__ typedef unsigned __int128 u128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

}  // namespace

bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::uint64_t lambda_modulus(std::uint32_t ell, std::uint32_t level)
{
    if (!is_prime(ell)) throw precondition_error("ell must be prime, got " + std::to_string(ell));
    if (level == 0) throw precondition_error("levels are positive integers");
    std::uint64_t m = 1;
    for (std::uint32_t i = 0; i < level; ++i) {
        if (m > (std::uint64_t{1} << 62) / ell)
            throw precondition_error("ell^level does not fit in 62 bits");
        m *= ell;
    }
    return m;
}

std::uint32_t ell_valuation(std::uint64_t residue, std::uint32_t ell, std::uint32_t level)
{
    if (residue == 0) return level;
    std::uint32_t v = 0;
    while (residue % ell == 0) {
        residue /= ell;
        ++v;
    }
    return v;
}

Lambda::Lambda(std::uint32_t ell, std::uint32_t level, std::int64_t value)
    : ell_(ell), level_(level), modulus_(lambda_modulus(ell, level))
{
    auto const m = static_cast<std::int64_t>(modulus_);
    std::int64_t r = value % m;
    if (r < 0) r += m;
    residue_ = static_cast<std::uint64_t>(r);
}

Lambda Lambda::from_residue(std::uint32_t ell, std::uint32_t level, std::uint64_t residue)
{
    Lambda a(ell, level, 0);
    a.residue_ = residue % a.modulus_;
    return a;
}

void Lambda::check_same_ring(Lambda const& o) const
{
    if (ell_ != o.ell_ || level_ != o.level_)
        throw level_mismatch("Lambda arithmetic between Z/" + std::to_string(ell_) + "^" +
                             std::to_string(level_) + " and Z/" + std::to_string(o.ell_) + "^" +
                             std::to_string(o.level_));
}

Lambda Lambda::operator+(Lambda const& o) const
{
    check_same_ring(o);
    Lambda r = *this;
    r.residue_ = (residue_ + o.residue_) % modulus_;
    return r;
}

Lambda Lambda::operator-(Lambda const& o) const
{
    check_same_ring(o);
    Lambda r = *this;
    r.residue_ = (residue_ + modulus_ - o.residue_) % modulus_;
    return r;
}

Lambda Lambda::operator*(Lambda const& o) const
{
    check_same_ring(o);
    Lambda r = *this;
    r.residue_ = mul_mod(residue_, o.residue_, modulus_);
    return r;
}

Lambda Lambda::operator-() const
{
    Lambda r = *this;
    r.residue_ = (modulus_ - residue_) % modulus_;
    return r;
}

std::ostream& operator<<(std::ostream& os, Lambda const& a)
{
    return os << a.residue();
}

Lambda lambda_project(Lambda const& a, std::uint32_t n)
{
    if (n == 0 || n > a.level())
        throw precondition_error("cannot project level " + std::to_string(a.level()) +
                                 " to level " + std::to_string(n));
    return Lambda::from_residue(a.ell(), n, a.residue());
}

Lambda lambda_lift(Lambda const& a, std::uint32_t m)
{
    if (m < a.level())
        throw precondition_error("cannot lift level " + std::to_string(a.level()) +
                                 " to lower level " + std::to_string(m));
    return Lambda::from_residue(a.ell(), m, a.residue());
}

BigInt const_M(BigInt const& r, BigInt const& n)
{
    if (r < 1 || n < 1) throw precondition_error("M_r(n) needs r, n >= 1");
    return (r + 1) * n - r;
}

ConstantFormulas ConstantFormulas::standard()
{
    return {[](BigInt const& n, std::uint32_t ell) {
        if (n < 1) throw precondition_error("N(n) needs n >= 1");
        BigInt const power = boost::multiprecision::pow(BigInt(ell),
                                                        static_cast<unsigned>(3 * n - 2));
        return const_M(1, (6 * power - 7) * (n - 1) + 3 * n - 2);
    }};
}

BigInt const_N(BigInt const& n, std::uint32_t ell, ConstantFormulas const& formulas)
{
    return formulas.N(n, ell);
}

BigInt const_R(BigInt const& n, std::uint32_t ell, ConstantFormulas const& formulas)
{
    return formulas.N(const_M(2, const_M(1, n)), ell);
}

bool check_cancellation(std::span<Lambda const> c, Lambda const& a, Lambda const& b,
                        std::uint32_t n)
{
    if (c.empty()) throw cancellation_precondition("cancellation needs at least one factor");
    std::uint32_t const level = a.level();
    if (BigInt(level) < const_M(c.size(), n))
        throw cancellation_precondition("level " + std::to_string(level) + " is below M_" +
                                        std::to_string(c.size()) + "(" + std::to_string(n) + ")");
    Lambda prod = Lambda(a.ell(), level, 1);
    for (auto const& ci : c) {
        if (lambda_project(ci, n).is_zero())
            throw cancellation_precondition("factor " + std::to_string(ci.residue()) +
                                            " vanishes at level " + std::to_string(n));
        prod *= ci;
    }
    if (a * prod != b * prod) return true;
    return lambda_project(a, n) == lambda_project(b, n);
}

CancellationSweep sweep_cancellation(std::uint32_t ell, std::uint32_t n, std::uint32_t r)
{
    CancellationSweep out;
    out.ell = ell;
    out.n = n;
    out.r = r;
    out.level = static_cast<std::uint32_t>(const_M(r, n));
    std::uint64_t const mod = lambda_modulus(ell, out.level);
    std::uint64_t const small = lambda_modulus(ell, n);

    // Same test as check_cancellation, with the preconditions established once
    // per tuple and the product of the c_i hoisted out of the (a, b) loops.
    std::vector<std::uint64_t> admissible;
    for (std::uint64_t v = 0; v < mod; ++v)
        if (v % small != 0) admissible.push_back(v);

    std::vector<std::size_t> idx(r, 0);
    std::vector<std::uint64_t> scaled(mod);
    for (;;) {
        std::uint64_t prod = 1;
        for (std::uint32_t i = 0; i < r; ++i) prod = mul_mod(prod, admissible[idx[i]], mod);
        for (std::uint64_t a = 0; a < mod; ++a) scaled[a] = mul_mod(a, prod, mod);
        for (std::uint64_t a = 0; a < mod; ++a)
            for (std::uint64_t b = 0; b < mod; ++b) {
                ++out.checked;
                if (scaled[a] == scaled[b] && a % small != b % small) ++out.counterexamples;
            }
        std::uint32_t k = 0;
        while (k < r && ++idx[k] == admissible.size()) idx[k++] = 0;
        if (k == r) break;
    }
    return out;
}

}  // namespace minigal
