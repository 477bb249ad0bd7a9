#include "minigal/linalg.hpp"

#include "minigal/coeff.hpp"
#include "minigal/error.hpp"

#include <algorithm>
#include <utility>

namespace minigal {

namespace {

__extension__ typedef unsigned __int128 u128;

std::uint64_t mulm(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t subm(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return a >= b ? a - b : a + (m - b);
}

// Inverse of a unit modulo ell^level via Euler: u^(phi - 1).
std::uint64_t inv_unit(std::uint64_t u, std::uint64_t mod, std::uint32_t ell)
{
    std::uint64_t e = mod / ell * (ell - 1) - 1;
    std::uint64_t r = 1, b = u % mod;
    while (e) {
        if (e & 1) r = mulm(r, b, mod);
        b = mulm(b, b, mod);
        e >>= 1;
    }
    return r;
}

std::uint64_t pow_u(std::uint64_t b, std::uint32_t e)
{
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// Reduces m in place, applying every row operation to the columns of `rhs`
// as well. Returns the pivot valuations.
std::vector<std::uint32_t> reduce(ModMatrix& m, std::vector<std::uint64_t>* rhs)
{
    std::uint32_t const ell = m.ell(), level = m.level();
    std::uint64_t const mod = m.modulus();
    std::vector<std::uint32_t> out;
    std::size_t k = 0;
    for (; k < std::min(m.rows(), m.cols()); ++k) {
        // pivot of minimal valuation in the lower-right block
        std::size_t pr = 0, pc = 0;
        std::uint32_t best = level;
        for (std::size_t r = k; r < m.rows(); ++r)
            for (std::size_t c = k; c < m.cols(); ++c) {
                auto const v = ell_valuation(m.at(r, c), ell, level);
                if (v < best) {
                    best = v;
                    pr = r;
                    pc = c;
                }
            }
        if (best == level) break;
        if (pr != k) {
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(pr, c), m.at(k, c));
            if (rhs) std::swap((*rhs)[pr], (*rhs)[k]);
        }
        if (pc != k)
            for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m.at(r, pc), m.at(r, k));
        std::uint64_t const scale = pow_u(ell, best);
        // make the pivot exactly ell^best by scaling the row with a unit
        std::uint64_t const unit = m.at(k, k) / scale;
        std::uint64_t const uinv = inv_unit(unit, mod, ell);
        for (std::size_t c = 0; c < m.cols(); ++c) m.at(k, c) = mulm(m.at(k, c), uinv, mod);
        if (rhs) (*rhs)[k] = mulm((*rhs)[k], uinv, mod);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == k || m.at(r, k) == 0) continue;
            std::uint64_t const f = m.at(r, k) / scale;
            for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) = subm(m.at(r, c), mulm(f, m.at(k, c), mod), mod);
            if (rhs) (*rhs)[r] = subm((*rhs)[r], mulm(f, (*rhs)[k], mod), mod);
        }
        for (std::size_t c = k + 1; c < m.cols(); ++c) {
            if (m.at(k, c) == 0) continue;
            std::uint64_t const f = m.at(k, c) / scale;
            for (std::size_t r = 0; r < m.rows(); ++r) m.at(r, c) = subm(m.at(r, c), mulm(f, m.at(r, k), mod), mod);
        }
        out.push_back(best);
    }
    return out;
}

}  // namespace

ModMatrix::ModMatrix(std::uint32_t ell, std::uint32_t level, std::size_t rows, std::size_t cols)
    : ell_(ell), level_(level), mod_(lambda_modulus(ell, level)), rows_(rows), cols_(cols), data_(rows * cols, 0)
{
}

std::vector<std::uint32_t> smith_valuations(ModMatrix m)
{
    auto v = reduce(m, nullptr);
    std::sort(v.begin(), v.end());
    return v;
}

std::size_t column_module_rank(ModMatrix const& m)
{
    return smith_valuations(m).size();
}

bool in_column_span(ModMatrix const& m, std::vector<std::uint64_t> const& b)
{
    if (b.size() != m.rows()) throw precondition_error("right-hand side of the wrong length");
    ModMatrix a = m;
    std::vector<std::uint64_t> rhs = b;
    for (auto& x : rhs) x %= a.modulus();
    auto const piv = reduce(a, &rhs);
    // now a is diagonal with entries ell^piv[i]
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (i < piv.size()) {
            if (rhs[i] % pow_u(a.ell(), piv[i]) != 0) return false;
        } else if (rhs[i] != 0) {
            return false;
        }
    }
    return true;
}

}  // namespace minigal
