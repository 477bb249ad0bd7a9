#include "gf_poly.hpp"

#include "minigal/error.hpp"

#include <algorithm>
#include <cassert>

namespace minigal::detail {

namespace {

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p)
{
    // p is prime, a != 0
    std::uint64_t result = 1, base = a % p;
    std::uint32_t e = p - 2;
    while (e) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

}  // namespace

ExtRing::ExtRing(std::uint32_t p, std::vector<std::uint32_t> modulus)
    : p_(p), e_(static_cast<std::uint32_t>(modulus.size() - 1)), modulus_(std::move(modulus))
{
    assert(!modulus_.empty() && modulus_.back() == 1);
    Elem const ap = pow(generator(), p_);
    Elem col = one();
    for (std::uint32_t j = 0; j < e_; ++j) {
        frob_.push_back(col);
        col = mul(col, ap);
    }
}

ExtRing::Elem ExtRing::frobenius(Elem const& a) const
{
    std::vector<std::uint64_t> acc(e_, 0);
    for (std::uint32_t j = 0; j < e_; ++j) {
        if (a[j] == 0) continue;
        for (std::uint32_t i = 0; i < e_; ++i) acc[i] = (acc[i] + std::uint64_t{a[j]} * frob_[j][i]) % p_;
    }
    Elem out(e_, 0);
    for (std::uint32_t i = 0; i < e_; ++i) out[i] = static_cast<std::uint32_t>(acc[i] % p_);
    return out;
}

ExtRing::Elem ExtRing::frobenius(Elem a, std::uint32_t times) const
{
    for (std::uint32_t k = 0; k < times; ++k) a = frobenius(a);
    return a;
}

BigInt ExtRing::order() const
{
    return boost::multiprecision::pow(BigInt(p_), e_);
}

ExtRing::Elem ExtRing::one() const
{
    return constant(1);
}

ExtRing::Elem ExtRing::constant(std::uint32_t c) const
{
    Elem r = zero();
    r[0] = c % p_;
    return r;
}

ExtRing::Elem ExtRing::generator() const
{
    Elem r = zero();
    if (e_ == 1)
        r[0] = (p_ - modulus_[0]) % p_;
    else
        r[1] = 1;
    return r;
}

bool ExtRing::is_zero(Elem const& a) const
{
    return std::all_of(a.begin(), a.end(), [](std::uint32_t c) { return c == 0; });
}

ExtRing::Elem ExtRing::add(Elem const& a, Elem const& b) const
{
    Elem r(e_);
    for (std::uint32_t i = 0; i < e_; ++i) {
        std::uint32_t s = a[i] + b[i];
        r[i] = s >= p_ ? s - p_ : s;
    }
    return r;
}

ExtRing::Elem ExtRing::sub(Elem const& a, Elem const& b) const
{
    Elem r(e_);
    for (std::uint32_t i = 0; i < e_; ++i) r[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + p_ - b[i];
    return r;
}

ExtRing::Elem ExtRing::neg(Elem const& a) const
{
    Elem r(e_);
    for (std::uint32_t i = 0; i < e_; ++i) r[i] = a[i] ? p_ - a[i] : 0;
    return r;
}

ExtRing::Elem ExtRing::mul(Elem const& a, Elem const& b) const
{
    if (e_ == 1) return Elem{static_cast<std::uint32_t>(std::uint64_t{a[0]} * b[0] % p_)};
    std::vector<std::uint64_t> prod(2 * e_ - 1, 0);
    for (std::uint32_t i = 0; i < e_; ++i) {
        if (!a[i]) continue;
        for (std::uint32_t j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p_;
    }
    // reduce against the monic modulus from the top
    for (std::size_t k = prod.size(); k-- > e_;) {
        std::uint64_t const c = prod[k];
        if (!c) continue;
        for (std::uint32_t i = 0; i < e_; ++i)
            prod[k - e_ + i] = (prod[k - e_ + i] + (p_ - c) * modulus_[i]) % p_;
        prod[k] = 0;
    }
    Elem r(e_);
    for (std::uint32_t i = 0; i < e_; ++i) r[i] = static_cast<std::uint32_t>(prod[i]);
    return r;
}

ExtRing::Elem ExtRing::scale(Elem const& a, std::uint32_t c) const
{
    Elem r(e_);
    for (std::uint32_t i = 0; i < e_; ++i) r[i] = static_cast<std::uint32_t>(std::uint64_t{a[i]} * c % p_);
    return r;
}

ExtRing::Elem ExtRing::pow(Elem const& a, BigInt const& exponent) const
{
    Elem result = one();
    if (exponent == 0) return result;
    auto const bits = msb(exponent);
    for (std::size_t i = bits + 1; i-- > 0;) {
        result = mul(result, result);
        if (bit_test(exponent, static_cast<unsigned>(i))) result = mul(result, a);
    }
    return result;
}

ExtRing::Elem ExtRing::inv(Elem const& a) const
{
    if (is_zero(a)) throw division_by_zero("inverse of zero in F_" + std::to_string(p_) + "^" + std::to_string(e_));
    if (e_ == 1) return Elem{inv_mod(a[0], p_)};
    return pow(a, order() - 2);
}

bool coords_less(Coords const& a, Coords const& b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void PolyOps::trim(RPoly& f) const
{
    while (!f.empty() && r_.is_zero(f.back())) f.pop_back();
}

RPoly PolyOps::constant(Coords const& c) const
{
    RPoly f{c};
    trim(f);
    return f;
}

RPoly PolyOps::add(RPoly const& f, RPoly const& g) const
{
    RPoly r(std::max(f.size(), g.size()), r_.zero());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    for (std::size_t i = 0; i < g.size(); ++i) r[i] = r_.add(r[i], g[i]);
    trim(r);
    return r;
}

RPoly PolyOps::sub(RPoly const& f, RPoly const& g) const
{
    RPoly r(std::max(f.size(), g.size()), r_.zero());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    for (std::size_t i = 0; i < g.size(); ++i) r[i] = r_.sub(r[i], g[i]);
    trim(r);
    return r;
}

RPoly PolyOps::mul(RPoly const& f, RPoly const& g) const
{
    if (f.empty() || g.empty()) return {};
    RPoly r(f.size() + g.size() - 1, r_.zero());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (r_.is_zero(f[i])) continue;
        for (std::size_t j = 0; j < g.size(); ++j) r[i + j] = r_.add(r[i + j], r_.mul(f[i], g[j]));
    }
    trim(r);
    return r;
}

std::pair<RPoly, RPoly> PolyOps::divmod(RPoly const& f, RPoly const& g) const
{
    if (g.empty()) throw division_by_zero("polynomial division by zero");
    RPoly rem = f;
    trim(rem);
    if (rem.size() < g.size()) return {{}, rem};
    RPoly quot(rem.size() - g.size() + 1, r_.zero());
    auto const lead_inv = r_.inv(g.back());
    for (std::size_t k = rem.size(); k-- >= g.size();) {
        if (r_.is_zero(rem[k])) continue;
        auto const c = r_.mul(rem[k], lead_inv);
        std::size_t const shift = k - (g.size() - 1);
        quot[shift] = c;
        for (std::size_t i = 0; i < g.size(); ++i) rem[shift + i] = r_.sub(rem[shift + i], r_.mul(c, g[i]));
    }
    trim(quot);
    trim(rem);
    return {quot, rem};
}

RPoly PolyOps::monic(RPoly const& f) const
{
    if (f.empty()) return f;
    auto const inv = r_.inv(f.back());
    RPoly r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = r_.mul(f[i], inv);
    return r;
}

RPoly PolyOps::gcd(RPoly f, RPoly g) const
{
    trim(f);
    trim(g);
    while (!g.empty()) {
        auto r = rem(f, g);
        f = std::move(g);
        g = std::move(r);
    }
    return monic(f);
}

RPoly PolyOps::powmod(RPoly const& base, BigInt const& exponent, RPoly const& mod) const
{
    RPoly result = rem(constant(r_.one()), mod);
    if (exponent == 0) return result;
    RPoly b = rem(base, mod);
    auto const bits = msb(exponent);
    for (std::size_t i = bits + 1; i-- > 0;) {
        result = rem(mul(result, result), mod);
        if (bit_test(exponent, static_cast<unsigned>(i))) result = rem(mul(result, b), mod);
    }
    return result;
}

std::vector<Coords> PolyOps::roots(RPoly const& f) const
{
    RPoly g = f;
    trim(g);
    if (g.empty()) throw precondition_error("roots of the zero polynomial");
    if (g.size() == 1) return {};
    g = monic(g);
    RPoly const xq = powmod(x(), r_.order(), g);
    RPoly const split = gcd(g, sub(xq, x()));
    if (split.size() <= 1) return {};
    auto out = split_linear(split);
    std::sort(out.begin(), out.end(), coords_less);
    return out;
}

std::vector<Coords> PolyOps::split_linear(RPoly const& g) const
{
    if (g.size() <= 1) return {};
    if (g.size() == 2) {
        auto const m = monic(g);
        return {r_.neg(m[0])};
    }
    std::uint32_t const p = r_.p();
    std::uint32_t const e = r_.degree();
    BigInt const q = r_.order();
    BigInt const half = (q - 1) / 2;

    // Deterministic sequence of shifts delta: element number k in base-p digits.
    for (BigInt k = 0; k < q; ++k) {
        Coords delta(e, 0);
        BigInt rest = k;
        for (std::uint32_t i = 0; i < e && rest != 0; ++i) {
            delta[i] = static_cast<std::uint32_t>(rest % p);
            rest /= p;
        }
        RPoly h;
        if (p == 2) {
            // trace of delta*X
            RPoly y = rem(RPoly{r_.zero(), delta}, g);
            RPoly tr = y;
            for (std::uint32_t i = 1; i < e; ++i) {
                y = rem(mul(y, y), g);
                tr = add(tr, y);
            }
            h = gcd(g, tr);
        } else {
            RPoly shifted{delta, r_.one()};
            RPoly pw = powmod(shifted, half, g);
            h = gcd(g, sub(pw, constant(r_.one())));
        }
        if (h.size() > 1 && h.size() < g.size()) {
            auto left = split_linear(h);
            auto right = split_linear(divmod(g, h).first);
            left.insert(left.end(), right.begin(), right.end());
            return left;
        }
    }
    throw error("internal: equal-degree splitting failed");
}

bool is_irreducible_fp(std::uint32_t p, std::vector<std::uint32_t> const& f)
{
    std::size_t const n = f.size() - 1;
    if (n == 0) return false;
    if (n == 1) return true;
    ExtRing fp(p, {0, 1});
    PolyOps ops(fp);
    RPoly F;
    for (auto c : f) F.push_back(Coords{c});
    ops.trim(F);

    auto frob_power = [&](std::size_t k) {
        // X^{p^k} mod F
        RPoly y = ops.x();
        for (std::size_t i = 0; i < k; ++i) y = ops.powmod(y, p, F);
        return y;
    };
    if (ops.sub(frob_power(n), ops.x()).size() != 0) return false;
    for (std::size_t q = 2; q <= n; ++q) {
        if (n % q != 0 || !is_prime(q)) continue;
        auto g = ops.gcd(F, ops.sub(frob_power(n / q), ops.x()));
        if (g.size() > 1) return false;
    }
    return true;
}

}  // namespace minigal::detail
