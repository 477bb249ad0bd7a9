#include "minigal/gf.hpp"

#include "gf_poly.hpp"
#include "minigal/error.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

namespace minigal {

using detail::ExtRing;
using detail::PolyOps;
using detail::RPoly;

namespace {

std::vector<std::uint32_t> prime_factors(std::uint32_t n)
{
    std::vector<std::uint32_t> out;
    for (std::uint32_t q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        out.push_back(q);
        while (n % q == 0) n /= q;
    }
    if (n > 1) out.push_back(n);
    return out;
}

std::vector<std::uint32_t> divisors(std::uint32_t n)
{
    std::vector<std::uint32_t> out;
    for (std::uint32_t d = 1; d <= n; ++d)
        if (n % d == 0) out.push_back(d);
    return out;
}

void check_char(std::uint32_t a, std::uint32_t b)
{
    if (a != b)
        throw level_mismatch("field elements of characteristic " + std::to_string(a) + " and " +
                             std::to_string(b));
}

// Evaluate sum_j x_j * img^j in ring r (Horner).
Coords eval_at(ExtRing const& r, Coords const& x, Coords const& img)
{
    Coords acc = r.zero();
    for (std::size_t j = x.size(); j-- > 0;) {
        acc = r.mul(acc, img);
        acc[0] = (acc[0] + x[j]) % r.p();
    }
    return acc;
}

}  // namespace

// ---------------------------------------------------------------- FieldTower

FieldTower& FieldTower::of(std::uint32_t p)
{
    static std::mutex registry_mutex;
    static std::map<std::uint32_t, std::unique_ptr<FieldTower>> towers;
    std::lock_guard lock(registry_mutex);
    auto& slot = towers[p];
    if (!slot) {
        if (!is_prime(p)) throw precondition_error("characteristic must be prime, got " + std::to_string(p));
        slot = std::make_unique<FieldTower>(p);
    }
    return *slot;
}

FieldTower::FieldTower(std::uint32_t p) : p_(p) {}
FieldTower::~FieldTower() = default;

std::vector<std::uint32_t> FieldTower::find_defining_polynomial(std::uint32_t e) const
{
    // c_0 is the most significant digit of the counter.
    std::vector<std::uint32_t> f(e + 1, 0);
    f[e] = 1;
    // for e > 1 every candidate with c_0 = 0 is divisible by X
    if (e > 1) f[0] = 1;
    auto has_root = [&](std::uint64_t x) {
        std::uint64_t acc = 0;
        for (std::size_t i = f.size(); i-- > 0;) acc = (acc * x + f[i]) % p_;
        return acc == 0;
    };
    for (;;) {
        bool linear_factor = false;
        if (e > 1)
            for (std::uint64_t x = 0; x < p_ && !linear_factor; ++x) linear_factor = has_root(x);
        if (!linear_factor && detail::is_irreducible_fp(p_, f)) return f;
        std::size_t i = e;
        while (i-- > 0) {
            if (++f[i] < p_) break;
            f[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) throw error("no irreducible polynomial found");
    }
}

std::vector<std::uint32_t> FieldTower::defining_polynomial(std::uint32_t e)
{
    return ring(e).modulus();
}

ExtRing const& FieldTower::ring(std::uint32_t e)
{
    if (e == 0) throw precondition_error("field degree must be positive");
    {
        std::shared_lock lock(mutex_);
        auto it = rings_.find(e);
        if (it != rings_.end()) return *it->second;
    }
    auto built = std::make_unique<ExtRing>(p_, find_defining_polynomial(e));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = rings_.try_emplace(e, std::move(built));
    return *it->second;
}

Coords FieldTower::generator_image(std::uint32_t d, std::uint32_t E)
{
    if (E % d != 0)
        throw precondition_error("F_" + std::to_string(p_) + "^" + std::to_string(d) + " does not embed in degree " +
                                 std::to_string(E));
    {
        std::shared_lock lock(mutex_);
        auto it = generator_images_.find({d, E});
        if (it != generator_images_.end()) return it->second;
    }
    Coords img = compute_generator_image(d, E);
    std::unique_lock lock(mutex_);
    auto [it, inserted] = generator_images_.try_emplace({d, E}, std::move(img));
    return it->second;
}

Coords FieldTower::compute_generator_image(std::uint32_t d, std::uint32_t E)
{
    ExtRing const& target = ring(E);
    if (d == E) return target.generator();
    if (d == 1) return target.constant(ring(1).generator()[0]);

    auto const primes = prime_factors(E);
    std::vector<std::uint32_t> maximal;
    for (auto q : primes) maximal.push_back(E / q);

    auto it = std::find_if(maximal.begin(), maximal.end(), [&](std::uint32_t m) { return m % d == 0; });
    if (*it != d) {
        // compose through the first maximal subfield containing F_{p^d}
        Coords inner = generator_image(d, *it);
        return eval_at(target, inner, generator_image(*it, E));
    }

    // d is maximal: choose the smallest root of P_d in F_E that agrees with the
    // maximal subfields chosen before it on their common subfields.
    PolyOps ops(target);
    RPoly P;
    for (auto c : find_defining_polynomial(d)) P.push_back(target.constant(c));
    auto const candidates = ops.roots(P);

    for (auto const& root : candidates) {
        bool agrees = true;
        for (auto m : maximal) {
            if (m == d) break;
            std::uint32_t const g = std::gcd(m, d);
            Coords via_d = eval_at(target, generator_image(g, d), root);
            Coords via_m = eval_at(target, generator_image(g, m), generator_image(m, E));
            if (via_d != via_m) {
                agrees = false;
                break;
            }
        }
        if (agrees) return root;
    }
    throw error("internal: no compatible embedding of degree " + std::to_string(d) + " into " + std::to_string(E));
}

FieldTower::Embedding FieldTower::build_embedding(std::uint32_t d, std::uint32_t E)
{
    ExtRing const& target = ring(E);
    Embedding emb;
    Coords const img = generator_image(d, E);
    Coords power = target.one();
    for (std::uint32_t j = 0; j < d; ++j) {
        emb.columns.push_back(power);
        power = target.mul(power, img);
    }

    // Pick d linearly independent rows of the E x d matrix, then invert that block.
    std::vector<std::vector<std::uint32_t>> rows_seen;
    std::vector<std::vector<std::uint32_t>> reduced;  // echelon rows for independence tests
    std::vector<std::size_t> pivot_col;
    auto const p = p_;
    auto inv_mod = [p](std::uint64_t a) {
        std::uint64_t r = 1, b = a % p;
        for (std::uint32_t e = p - 2; e; e >>= 1) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
        }
        return r;
    };
    for (std::uint32_t i = 0; i < E && emb.rows.size() < d; ++i) {
        std::vector<std::uint32_t> row(d);
        for (std::uint32_t j = 0; j < d; ++j) row[j] = emb.columns[j][i];
        auto v = row;
        for (std::size_t k = 0; k < reduced.size(); ++k) {
            std::uint64_t const c = v[pivot_col[k]];
            if (!c) continue;
            for (std::uint32_t j = 0; j < d; ++j) v[j] = static_cast<std::uint32_t>((v[j] + (p - c) * reduced[k][j]) % p);
        }
        auto nz = std::find_if(v.begin(), v.end(), [](std::uint32_t c) { return c != 0; });
        if (nz == v.end()) continue;
        std::size_t const col = static_cast<std::size_t>(nz - v.begin());
        std::uint64_t const s = inv_mod(v[col]);
        for (auto& c : v) c = static_cast<std::uint32_t>(c * s % p);
        reduced.push_back(v);
        pivot_col.push_back(col);
        emb.rows.push_back(i);
        rows_seen.push_back(row);
    }
    if (emb.rows.size() != d) throw error("internal: embedding matrix is singular");

    // Gauss-Jordan on [B | I]
    std::vector<std::vector<std::uint64_t>> aug(d, std::vector<std::uint64_t>(2 * d, 0));
    for (std::uint32_t i = 0; i < d; ++i) {
        for (std::uint32_t j = 0; j < d; ++j) aug[i][j] = rows_seen[i][j];
        aug[i][d + i] = 1;
    }
    for (std::uint32_t col = 0; col < d; ++col) {
        std::uint32_t piv = col;
        while (aug[piv][col] == 0) ++piv;
        std::swap(aug[piv], aug[col]);
        auto const s = inv_mod(aug[col][col]);
        for (auto& c : aug[col]) c = c * s % p;
        for (std::uint32_t r = 0; r < d; ++r) {
            if (r == col || aug[r][col] == 0) continue;
            auto const f = aug[r][col];
            for (std::uint32_t j = 0; j < 2 * d; ++j) aug[r][j] = (aug[r][j] + (p - f) * aug[col][j]) % p;
        }
    }
    emb.block_inverse.assign(d, std::vector<std::uint32_t>(d));
    for (std::uint32_t i = 0; i < d; ++i)
        for (std::uint32_t j = 0; j < d; ++j) emb.block_inverse[i][j] = static_cast<std::uint32_t>(aug[i][d + j]);
    return emb;
}

FieldTower::Embedding const& FieldTower::embedding(std::uint32_t d, std::uint32_t E)
{
    {
        std::shared_lock lock(mutex_);
        auto it = embeddings_.find({d, E});
        if (it != embeddings_.end()) return *it->second;
    }
    auto built = std::make_unique<Embedding>(build_embedding(d, E));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = embeddings_.try_emplace({d, E}, std::move(built));
    return *it->second;
}

FieldVector FieldTower::embed(FieldVector const& x, std::uint32_t e2)
{
    check_char(x.p, p_);
    if (e2 % x.degree != 0)
        throw precondition_error("degree " + std::to_string(x.degree) + " does not divide " + std::to_string(e2));
    if (e2 == x.degree) return x;
    ExtRing const& target = ring(e2);
    FieldVector out{p_, e2, {}};
    if (x.degree == 1) {
        out.coords = target.constant(x.coords[0]);
        return out;
    }
    out.coords = eval_at(target, x.coords, generator_image(x.degree, e2));
    return out;
}

GFElem FieldTower::normalize(FieldVector const& x)
{
    check_char(x.p, p_);
    std::uint32_t const E = x.degree;
    if (std::all_of(x.coords.begin() + 1, x.coords.end(), [](std::uint32_t c) { return c == 0; }))
        return GFElem(p_, 1, Coords{x.coords[0]});
    ExtRing const& r = ring(E);
    for (auto d : divisors(E)) {
        if (d == 1) continue;  // handled above
        if (d == E) break;
        if (r.frobenius(x.coords, d) != x.coords) continue;
        Embedding const& emb = embedding(d, E);
        Coords y(d, 0);
        for (std::uint32_t i = 0; i < d; ++i) {
            std::uint64_t acc = 0;
            for (std::uint32_t j = 0; j < d; ++j)
                acc = (acc + std::uint64_t{emb.block_inverse[i][j]} * x.coords[emb.rows[j]]) % p_;
            y[i] = static_cast<std::uint32_t>(acc);
        }
        return GFElem(p_, d, std::move(y));
    }
    return GFElem(p_, E, x.coords);
}

// ---------------------------------------------------------------- GFElem

GFElem::GFElem(std::uint32_t p, std::int64_t value) : p_(p), degree_(1)
{
    if (!is_prime(p)) throw precondition_error("characteristic must be prime, got " + std::to_string(p));
    std::int64_t r = value % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    coords_ = Coords{static_cast<std::uint32_t>(r)};
}

GFElem GFElem::generator(std::uint32_t p, std::uint32_t e)
{
    auto& tower = FieldTower::of(p);
    return GFElem(p, e, tower.ring(e).generator());
}

GFElem GFElem::from_vector(FieldVector const& v)
{
    if (v.coords.size() != v.degree || v.degree == 0) throw precondition_error("malformed field vector");
    for (auto c : v.coords)
        if (c >= v.p) throw precondition_error("field vector coordinate out of range");
    return FieldTower::of(v.p).normalize(v);
}

bool GFElem::is_zero() const
{
    return degree_ == 1 && coords_[0] == 0;
}

bool GFElem::is_one() const
{
    return degree_ == 1 && coords_[0] == 1;
}

std::uint32_t GFElem::prime_value() const
{
    if (degree_ != 1) throw precondition_error(to_string(*this) + " is not in the prime field");
    return coords_[0];
}

namespace {

// Both operands embedded in their common field, with the ring.
struct Common {
    ExtRing const* ring;
    std::uint32_t E;
    Coords a, b;
};

Common common_field(GFElem const& x, GFElem const& y)
{
    check_char(x.p(), y.p());
    auto& tower = FieldTower::of(x.p());
    std::uint32_t const E = std::lcm(x.degree(), y.degree());
    Common c{&tower.ring(E), E, {}, {}};
    c.a = tower.embed(FieldVector{x.p(), x.degree(), x.coords()}, E).coords;
    c.b = tower.embed(FieldVector{y.p(), y.degree(), y.coords()}, E).coords;
    return c;
}

GFElem finish(std::uint32_t p, std::uint32_t E, Coords c)
{
    return FieldTower::of(p).normalize(FieldVector{p, E, std::move(c)});
}

}  // namespace

GFElem GFElem::operator+(GFElem const& o) const
{
    if (degree_ == 1 && o.degree_ == 1) {
        check_char(p_, o.p_);
        return GFElem(p_, 1, Coords{(coords_[0] + o.coords_[0]) % p_});
    }
    auto c = common_field(*this, o);
    return finish(p_, c.E, c.ring->add(c.a, c.b));
}

GFElem GFElem::operator-(GFElem const& o) const
{
    if (degree_ == 1 && o.degree_ == 1) {
        check_char(p_, o.p_);
        return GFElem(p_, 1, Coords{(coords_[0] + p_ - o.coords_[0]) % p_});
    }
    auto c = common_field(*this, o);
    return finish(p_, c.E, c.ring->sub(c.a, c.b));
}

GFElem GFElem::operator*(GFElem const& o) const
{
    if (degree_ == 1 && o.degree_ == 1) {
        check_char(p_, o.p_);
        return GFElem(p_, 1, Coords{static_cast<std::uint32_t>(std::uint64_t{coords_[0]} * o.coords_[0] % p_)});
    }
    auto c = common_field(*this, o);
    return finish(p_, c.E, c.ring->mul(c.a, c.b));
}

GFElem GFElem::operator/(GFElem const& o) const
{
    return *this * o.inverse();
}

GFElem GFElem::operator-() const
{
    if (degree_ == 1) return GFElem(p_, 1, Coords{(p_ - coords_[0]) % p_});
    auto const& r = FieldTower::of(p_).ring(degree_);
    return GFElem(p_, degree_, r.neg(coords_));
}

GFElem GFElem::inverse() const
{
    if (is_zero()) throw division_by_zero("inverse of zero in characteristic " + std::to_string(p_));
    auto const& r = FieldTower::of(p_).ring(degree_);
    return GFElem(p_, degree_, r.inv(coords_));
}

GFElem GFElem::pow(BigInt const& exponent) const
{
    if (exponent < 0) return inverse().pow(-exponent);
    auto& tower = FieldTower::of(p_);
    return tower.normalize(FieldVector{p_, degree_, tower.ring(degree_).pow(coords_, exponent)});
}

BigInt GFElem::multiplicative_order() const
{
    if (is_zero()) throw precondition_error("zero has no multiplicative order");
    BigInt const group = boost::multiprecision::pow(BigInt(p_), degree_) - 1;
    BigInt order = group;
    BigInt rest = group;
    std::vector<BigInt> primes;
    for (BigInt q = 2; q * q <= rest; ++q) {
        if (rest % q) continue;
        primes.push_back(q);
        while (rest % q == 0) rest /= q;
    }
    if (rest > 1) primes.push_back(rest);
    for (auto const& q : primes) {
        while (order % q == 0 && pow(order / q).is_one()) order /= q;
    }
    return order;
}

std::strong_ordering GFElem::operator<=>(GFElem const& o) const
{
    if (auto c = p_ <=> o.p_; c != 0) return c;
    if (auto c = degree_ <=> o.degree_; c != 0) return c;
    return std::lexicographical_compare_three_way(coords_.begin(), coords_.end(), o.coords_.begin(),
                                                  o.coords_.end());
}

std::string to_string(GFElem const& x)
{
    if (!x.valid()) return "<invalid>";
    if (x.degree() == 1) return std::to_string(x.coords()[0]);
    std::string const g = "g" + std::to_string(x.degree());
    std::string out;
    for (std::size_t i = x.coords().size(); i-- > 0;) {
        std::uint32_t const c = x.coords()[i];
        if (!c) continue;
        if (!out.empty()) out += "+";
        if (i == 0) {
            out += std::to_string(c);
            continue;
        }
        if (c != 1) out += std::to_string(c) + "*";
        out += g;
        if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, GFElem const& x)
{
    return os << to_string(x);
}

GFElem gf_arith(GFOp op, GFElem const& x, GFElem const* y)
{
    switch (op) {
    case GFOp::add:
        if (!y) throw precondition_error("add needs two operands");
        return x + *y;
    case GFOp::mul:
        if (!y) throw precondition_error("mul needs two operands");
        return x * *y;
    case GFOp::neg:
        return -x;
    case GFOp::inv:
        return x.inverse();
    }
    throw precondition_error("unknown field operation");
}

FieldVector gf_embed(GFElem const& x, std::uint32_t e2)
{
    return gf_embed(FieldVector{x.p(), x.degree(), x.coords()}, e2);
}

FieldVector gf_embed(FieldVector const& x, std::uint32_t e2)
{
    return FieldTower::of(x.p).embed(x, e2);
}

// ---------------------------------------------------------------- poly_roots

std::vector<std::pair<GFElem, unsigned>> poly_roots(std::span<GFElem const> coeffs)
{
    std::size_t size = coeffs.size();
    while (size > 0 && coeffs[size - 1].is_zero()) --size;
    if (size == 0) throw precondition_error("roots of the zero polynomial");
    std::uint32_t const p = coeffs[0].p();
    std::uint32_t e0 = 1;
    for (std::size_t i = 0; i < size; ++i) {
        check_char(coeffs[i].p(), p);
        e0 = std::lcm(e0, coeffs[i].degree());
    }
    auto& tower = FieldTower::of(p);

    auto poly_in = [&](std::uint32_t E) {
        RPoly f;
        for (std::size_t i = 0; i < size; ++i) f.push_back(gf_embed(coeffs[i], E).coords);
        return f;
    };

    ExtRing const& base = tower.ring(e0);
    PolyOps ops(base);
    RPoly rest = ops.monic(poly_in(e0));
    BigInt const q0 = base.order();

    // Distinct-degree factorization over F_{p^e0}; each stage collects the
    // product of distinct irreducible factors of degree i.
    std::vector<std::pair<std::uint32_t, RPoly>> stages;
    RPoly h = ops.x();
    for (std::uint32_t i = 1; ops.deg(rest) > 0; ++i) {
        if (ops.deg(rest) < 2 * static_cast<int>(i)) {
            // no two factors of degree >= i fit: what is left is irreducible
            stages.emplace_back(static_cast<std::uint32_t>(ops.deg(rest)), rest);
            break;
        }
        h = ops.powmod(h, q0, rest);
        RPoly g = ops.gcd(rest, ops.sub(h, ops.x()));
        if (ops.deg(g) <= 0) continue;
        stages.emplace_back(i, g);
        RPoly d = g;
        while (ops.deg(d) > 0) {
            rest = ops.divmod(rest, d).first;
            d = ops.gcd(rest, d);
        }
        h = ops.rem(h, rest);
    }

    std::vector<std::pair<GFElem, unsigned>> out;
    for (auto const& [i, g] : stages) {
        std::uint32_t const E = e0 * i;
        ExtRing const& big = tower.ring(E);
        PolyOps big_ops(big);
        RPoly gE;
        for (auto const& c : g) gE.push_back(tower.embed(FieldVector{p, e0, c}, E).coords);
        RPoly fE = poly_in(E);
        for (auto const& root : big_ops.split_linear(big_ops.monic(gE))) {
            unsigned mult = 0;
            RPoly lin{big.neg(root), big.one()};
            RPoly cur = fE;
            for (;;) {
                auto [quot, rem] = big_ops.divmod(cur, lin);
                if (!rem.empty()) break;
                ++mult;
                cur = std::move(quot);
            }
            out.emplace_back(tower.normalize(FieldVector{p, E, root}), mult);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace minigal
