#include "minigal/cpairs.hpp"

#include "minigal/error.hpp"

#include <algorithm>
#include <thread>

namespace minigal {

namespace {

void require_same_level(Functional const& s, Functional const& t)
{
    if (s.ell() != t.ell() || s.level() != t.level()) throw level_mismatch("C-pair of functionals at different levels");
    if (&s.registry() != &t.registry()) throw precondition_error("C-pair of functionals over different registries");
}

// The part of s on proper refinements of v.
Functional refinement_part(Functional const& s, FlagValuation const& v)
{
    Functional out(s.registry(), s.ell(), s.level());
    for (auto const& [k, c] : s.terms()) {
        auto const& w = s.registry().get(k);
        if (!w.is_prefix_of(v)) out.add_term(k, w.rank(), c);
    }
    return out;
}

}  // namespace

bool falsifies(Functional const& s, Functional const& t, BivRat const& x)
{
    require_same_level(s, t);
    BivRat const y = x.one_minus();
    if (x.is_zero() || y.is_zero()) throw precondition_error("C-pair condition is tested on x != 0, 1");
    return eval(s, x) * eval(t, y) != eval(s, y) * eval(t, x);
}

std::optional<std::string> check_certificate(Functional const& s, Functional const& t, FlagValuation const& v)
{
    require_same_level(s, t);
    if (v.is_trivial()) {
        std::vector<Functional> pair{s, t};
        if (module_rank(pair) <= 1) return "cyclic";
        return std::nullopt;
    }
    for (auto const* f : {&s, &t})
        for (auto const& [k, c] : f->terms())
            if (!comparable(f->registry().get(k), v)) return std::nullopt;
    std::vector<Functional> images{refinement_part(s, v), refinement_part(t, v)};
    if (images[0].is_zero() && images[1].is_zero()) return "inertia";
    if (module_rank(images) <= 1) return "residue";
    return std::nullopt;
}

std::optional<Certificate> cpair_certify(Functional const& s, Functional const& t)
{
    if (auto tag = check_certificate(s, t, FlagValuation())) return Certificate{FlagValuation(), *tag};
    auto const& reg = s.registry();
    for (std::size_t rank = 1; rank <= 2; ++rank)
        for (FlagId id = 0; id < reg.size(); ++id) {
            auto const& v = reg.get(id);
            if (v.rank() != rank) continue;
            if (auto tag = check_certificate(s, t, v)) return Certificate{v, *tag};
        }
    return std::nullopt;
}

std::optional<Falsification> cpair_falsify(Functional const& s, Functional const& t, Budget const& budget)
{
    require_same_level(s, t);
    if (s.is_zero() || t.is_zero()) return std::nullopt;
    ElementStream stream(budget);
    std::size_t pos = 0;
    while (auto x = stream.next()) {
        if (falsifies(s, t, *x)) return Falsification{*x, pos};
        ++pos;
    }
    return std::nullopt;
}

std::string describe(CVerdict const& v)
{
    if (v.certificate)
        return "flag=" + to_string(v.certificate->flag) + " cert=" + v.certificate->tag;
    if (v.witness) return "x=" + to_string(v.witness->x) + " at=" + std::to_string(v.witness->position);
    return "-";
}

// ---------------------------------------------------------------- engine

struct CPairEngine::Chunk {
    std::vector<BivRat> xs;
    // per element, coordinates of x then of 1 - x for every snapshot flag
    std::vector<std::int64_t> coords;
};

namespace {

constexpr std::size_t chunk_size = 256;

__extension__ typedef unsigned __int128 u128;

std::uint64_t mulm(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

}  // namespace

CPairEngine::CPairEngine(FlagRegistry const& registry, Budget budget, unsigned threads)
    : registry_(&registry),
      budget_(std::move(budget)),
      threads_(std::max(1u, threads)),
      flag_count_(registry.size()),
      stream_(std::make_unique<ElementStream>(budget_))
{
}

CPairEngine::~CPairEngine() = default;

bool CPairEngine::extend()
{
    // caller holds the unique table lock
    if (exhausted_) return false;
    auto c = std::make_unique<Chunk>();
    while (c->xs.size() < chunk_size) {
        auto x = stream_->next();
        if (!x) {
            exhausted_ = true;
            break;
        }
        c->xs.push_back(std::move(*x));
    }
    if (c->xs.empty()) return false;
    std::size_t const n = c->xs.size(), f = flag_count_;
    c->coords.assign(n * 2 * f, 0);
    auto work = [&](std::size_t begin) {
        for (std::size_t i = begin; i < n; i += threads_) {
            BivRat const y = c->xs[i].one_minus();
            for (FlagId k = 0; k < f; ++k) {
                auto const& flag = registry_->get(k);
                c->coords[(i * 2) * f + k] = flag_last_coordinate(flag, c->xs[i]);
                c->coords[(i * 2 + 1) * f + k] = flag_last_coordinate(flag, y);
            }
        }
    };
    if (threads_ == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads_; ++w) pool.emplace_back(work, w);
    }
    chunks_.push_back(std::move(c));
    return true;
}

CPairEngine::Chunk const* CPairEngine::chunk(std::size_t index)
{
    {
        std::shared_lock lock(table_mutex_);
        if (index < chunks_.size()) return chunks_[index].get();
        if (exhausted_) return nullptr;
    }
    std::unique_lock lock(table_mutex_);
    while (index >= chunks_.size())
        if (!extend()) return nullptr;
    return chunks_[index].get();
}

std::optional<Falsification> CPairEngine::falsify(Functional const& s, Functional const& t)
{
    require_same_level(s, t);
    if (&s.registry() != registry_) throw precondition_error("functional over a foreign registry");
    if (s.is_zero() || t.is_zero()) return std::nullopt;
    for (auto const* g : {&s, &t})
        for (auto const& [k, c] : g->terms())
            if (k >= flag_count_) return cpair_falsify(s, t, budget_);  // registered after the snapshot

    std::uint64_t const mod = lambda_modulus(s.ell(), s.level());
    auto const smod = static_cast<std::int64_t>(mod);
    std::vector<std::pair<FlagId, std::uint64_t>> st, tt;
    for (auto const& [k, c] : s.terms()) st.emplace_back(k, c.residue());
    for (auto const& [k, c] : t.terms()) tt.emplace_back(k, c.residue());
    std::size_t const f = flag_count_;
    auto value = [&](auto const& terms, std::int64_t const* row) {
        std::uint64_t acc = 0;
        for (auto const& [k, c] : terms) {
            std::int64_t r = row[k] % smod;
            if (r < 0) r += smod;
            acc = (acc + mulm(c, static_cast<std::uint64_t>(r), mod)) % mod;
        }
        return acc;
    };
    for (std::size_t ci = 0;; ++ci) {
        Chunk const* c = chunk(ci);
        if (!c) return std::nullopt;
        for (std::size_t i = 0; i < c->xs.size(); ++i) {
            std::int64_t const* rx = &c->coords[(i * 2) * f];
            std::int64_t const* ry = &c->coords[(i * 2 + 1) * f];
            std::uint64_t const lhs = mulm(value(st, rx), value(tt, ry), mod);
            std::uint64_t const rhs = mulm(value(st, ry), value(tt, rx), mod);
            if (lhs != rhs) return Falsification{c->xs[i], ci * chunk_size + i};
        }
    }
}

CVerdict CPairEngine::verdict(Functional const& s, Functional const& t)
{
    require_same_level(s, t);
    auto key = t < s ? std::pair{t, s} : std::pair{s, t};
    {
        std::shared_lock lock(cache_mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    CVerdict v;
    if (auto cert = cpair_certify(key.first, key.second)) {
        v.value = Tri::yes;
        v.certificate = std::move(cert);
    } else if (auto w = falsify(key.first, key.second)) {
        v.value = Tri::no;
        v.witness = std::move(w);
    }
    std::unique_lock lock(cache_mutex_);
    return cache_.emplace(std::move(key), std::move(v)).first->second;
}

void CPairEngine::precompute(std::span<Functional const> S)
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = i; j < S.size(); ++j) pairs.emplace_back(i, j);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < pairs.size();) verdict(S[pairs[k].first], S[pairs[k].second]);
    };
    if (threads_ == 1) {
        work();
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads_; ++w) pool.emplace_back(work);
}

std::size_t CPairEngine::cache_size() const
{
    std::shared_lock lock(cache_mutex_);
    return cache_.size();
}

std::size_t CPairEngine::tabulated_elements() const
{
    std::shared_lock lock(table_mutex_);
    std::size_t n = 0;
    for (auto const& c : chunks_) n += c->xs.size();
    return n;
}

}  // namespace minigal
