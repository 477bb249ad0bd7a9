#pragma once

// The three-valued C-pair relation: a structural certifier through flags
// whose residues make <s, t> cyclic, a falsifier enumerating test elements,
// and a symmetric verdict cache.

#include "minigal/galois.hpp"

#include <atomic>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

namespace minigal {

struct Certificate {
    FlagValuation flag;  // trivial when <s, t> is itself cyclic
    std::string tag;     // "cyclic", "inertia" or "residue"
};

struct Falsification {
    BivRat x;
    std::size_t position = 0;  // index in the element stream
};

struct CVerdict {
    Tri value = Tri::unknown;
    std::optional<Certificate> certificate;
    std::optional<Falsification> witness;
};

// s(x) t(1-x) != s(1-x) t(x)
bool falsifies(Functional const& s, Functional const& t, BivRat const& x);

// Re-checks a certificate: every term of s, t is comparable to v and the
// images of s, t modulo I_v span a cyclic module.
std::optional<std::string> check_certificate(Functional const& s, Functional const& t, FlagValuation const& v);

// Tries the trivial flag, then the registered flags by rank and id.
std::optional<Certificate> cpair_certify(Functional const& s, Functional const& t);

// First falsifying element of the stream, evaluated directly.
std::optional<Falsification> cpair_falsify(Functional const& s, Functional const& t, Budget const& budget);

/// Verdicts over one registry. Stream elements and their flag coordinates
/// (for x and 1 - x) are tabulated lazily in chunks and shared by every
/// pair, so the reported witness is always the first in stream order
/// whatever the thread count.
class CPairEngine {
public:
    CPairEngine(FlagRegistry const& registry, Budget budget, unsigned threads = 1);
    ~CPairEngine();

    FlagRegistry const& registry() const { return *registry_; }
    Budget const& budget() const { return budget_; }
    unsigned threads() const { return threads_; }

    CVerdict verdict(Functional const& s, Functional const& t);
    std::optional<Falsification> falsify(Functional const& s, Functional const& t);

    // Verdicts for every unordered pair of S, computed in parallel.
    void precompute(std::span<Functional const> S);

    std::size_t cache_size() const;
    std::size_t tabulated_elements() const;

private:
    struct Chunk;
    Chunk const* chunk(std::size_t index);
    bool extend();

    FlagRegistry const* registry_;
    Budget budget_;
    unsigned threads_;
    std::size_t flag_count_;

    mutable std::shared_mutex table_mutex_;
    std::deque<std::unique_ptr<Chunk>> chunks_;
    std::unique_ptr<ElementStream> stream_;
    bool exhausted_ = false;

    mutable std::shared_mutex cache_mutex_;
    std::map<std::pair<Functional, Functional>, CVerdict> cache_;
};

std::string describe(CVerdict const& v);

}  // namespace minigal
