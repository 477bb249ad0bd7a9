#pragma once

// Finite two-sorted structures (S_N, S_n; C^N, C^n, pi) built from
// functionals, and the predicates defining visible inertia, decomposition
// and transcendence degree, evaluated with Kleene three-valued logic.
// Every quantifier ranges over the universe only.

#include "minigal/cpairs.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace minigal {

struct Universe {
    std::uint32_t ell = 2;
    std::uint32_t n = 1;
    std::uint32_t N = 1;
    std::vector<Functional> lower;                 // S_n
    std::vector<Functional> upper;                 // S_N
    std::vector<std::vector<std::size_t>> lifts;   // lower index -> upper indices
    std::vector<std::string> lower_names;
    std::vector<std::string> upper_names;

    // n = N: S_N = S_n and every element is its own lift.
    static Universe same_level(std::vector<Functional> S, std::vector<std::string> names);

    std::size_t index_of(std::string const& name) const;  // into lower
};

// Throws precondition_error unless N >= R(n), p != ell, levels match, every
// lower element has designated lifts including its canonical lift, and
// every upper element projects into S_n.
void validate(Universe const& U);

struct Outcome {
    Tri value = Tri::unknown;
    std::string witness;                 // names of the elements that decided it
    std::vector<std::string> blocking;   // unknown pairs "a~b" when value is unknown
};

// Membership of each lower element, three-valued.
struct SetOutcome {
    std::vector<Tri> membership;
    std::vector<std::string> blocking;

    std::vector<std::size_t> members() const;
    std::vector<std::size_t> undecided() const;
};

struct TrdegEstimate {
    std::size_t r = 0;
    std::string witness;
    std::size_t blocked = 0;  // subsets of size r+1 left open by unknown verdicts
};

class ModelChecker {
public:
    ModelChecker(Universe U, CPairEngine& engine);

    Universe const& universe() const { return U_; }

    // Fills both verdict matrices; pair verdicts fan out over the engine's threads.
    void precompute();

    CVerdict const& lower_verdict(std::size_t i, std::size_t j);
    CVerdict const& upper_verdict(std::size_t a, std::size_t b);

    Outcome visible_inertia(std::size_t i);
    Outcome common_inertia(std::vector<std::size_t> const& sigma);

    SetOutcome def_D(std::vector<Tri> const& sigma);
    SetOutcome def_D(std::vector<std::size_t> const& sigma) { return def_D(as_set(sigma)); }
    SetOutcome def_I(std::vector<Tri> const& sigma);
    SetOutcome def_I(std::vector<std::size_t> const& sigma) { return def_I(as_set(sigma)); }

    // Direct computations from the level-n verdict matrix.
    SetOutcome c_centralizer(std::vector<std::size_t> const& sigma);
    SetOutcome c_center(std::vector<std::size_t> const& sigma);

    Outcome quasi_divisorial_detect(std::vector<std::size_t> const& I, std::vector<std::size_t> const& D,
                                    std::uint32_t d);

    TrdegEstimate trdeg_estimate();

    std::vector<Tri> as_set(std::vector<std::size_t> const& idx) const;

private:
    Tri cn(std::size_t i, std::size_t j);
    Tri cN(std::size_t a, std::size_t b);
    // exists lifts s', t' with C^N(s', t')
    Tri lifted_pair(std::size_t i, std::size_t j);
    // exists s' over lifts of i with C^N(s', t1') and C^N(s', t2') for some lifts
    Tri lifted_pair2(std::size_t i, std::size_t j1, std::size_t j2);
    Tri lifted_triple(std::size_t s, std::size_t t, std::size_t t1, std::size_t t2);
    void begin();
    std::vector<std::string> end();

    Universe U_;
    CPairEngine* engine_;
    std::map<std::pair<std::size_t, std::size_t>, CVerdict> lower_;
    std::map<std::pair<std::size_t, std::size_t>, CVerdict> upper_;
    std::set<std::string> blocking_;
};

/// The coarsest coarsening of a registered flag w with Sigma inside I_w:
/// cut w at the largest convex subgroup inside w(Sigma^perp). Throws if no
/// registered flag has all of Sigma structurally inertial.
FlagValuation associated_valuation(std::vector<Functional> const& sigma);

// Bounded test of t in H = { t in Sigma^perp : t - x in (1 - x) Sigma^perp
// for every x outside Sigma^perp }. Answers no with a refuting x, or
// unknown when the stream has no refutation.
TriBool h_membership_probe(BivRat const& t, std::vector<Functional> const& sigma, Budget const& budget);

// Ground truth from the registry: some registered visible flag has s in its
// inertia (structural, exact on normal forms).
bool ground_truth_visible_inertia(Functional const& s, std::uint32_t ell);

}  // namespace minigal
