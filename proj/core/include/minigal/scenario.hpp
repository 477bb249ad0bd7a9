#pragma once

// Plain-text scenario files: configuration, flags, functionals, universes,
// ground-truth labels and tasks; building the objects they declare; running
// the tasks into a deterministic report.

#include "minigal/modelchecker.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace minigal {

struct BudgetSpec {
    std::string preset = "default";  // default | small | large
    std::optional<std::uint32_t> factors;
    std::optional<std::int32_t> exponent;
    std::optional<std::uint32_t> constants;

    // "default", or "factors=2,exponent=2,constants=50" on top of the default
    static BudgetSpec parse(std::string_view text);
    Budget make(FieldSpec const& field, std::vector<BivPoly> const& curves) const;
};

struct FlagDecl {
    std::string name;
    std::string curve;
    std::optional<std::string> point;
    bool asserted = false;
    std::size_t line = 0;
};

struct TermDecl {
    std::string flag;
    std::size_t coord = 1;
    std::int64_t coeff = 1;
};

struct FunDecl {
    std::string name;
    std::uint32_t level = 1;
    std::vector<TermDecl> terms;
    std::size_t line = 0;
};

struct UniverseDecl {
    std::string name;
    std::vector<std::string> lower;
    std::vector<std::string> upper;                            // empty: same level
    std::vector<std::pair<std::string, std::string>> lifts;    // (lower, upper)
    std::size_t line = 0;
};

struct LabelDecl {
    std::string fun;
    std::vector<std::pair<std::string, std::string>> values;
    std::size_t line = 0;
};

struct TaskDecl {
    std::string name;
    std::string op;
    std::vector<std::pair<std::string, std::string>> args;
    std::optional<std::string> expect;
    bool decisive = false;
    std::size_t line = 0;

    std::optional<std::string> arg(std::string const& key) const;
};

struct Scenario {
    std::uint32_t p = 5;
    std::uint32_t ell = 2;
    std::uint32_t n = 1;
    std::uint32_t N = 1;
    std::uint32_t d = 2;
    BudgetSpec budget;
    std::vector<FlagDecl> flags;
    std::vector<FunDecl> funs;
    std::vector<UniverseDecl> universes;
    std::vector<LabelDecl> labels;
    std::vector<TaskDecl> tasks;
};

// Throws parse_error with the line and column of the first problem.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(std::string const& path);
std::string serialize(Scenario const& s);

// Values of a list "[a, b, c]".
std::vector<std::string> split_list(std::string_view text);

/// The objects a scenario declares. The registry lives on the heap so that
/// functionals keep pointing at it when the workspace moves.
struct Workspace {
    std::unique_ptr<FlagRegistry> registry;
    std::map<std::string, FlagId> flags;
    std::map<std::string, Functional> funs;
    std::map<std::string, Universe> universes;
    std::map<std::string, std::map<std::string, std::string>> labels;
    Budget budget;

    Functional const& fun(std::string const& name) const;
    Universe const& universe(std::string const& name) const;
};

// Resolves every reference; validation failures are parse_errors at the
// offending declaration.
Workspace build_workspace(Scenario const& s);

struct RunOptions {
    unsigned threads = 1;
    std::uint64_t seed = 1;
    std::optional<BudgetSpec> budget;  // replaces the scenario's budget
};

struct RunResult {
    std::string report;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t info = 0;
    std::size_t open = 0;  // unknown verdicts that were not required to be decisive
};

RunResult run_scenario(Scenario const& s, RunOptions const& opts = {});

// Declarations of the curated universes ("u0", "u1", "kt", "rank2") in
// scenario syntax, without tasks.
std::string_view curated_declarations(std::string_view name);

}  // namespace minigal
