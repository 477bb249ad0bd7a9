#include "minigal/error.hpp"
#include "minigal/scenario.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

namespace minigal {

namespace {

std::string join(std::vector<std::string> const& v, char const* sep = ", ")
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

std::string bracket(std::vector<std::string> const& v)
{
    return "[" + join(v) + "]";
}

class Runner {
public:
    Runner(Scenario const& sc, RunOptions const& opts)
        : sc_(sc), opts_(opts), ws_(build_workspace(sc))
    {
        if (opts.budget) ws_.budget = opts.budget->make(ws_.registry->field(), ws_.registry->search_polys());
        engine_ = std::make_unique<CPairEngine>(*ws_.registry, ws_.budget, opts.threads);
    }

    RunResult run()
    {
        out_ << "# minigal report\n";
        out_ << "config p=" << sc_.p << " ell=" << sc_.ell << " n=" << sc_.n << " N=" << sc_.N << " d=" << sc_.d
             << "\n";
        out_ << "budget factors=" << ws_.budget.max_factors << " exponent=" << ws_.budget.max_exponent
             << " constants=" << ws_.budget.max_constants << " pool=" << ws_.budget.pool.size() << "\n";
        for (auto const& t : sc_.tasks) run_task(t);
        out_ << "# summary\n";
        // a labels task emits one row per labelled functional
        out_ << "tasks=" << sc_.tasks.size() << "\nrows=" << res_.passed + res_.failed + res_.info + res_.open << "\n";
        out_ << "pass=" << res_.passed << "\nfail=" << res_.failed << "\ninfo=" << res_.info << "\nopen=" << res_.open
             << "\n";
        res_.report = out_.str();
        return res_;
    }

private:
    using Handler = void (Runner::*)(TaskDecl const&);

    void run_task(TaskDecl const& t)
    {
        static std::map<std::string, Handler> const ops{
            {"const_M", &Runner::op_const_M},
            {"const_N", &Runner::op_const_N},
            {"const_R", &Runner::op_const_R},
            {"cancellation", &Runner::op_cancellation},
            {"eval", &Runner::op_eval},
            {"in_inertia", &Runner::op_in_inertia},
            {"in_decomposition", &Runner::op_in_decomposition},
            {"cpair", &Runner::op_cpair},
            {"cpair_matrix", &Runner::op_cpair_matrix},
            {"soundness", &Runner::op_soundness},
            {"visible_inertia", &Runner::op_visible_inertia},
            {"labels", &Runner::op_labels},
            {"common_inertia", &Runner::op_common_inertia},
            {"def_D", &Runner::op_def_D},
            {"def_I", &Runner::op_def_I},
            {"def_I_of_D", &Runner::op_def_I_of_D},
            {"centralizer", &Runner::op_centralizer},
            {"qd_detect", &Runner::op_qd_detect},
            {"trdeg", &Runner::op_trdeg},
            {"associated_valuation", &Runner::op_associated_valuation},
            {"h_probe", &Runner::op_h_probe},
            {"homomorphism", &Runner::op_homomorphism},
        };
        auto it = ops.find(t.op);
        try {
            if (it == ops.end()) throw precondition_error("unknown op '" + t.op + "'");
            (this->*(it->second))(t);
        } catch (error const& e) {
            emit(t, subject_of(t), "error", e.what());
        }
    }

    std::string subject_of(TaskDecl const& t) const
    {
        std::vector<std::string> parts;
        for (auto const& [k, v] : t.args) parts.push_back(k + "=" + v);
        return join(parts, ",");
    }

    std::string need(TaskDecl const& t, std::string const& key) const
    {
        auto v = t.arg(key);
        if (!v) throw precondition_error("task needs " + key + "=");
        return *v;
    }

    std::uint64_t need_number(TaskDecl const& t, std::string const& key) const
    {
        auto const s = need(t, key);
        try {
            std::size_t used = 0;
            auto v = std::stoull(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (std::exception const&) {
            throw precondition_error(key + " must be a number, got '" + s + "'");
        }
    }

    std::string normalize_expect(TaskDecl const& t, std::string const& e) const
    {
        if (e.empty() || e.front() != '[') return e;
        // sets compare in universe order
        auto const& U = ws_.universe(need(t, "universe"));
        std::vector<std::size_t> idx;
        for (auto const& name : split_list(e)) idx.push_back(U.index_of(name));
        std::sort(idx.begin(), idx.end());
        std::vector<std::string> names;
        for (auto i : idx) names.push_back(U.lower_names[i]);
        return bracket(names);
    }

    void emit(TaskDecl const& t, std::string const& subject, std::string const& verdict, std::string const& witness)
    {
        std::string status;
        if (!t.expect) {
            status = "INFO";
            ++res_.info;
        } else if (verdict == "unknown" && !t.decisive && *t.expect != "unknown") {
            status = "OPEN";
            ++res_.open;
        } else if (verdict == normalize_expect(t, *t.expect)) {
            status = "PASS";
            ++res_.passed;
        } else {
            status = "FAIL";
            ++res_.failed;
        }
        out_ << "task=" << t.name << " op=" << t.op << " subject=" << subject << " verdict=" << verdict
             << " witness=\"" << witness << "\" status=" << status << "\n";
    }

    std::string tri_witness(TriBool const& r) const
    {
        std::string w = r.certificate;
        if (r.element) w += (w.empty() ? "" : " ") + std::string("x=") + to_string(*r.element);
        return w;
    }

    std::string outcome_witness(Outcome const& o) const
    {
        if (o.value == Tri::unknown) return "blocking=" + join(o.blocking, ",");
        return o.witness;
    }

    std::vector<std::size_t> indices(Universe const& U, std::string const& list) const
    {
        std::vector<std::size_t> out;
        for (auto const& name : split_list(list)) out.push_back(U.index_of(name));
        return out;
    }

    std::vector<std::string> names(Universe const& U, std::vector<std::size_t> const& idx) const
    {
        std::vector<std::string> out;
        for (auto i : idx) out.push_back(U.lower_names[i]);
        return out;
    }

    void emit_set(TaskDecl const& t, Universe const& U, SetOutcome const& s)
    {
        auto const members = bracket(names(U, s.members()));
        auto const open = s.undecided();
        if (open.empty()) return emit(t, subject_of(t), members, "");
        emit(t, subject_of(t), "unknown",
             "members=" + members + " undecided=" + bracket(names(U, open)) + " blocking=" + join(s.blocking, ","));
    }

    ModelChecker& checker(TaskDecl const& t)
    {
        auto const name = need(t, "universe");
        auto it = checkers_.find(name);
        if (it == checkers_.end()) {
            it = checkers_.emplace(name, std::make_unique<ModelChecker>(ws_.universe(name), *engine_)).first;
            it->second->precompute();
        }
        return *it->second;
    }

    std::vector<Functional> fun_list(std::string const& list) const
    {
        std::vector<Functional> out;
        for (auto const& n : split_list(list)) out.push_back(ws_.fun(n));
        return out;
    }

    // ---------------------------------------------------------------- ops

    void op_const_M(TaskDecl const& t)
    {
        emit(t, subject_of(t), const_M(BigInt(need_number(t, "r")), BigInt(need_number(t, "n"))).str(), "");
    }

    void op_const_N(TaskDecl const& t)
    {
        auto const ell = static_cast<std::uint32_t>(need_number(t, "ell"));
        emit(t, subject_of(t), const_N(BigInt(need_number(t, "n")), ell).str(), "");
    }

    void op_const_R(TaskDecl const& t)
    {
        auto const ell = static_cast<std::uint32_t>(need_number(t, "ell"));
        emit(t, subject_of(t), const_R(BigInt(need_number(t, "n")), ell).str(), "");
    }

    void op_cancellation(TaskDecl const& t)
    {
        auto const s = sweep_cancellation(static_cast<std::uint32_t>(need_number(t, "ell")),
                                          static_cast<std::uint32_t>(need_number(t, "n")),
                                          static_cast<std::uint32_t>(need_number(t, "r")));
        emit(t, subject_of(t), std::to_string(s.counterexamples),
             "checked=" + std::to_string(s.checked) + " level=" + std::to_string(s.level));
    }

    void op_eval(TaskDecl const& t)
    {
        auto const& s = ws_.fun(need(t, "fun"));
        auto const x = parse_rat(sc_.p, need(t, "x"));
        emit(t, subject_of(t), std::to_string(eval(s, x).residue()), "");
    }

    FlagValuation const& flag(TaskDecl const& t) const
    {
        auto const name = need(t, "flag");
        auto it = ws_.flags.find(name);
        if (it == ws_.flags.end()) throw precondition_error("unknown flag '" + name + "'");
        return ws_.registry->get(it->second);
    }

    void op_in_inertia(TaskDecl const& t)
    {
        auto r = in_inertia(ws_.fun(need(t, "fun")), flag(t), ws_.budget);
        emit(t, subject_of(t), to_string(r.value), tri_witness(r));
    }

    void op_in_decomposition(TaskDecl const& t)
    {
        auto r = in_decomposition(ws_.fun(need(t, "fun")), flag(t), ws_.budget);
        emit(t, subject_of(t), to_string(r.value), tri_witness(r));
    }

    void op_cpair(TaskDecl const& t)
    {
        auto v = engine_->verdict(ws_.fun(need(t, "a")), ws_.fun(need(t, "b")));
        emit(t, subject_of(t), to_string(v.value), describe(v));
    }

    void op_cpair_matrix(TaskDecl const& t)
    {
        auto& mc = checker(t);
        auto const& U = mc.universe();
        std::size_t counts[3] = {0, 0, 0};
        std::ostringstream dump;
        for (std::size_t i = 0; i < U.lower.size(); ++i)
            for (std::size_t j = i + 1; j < U.lower.size(); ++j) {
                auto const& v = mc.lower_verdict(i, j);
                ++counts[static_cast<int>(v.value)];
                dump << "cpair " << U.lower_names[i] << " " << U.lower_names[j] << " " << to_string(v.value) << " "
                     << describe(v) << "\n";
            }
        if (U.N != U.n)
            for (std::size_t a = 0; a < U.upper.size(); ++a)
                for (std::size_t b = a + 1; b < U.upper.size(); ++b) {
                    auto const& v = mc.upper_verdict(a, b);
                    ++counts[static_cast<int>(v.value)];
                    dump << "cpairN " << U.upper_names[a] << " " << U.upper_names[b] << " " << to_string(v.value)
                         << " " << describe(v) << "\n";
                }
        emit(t, subject_of(t), std::to_string(counts[2]),
             "yes=" + std::to_string(counts[0]) + " no=" + std::to_string(counts[1]));
        out_ << dump.str();
    }

    void op_soundness(TaskDecl const& t)
    {
        auto const& U = ws_.universe(need(t, "universe"));
        std::size_t violations = 0, pairs = 0, certified = 0, falsified = 0;
        std::string first;
        for (auto const* S : {&U.lower, &U.upper}) {
            for (std::size_t i = 0; i < S->size(); ++i)
                for (std::size_t j = i; j < S->size(); ++j) {
                    ++pairs;
                    auto cert = cpair_certify((*S)[i], (*S)[j]);
                    auto fals = engine_->falsify((*S)[i], (*S)[j]);
                    certified += cert.has_value();
                    falsified += fals.has_value();
                    if (cert && fals) {
                        if (first.empty()) first = " first=" + to_string((*S)[i]) + " | " + to_string((*S)[j]);
                        ++violations;
                    }
                }
            if (U.N == U.n) break;
        }
        emit(t, subject_of(t), std::to_string(violations),
             "pairs=" + std::to_string(pairs) + " certified=" + std::to_string(certified) +
                 " falsified=" + std::to_string(falsified) + first);
    }

    void op_visible_inertia(TaskDecl const& t)
    {
        auto& mc = checker(t);
        auto o = mc.visible_inertia(mc.universe().index_of(need(t, "s")));
        emit(t, subject_of(t), to_string(o.value), outcome_witness(o));
    }

    void op_labels(TaskDecl const& t)
    {
        auto& mc = checker(t);
        auto const& U = mc.universe();
        for (std::size_t i = 0; i < U.lower.size(); ++i) {
            auto it = ws_.labels.find(U.lower_names[i]);
            if (it == ws_.labels.end()) continue;
            auto lit = it->second.find("visible_inertia");
            if (lit == it->second.end()) continue;
            auto const o = mc.visible_inertia(i);
            bool const truth = ground_truth_visible_inertia(U.lower[i], U.ell);
            TaskDecl row = t;
            row.expect = lit->second;
            row.decisive = true;
            // the ground truth must agree with the label as well
            std::string verdict = to_string(o.value);
            if ((truth ? "yes" : "no") != lit->second) verdict = "ground-truth-mismatch";
            emit(row, U.lower_names[i], verdict,
                 outcome_witness(o) + " ground_truth=" + (truth ? "yes" : "no"));
        }
    }

    void op_common_inertia(TaskDecl const& t)
    {
        auto& mc = checker(t);
        auto o = mc.common_inertia(indices(mc.universe(), need(t, "sigma")));
        emit(t, subject_of(t), to_string(o.value), outcome_witness(o));
    }

    void op_def_D(TaskDecl const& t)
    {
        auto& mc = checker(t);
        emit_set(t, mc.universe(), mc.def_D(indices(mc.universe(), need(t, "sigma"))));
    }

    void op_def_I(TaskDecl const& t)
    {
        auto& mc = checker(t);
        emit_set(t, mc.universe(), mc.def_I(indices(mc.universe(), need(t, "sigma"))));
    }

    void op_def_I_of_D(TaskDecl const& t)
    {
        auto& mc = checker(t);
        auto const D = mc.def_D(indices(mc.universe(), need(t, "sigma")));
        emit_set(t, mc.universe(), mc.def_I(D.membership));
    }

    void op_centralizer(TaskDecl const& t)
    {
        auto& mc = checker(t);
        auto const& U = mc.universe();
        if (U.n != U.N) throw precondition_error("the centralizer reduction needs n = N");
        auto const sigma = indices(U, need(t, "sigma"));
        auto const D = mc.def_D(sigma);
        auto const cz = mc.c_centralizer(sigma);
        auto const I = mc.def_I(D.members());
        auto const cc = mc.c_center(D.members());
        bool const decided = D.undecided().empty() && cz.undecided().empty() && I.undecided().empty() &&
                             cc.undecided().empty();
        std::string verdict = !decided ? "unknown"
                              : (D.membership == cz.membership && I.membership == cc.membership) ? "yes"
                                                                                                  : "no";
        emit(t, subject_of(t), verdict,
             "centralizer=" + bracket(names(U, cz.members())) + " center=" + bracket(names(U, cc.members())));
    }

    void op_qd_detect(TaskDecl const& t)
    {
        auto& mc = checker(t);
        auto const& U = mc.universe();
        auto const d = t.arg("d") ? static_cast<std::uint32_t>(need_number(t, "d")) : 2u;
        auto o = mc.quasi_divisorial_detect(indices(U, need(t, "I")), indices(U, need(t, "D")), d);
        emit(t, subject_of(t), to_string(o.value), outcome_witness(o));
    }

    void op_trdeg(TaskDecl const& t)
    {
        auto& mc = checker(t);
        auto const e = mc.trdeg_estimate();
        emit(t, subject_of(t), std::to_string(e.r),
             "subset=[" + e.witness + "] blocked=" + std::to_string(e.blocked));
    }

    std::string flag_name(FlagValuation const& v) const
    {
        if (v.is_trivial()) return "trivial";
        for (auto const& [name, id] : ws_.flags)
            if (ws_.registry->get(id) == v) return "flag#" + name;
        return to_string(v);
    }

    void op_associated_valuation(TaskDecl const& t)
    {
        auto const v = associated_valuation(fun_list(need(t, "sigma")));
        emit(t, subject_of(t), flag_name(v), to_string(v));
    }

    void op_h_probe(TaskDecl const& t)
    {
        auto const sigma = fun_list(need(t, "sigma"));
        auto const v = associated_valuation(sigma);
        std::size_t const count = need_number(t, "count");
        std::uint32_t const probe_constants = t.arg("probe_constants")
                                                  ? static_cast<std::uint32_t>(need_number(t, "probe_constants"))
                                                  : 2u;
        std::vector<BivRat> units;
        for (auto const& x : enum_test_elements(ws_.budget))
            if (is_unit(v, x)) units.push_back(x);
        if (units.empty()) throw precondition_error("no units of " + to_string(v) + " in the budget");
        std::mt19937_64 rng(opts_.seed);
        Budget probe = ws_.budget;
        probe.max_constants = probe_constants;
        std::vector<std::size_t> draws(count);
        for (auto& i : draws) i = rng() % units.size();
        // draws repeat and probing is deterministic, so each unit is probed once
        std::vector<std::size_t> distinct = draws;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        std::vector<char> refutes(distinct.size(), 0);
        auto work = [&](unsigned w) {
            for (std::size_t k = w; k < distinct.size(); k += engine_->threads())
                refutes[k] = h_membership_probe(units[distinct[k]], sigma, probe).is_no();
        };
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < engine_->threads(); ++w) pool.emplace_back(work, w);
        }
        std::size_t refuted = 0;
        std::string first;
        for (auto i : draws) {
            auto const k = std::lower_bound(distinct.begin(), distinct.end(), i) - distinct.begin();
            if (refutes[k]) {
                if (first.empty()) first = " first=" + to_string(units[i]);
                ++refuted;
            }
        }
        emit(t, subject_of(t), std::to_string(refuted),
             "probes=" + std::to_string(count) + " valuation=" + flag_name(v) + first);
    }

    void op_homomorphism(TaskDecl const& t)
    {
        auto const& U = ws_.universe(need(t, "universe"));
        std::size_t const count = need_number(t, "count");
        Budget small = ws_.budget;
        small.max_constants = std::min<std::uint32_t>(small.max_constants, 8);
        auto const xs = enum_test_elements(small);
        std::vector<Functional> funs = U.lower;
        funs.insert(funs.end(), U.upper.begin(), U.upper.end());
        std::mt19937_64 rng(opts_.seed);
        BivRat const minus_one(BivPoly(sc_.p, -1));
        std::size_t failures = 0;
        for (std::size_t k = 0; k < count; ++k) {
            auto const& s = funs[rng() % funs.size()];
            auto const& x = xs[rng() % xs.size()];
            auto const& y = xs[rng() % xs.size()];
            FlagId const f = static_cast<FlagId>(rng() % ws_.registry->size());
            auto const& flag = ws_.registry->get(f);
            bool ok = eval(s, x * y) == eval(s, x) + eval(s, y);
            ok = ok && eval(s, minus_one).is_zero();
            ok = ok && flag_value(flag, x * y) == flag_value(flag, x) + flag_value(flag, y);
            failures += !ok;
        }
        emit(t, subject_of(t), std::to_string(failures), "checks=" + std::to_string(count));
    }

    Scenario const& sc_;
    RunOptions opts_;
    Workspace ws_;
    std::unique_ptr<CPairEngine> engine_;
    std::map<std::string, std::unique_ptr<ModelChecker>> checkers_;
    std::ostringstream out_;
    RunResult res_;
};

}  // namespace

RunResult run_scenario(Scenario const& s, RunOptions const& opts)
{
    return Runner(s, opts).run();
}

}  // namespace minigal
