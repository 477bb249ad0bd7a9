#include "minigal/scenario.hpp"

#include "minigal/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace minigal {

namespace {

struct Field {
    std::string key;
    std::string value;  // without quotes
    bool quoted = false;
    bool bare = false;  // a word without '='
    std::size_t column = 0;
};

class LineLexer {
public:
    LineLexer(std::string_view text, std::size_t line) : s_(text), line_(line) {}

    [[noreturn]] void fail(std::string const& what, std::size_t col) const { throw parse_error(what, line_, col); }
    [[noreturn]] void fail(std::string const& what) const { fail(what, pos_ + 1); }

    void skip_space()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool done()
    {
        skip_space();
        return pos_ >= s_.size();
    }
    std::size_t column() const { return pos_ + 1; }

    std::string word()
    {
        skip_space();
        std::size_t const b = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                    s_[pos_] == '-' || s_[pos_] == '\''))
            ++pos_;
        if (b == pos_) fail("expected a name");
        return std::string(s_.substr(b, pos_ - b));
    }

    void expect(char c)
    {
        skip_space();
        if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    // key=value, or a bare word
    Field field()
    {
        skip_space();
        Field f;
        f.column = column();
        f.key = word();
        if (pos_ >= s_.size() || s_[pos_] != '=') {
            f.bare = true;
            return f;
        }
        ++pos_;
        if (pos_ >= s_.size() || std::isspace(static_cast<unsigned char>(s_[pos_]))) fail("missing value");
        if (s_[pos_] == '"') {
            f.quoted = true;
            f.value = quoted();
        } else if (s_[pos_] == '[') {
            f.value = bracketed();
        } else {
            std::size_t const b = pos_;
            while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            f.value = std::string(s_.substr(b, pos_ - b));
        }
        return f;
    }

    std::string quoted()
    {
        std::size_t const start = pos_;
        ++pos_;
        auto const close = s_.find('"', pos_);
        if (close == std::string_view::npos) fail("unterminated string", start + 1);
        std::string out(s_.substr(pos_, close - pos_));
        pos_ = close + 1;
        return out;
    }

    std::string bracketed()
    {
        std::size_t const start = pos_;
        int depth = 0;
        bool in_quote = false;
        for (; pos_ < s_.size(); ++pos_) {
            char const c = s_[pos_];
            if (c == '"') in_quote = !in_quote;
            if (in_quote) continue;
            if (c == '[' || c == '(') ++depth;
            if (c == ']' || c == ')') {
                if (--depth == 0) {
                    ++pos_;
                    return std::string(s_.substr(start, pos_ - start));
                }
            }
        }
        fail("unbalanced brackets", start + 1);
    }

    std::string rest()
    {
        skip_space();
        std::string out(s_.substr(pos_));
        pos_ = s_.size();
        return out;
    }

private:
    std::string_view s_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Top-level comma split of the inside of a bracket or paren group.
std::vector<std::string> split_group(std::string_view text, char open, char close)
{
    std::string const t = trim(text);
    if (t.size() < 2 || t.front() != open || t.back() != close)
        throw precondition_error(std::string("expected ") + open + "..." + close + ", got '" + t + "'");
    std::string_view inner(t.data() + 1, t.size() - 2);
    std::vector<std::string> out;
    int depth = 0;
    bool in_quote = false;
    std::size_t b = 0;
    for (std::size_t i = 0; i <= inner.size(); ++i) {
        if (i == inner.size() || (inner[i] == ',' && depth == 0 && !in_quote)) {
            auto item = trim(inner.substr(b, i - b));
            if (!item.empty()) out.push_back(item);
            else if (i < inner.size()) throw precondition_error("empty list item");
            b = i + 1;
            continue;
        }
        char const c = inner[i];
        if (c == '"') in_quote = !in_quote;
        if (in_quote) continue;
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
    }
    return out;
}

template <class T>
T to_number(std::string const& s, LineLexer const& lx, std::size_t col)
{
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) lx.fail("expected a number, got '" + s + "'", col);
    return v;
}

std::string unquote(std::string const& s)
{
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

std::string strip_flag_prefix(std::string const& s)
{
    return s.rfind("flag#", 0) == 0 ? s.substr(5) : s;
}

void parse_flag(FlagDecl& f, LineLexer& lx)
{
    std::size_t const col = lx.column();
    std::string const body = lx.rest();
    std::vector<std::string> items;
    try {
        items = split_group(body, '[', ']');
    } catch (precondition_error const& e) {
        lx.fail(e.what(), col);
    }
    for (auto const& item : items) {
        if (item == "asserted") {
            f.asserted = true;
            continue;
        }
        auto const sp = item.find(' ');
        std::string const key = item.substr(0, sp);
        std::string const val = sp == std::string::npos ? "" : unquote(trim(item.substr(sp)));
        if (key == "curve")
            f.curve = val;
        else if (key == "point")
            f.point = val;
        else
            lx.fail("unknown flag stage '" + key + "'", col);
    }
    if (f.curve.empty()) lx.fail("flag without a curve", col);
}

void parse_fun(FunDecl& f, LineLexer& lx)
{
    bool have_terms = false;
    while (!lx.done()) {
        auto const fld = lx.field();
        if (fld.key == "level") {
            f.level = to_number<std::uint32_t>(fld.value, lx, fld.column);
        } else if (fld.key == "terms") {
            have_terms = true;
            try {
                for (auto const& term : split_group(fld.value, '[', ']')) {
                    auto parts = split_group(term, '(', ')');
                    if (parts.size() != 3) lx.fail("a term is (flag#name, coordinate, coefficient)", fld.column);
                    TermDecl t;
                    t.flag = strip_flag_prefix(parts[0]);
                    t.coord = to_number<std::size_t>(parts[1], lx, fld.column);
                    t.coeff = to_number<std::int64_t>(parts[2], lx, fld.column);
                    f.terms.push_back(t);
                }
            } catch (precondition_error const& e) {
                lx.fail(e.what(), fld.column);
            }
        } else {
            lx.fail("unknown functional field '" + fld.key + "'", fld.column);
        }
    }
    if (!have_terms) lx.fail("functional without terms=[...]");
}

void parse_universe(UniverseDecl& u, LineLexer& lx)
{
    while (!lx.done()) {
        auto const fld = lx.field();
        try {
            if (fld.key == "lower") {
                u.lower = split_list(fld.value);
            } else if (fld.key == "upper") {
                u.upper = split_list(fld.value);
            } else if (fld.key == "lifts") {
                for (auto const& pair : split_group(fld.value, '[', ']')) {
                    auto parts = split_group(pair, '(', ')');
                    if (parts.size() != 2) lx.fail("a lift is (lower, upper)", fld.column);
                    u.lifts.emplace_back(parts[0], parts[1]);
                }
            } else {
                lx.fail("unknown universe field '" + fld.key + "'", fld.column);
            }
        } catch (precondition_error const& e) {
            lx.fail(e.what(), fld.column);
        }
    }
    if (u.lower.empty()) lx.fail("universe without lower=[...]");
}

void parse_task(TaskDecl& t, LineLexer& lx)
{
    t.op = lx.word();
    while (!lx.done()) {
        auto const fld = lx.field();
        if (fld.bare) {
            if (fld.key != "decisive") lx.fail("unexpected word '" + fld.key + "'", fld.column);
            t.decisive = true;
        } else if (fld.key == "expect") {
            t.expect = fld.value;
        } else {
            t.args.emplace_back(fld.key, fld.quoted ? "\"" + fld.value + "\"" : fld.value);
        }
    }
}

void parse_line(Scenario& sc, std::string_view text, std::size_t line, bool& have_config)
{
    LineLexer lx(text, line);
    std::string const head = lx.word();
    auto const hash = text.find('#');
    bool const declaration = hash != std::string_view::npos && trim(text.substr(0, hash)) == head;
    if (!declaration) {
        if (head == "config") {
            have_config = true;
            while (!lx.done()) {
                auto const f = lx.field();
                auto const v = to_number<std::uint32_t>(f.value, lx, f.column);
                if (f.key == "p") sc.p = v;
                else if (f.key == "ell") sc.ell = v;
                else if (f.key == "n") sc.n = v;
                else if (f.key == "N") sc.N = v;
                else lx.fail("unknown config key '" + f.key + "'", f.column);
            }
        } else if (head == "budget") {
            while (!lx.done()) {
                auto const f = lx.field();
                if (f.key == "preset") sc.budget.preset = f.value;
                else if (f.key == "factors") sc.budget.factors = to_number<std::uint32_t>(f.value, lx, f.column);
                else if (f.key == "exponent") sc.budget.exponent = to_number<std::int32_t>(f.value, lx, f.column);
                else if (f.key == "constants") sc.budget.constants = to_number<std::uint32_t>(f.value, lx, f.column);
                else lx.fail("unknown budget key '" + f.key + "'", f.column);
            }
            if (sc.budget.preset != "default" && sc.budget.preset != "small" && sc.budget.preset != "large")
                lx.fail("unknown budget preset '" + sc.budget.preset + "'");
        } else if (head == "field") {
            auto const f = lx.field();
            if (f.key != "vars") lx.fail("expected vars=", f.column);
            if (f.value == "t") sc.d = 1;
            else if (f.value == "t,u") sc.d = 2;
            else lx.fail("vars must be t or t,u", f.column);
            if (!lx.done()) lx.fail("trailing text");
        } else {
            lx.fail("unknown statement '" + head + "'", 1);
        }
        return;
    }
    lx.expect('#');
    std::string const name = lx.word();
    lx.expect(':');
    if (head == "flag") {
        FlagDecl f{name, {}, {}, false, line};
        parse_flag(f, lx);
        sc.flags.push_back(std::move(f));
    } else if (head == "fun") {
        FunDecl f{name, 1, {}, line};
        parse_fun(f, lx);
        sc.funs.push_back(std::move(f));
    } else if (head == "universe") {
        UniverseDecl u{name, {}, {}, {}, line};
        parse_universe(u, lx);
        sc.universes.push_back(std::move(u));
    } else if (head == "label") {
        LabelDecl l{name, {}, line};
        while (!lx.done()) {
            auto const f = lx.field();
            if (f.bare) lx.fail("labels are key=value", f.column);
            l.values.emplace_back(f.key, f.value);
        }
        sc.labels.push_back(std::move(l));
    } else if (head == "task") {
        TaskDecl t;
        t.name = name;
        t.line = line;
        parse_task(t, lx);
        sc.tasks.push_back(std::move(t));
    } else {
        lx.fail("unknown declaration kind '" + head + "'", 1);
    }
}

std::string quote_if_needed(std::string const& v)
{
    if (v.empty()) return "\"\"";
    if (v.front() == '[' || v.front() == '"') return v;
    if (v.find(' ') != std::string::npos) return "\"" + v + "\"";
    return v;
}

}  // namespace

std::vector<std::string> split_list(std::string_view text)
{
    return split_group(text, '[', ']');
}

std::optional<std::string> TaskDecl::arg(std::string const& key) const
{
    for (auto const& [k, v] : args)
        if (k == key) return unquote(v);
    return std::nullopt;
}

BudgetSpec BudgetSpec::parse(std::string_view text)
{
    BudgetSpec b;
    std::string s(text);
    if (s == "default" || s == "small" || s == "large") {
        b.preset = s;
        return b;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto const eq = item.find('=');
        if (eq == std::string::npos) throw precondition_error("budget items are key=value, got '" + item + "'");
        auto const key = trim(item.substr(0, eq));
        auto const val = trim(item.substr(eq + 1));
        if (key == "preset") {
            b.preset = val;
            continue;
        }
        long long v = 0;
        auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
        if (ec != std::errc() || p != val.data() + val.size() || v < 0)
            throw precondition_error("bad budget value '" + val + "'");
        if (key == "factors") b.factors = static_cast<std::uint32_t>(v);
        else if (key == "exponent") b.exponent = static_cast<std::int32_t>(v);
        else if (key == "constants") b.constants = static_cast<std::uint32_t>(v);
        else throw precondition_error("unknown budget key '" + key + "'");
    }
    if (b.preset != "default" && b.preset != "small" && b.preset != "large")
        throw precondition_error("unknown budget preset '" + b.preset + "'");
    return b;
}

Budget BudgetSpec::make(FieldSpec const& field, std::vector<BivPoly> const& curves) const
{
    Budget b = Budget::standard(field, curves);
    if (preset == "small") {
        b.max_factors = 1;
        b.max_constants = 20;
    } else if (preset == "large") {
        b.max_exponent = 3;
        b.max_constants = 400;
    }
    if (factors) b.max_factors = *factors;
    if (exponent) b.max_exponent = *exponent;
    if (constants) b.max_constants = *constants;
    return b;
}

Scenario parse_scenario(std::string_view text)
{
    Scenario sc;
    bool have_config = false;
    std::size_t line = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto const nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        auto const t = trim(raw);
        if (!t.empty() && t.front() != '#') parse_line(sc, raw, line, have_config);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (!have_config) throw parse_error("missing config line", 1, 1);
    return sc;
}

Scenario load_scenario(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open scenario " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize(Scenario const& s)
{
    std::ostringstream out;
    out << "config p=" << s.p << " ell=" << s.ell << " n=" << s.n << " N=" << s.N << "\n";
    out << "budget preset=" << s.budget.preset;
    if (s.budget.factors) out << " factors=" << *s.budget.factors;
    if (s.budget.exponent) out << " exponent=" << *s.budget.exponent;
    if (s.budget.constants) out << " constants=" << *s.budget.constants;
    out << "\nfield vars=" << (s.d == 1 ? "t" : "t,u") << "\n";
    if (!s.flags.empty()) out << "\n";
    for (auto const& f : s.flags) {
        out << "flag#" << f.name << ": [curve \"" << f.curve << "\"";
        if (f.point) out << ", point \"" << *f.point << "\"";
        if (f.asserted) out << ", asserted";
        out << "]\n";
    }
    if (!s.funs.empty()) out << "\n";
    for (auto const& f : s.funs) {
        out << "fun#" << f.name << ": level=" << f.level << " terms=[";
        for (std::size_t i = 0; i < f.terms.size(); ++i)
            out << (i ? ", " : "") << "(flag#" << f.terms[i].flag << ", " << f.terms[i].coord << ", "
                << f.terms[i].coeff << ")";
        out << "]\n";
    }
    if (!s.universes.empty()) out << "\n";
    for (auto const& u : s.universes) {
        auto list = [](std::vector<std::string> const& v) {
            std::string r = "[";
            for (std::size_t i = 0; i < v.size(); ++i) r += (i ? ", " : "") + v[i];
            return r + "]";
        };
        out << "universe#" << u.name << ": lower=" << list(u.lower);
        if (!u.upper.empty()) out << " upper=" << list(u.upper);
        if (!u.lifts.empty()) {
            out << " lifts=[";
            for (std::size_t i = 0; i < u.lifts.size(); ++i)
                out << (i ? ", " : "") << "(" << u.lifts[i].first << ", " << u.lifts[i].second << ")";
            out << "]";
        }
        out << "\n";
    }
    if (!s.labels.empty()) out << "\n";
    for (auto const& l : s.labels) {
        out << "label#" << l.fun << ":";
        for (auto const& [k, v] : l.values) out << " " << k << "=" << quote_if_needed(v);
        out << "\n";
    }
    if (!s.tasks.empty()) out << "\n";
    for (auto const& t : s.tasks) {
        out << "task#" << t.name << ": " << t.op;
        for (auto const& [k, v] : t.args) out << " " << k << "=" << quote_if_needed(v);
        if (t.expect) out << " expect=" << quote_if_needed(*t.expect);
        if (t.decisive) out << " decisive";
        out << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------- workspace

Functional const& Workspace::fun(std::string const& name) const
{
    auto it = funs.find(name);
    if (it == funs.end()) throw precondition_error("unknown functional '" + name + "'");
    return it->second;
}

Universe const& Workspace::universe(std::string const& name) const
{
    auto it = universes.find(name);
    if (it == universes.end()) throw precondition_error("unknown universe '" + name + "'");
    return it->second;
}

namespace {

template <class F>
auto at_line(std::size_t line, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (parse_error const& e) {
        throw parse_error(e.message, line, e.column);
    } catch (error const& e) {
        throw parse_error(e.what(), line, 1);
    }
}

}  // namespace

Workspace build_workspace(Scenario const& s)
{
    at_line(1, [&] {
        if (!is_prime(s.p)) throw precondition_error("p must be prime");
        if (!is_prime(s.ell)) throw precondition_error("ell must be prime");
        if (s.p == s.ell) throw precondition_error("p must differ from ell");
        if (s.N < s.n || BigInt(s.N) < const_R(s.n, s.ell))
            throw precondition_error("N = " + std::to_string(s.N) + " is below R(n)");
        return 0;
    });
    Workspace ws;
    FieldSpec const field{s.p, s.d};
    ws.registry = std::make_unique<FlagRegistry>(field);
    for (auto const& f : s.flags) {
        at_line(f.line, [&] {
            if (ws.flags.count(f.name)) throw precondition_error("flag '" + f.name + "' declared twice");
            Curve c = Curve::make(parse_poly(s.p, f.curve), f.asserted, s.d);
            FlagValuation v = f.point ? FlagValuation(std::move(c), parse_constant(s.p, *f.point))
                                      : FlagValuation(std::move(c));
            ws.flags.emplace(f.name, ws.registry->add(v));
            return 0;
        });
    }
    for (auto const& f : s.funs) {
        at_line(f.line, [&] {
            if (ws.funs.count(f.name)) throw precondition_error("functional '" + f.name + "' declared twice");
            Functional fn(*ws.registry, s.ell, f.level);
            for (auto const& t : f.terms) {
                auto it = ws.flags.find(t.flag);
                if (it == ws.flags.end()) throw precondition_error("unknown flag '" + t.flag + "'");
                fn.add_term(it->second, t.coord, Lambda(s.ell, f.level, t.coeff));
            }
            ws.funs.emplace(f.name, std::move(fn));
            return 0;
        });
    }
    for (auto const& u : s.universes) {
        at_line(u.line, [&] {
            if (ws.universes.count(u.name)) throw precondition_error("universe '" + u.name + "' declared twice");
            Universe U;
            U.ell = s.ell;
            U.n = s.n;
            U.N = s.N;
            for (auto const& name : u.lower) {
                U.lower.push_back(ws.fun(name));
                U.lower_names.push_back(name);
            }
            if (u.upper.empty()) {
                // canonical lifts only
                for (std::size_t i = 0; i < U.lower.size(); ++i) {
                    U.upper.push_back(lift(U.lower[i], s.N));
                    U.upper_names.push_back(s.N == s.n ? U.lower_names[i] : U.lower_names[i] + "'");
                    U.lifts.push_back({i});
                }
            } else {
                for (auto const& name : u.upper) {
                    U.upper.push_back(ws.fun(name));
                    U.upper_names.push_back(name);
                }
                U.lifts.assign(U.lower.size(), {});
                for (auto const& [lo, up] : u.lifts) {
                    auto const i = U.index_of(lo);
                    auto it = std::find(U.upper_names.begin(), U.upper_names.end(), up);
                    if (it == U.upper_names.end()) throw precondition_error("'" + up + "' is not in upper");
                    U.lifts[i].push_back(static_cast<std::size_t>(it - U.upper_names.begin()));
                }
            }
            validate(U);
            ws.universes.emplace(u.name, std::move(U));
            return 0;
        });
    }
    for (auto const& l : s.labels) {
        at_line(l.line, [&] {
            ws.fun(l.fun);
            auto& m = ws.labels[l.fun];
            for (auto const& [k, v] : l.values) m[k] = v;
            return 0;
        });
    }
    ws.budget = s.budget.make(field, ws.registry->search_polys());
    return ws;
}

}  // namespace minigal
