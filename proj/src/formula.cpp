#include "lnf/formula.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace lnf {

void PredicateTable::add(Predicate p) {
    if (index_.count(p.name)) throw FormulaError("duplicate predicate " + p.name);
    if (!preds_.empty() && p.a.size() != preds_.front().a.size())
        throw FormulaError("predicate " + p.name + " has dimension " + std::to_string(p.a.size()) + ", expected " +
                           std::to_string(preds_.front().a.size()));
    index_[p.name] = preds_.size();
    preds_.push_back(std::move(p));
}

const Predicate* PredicateTable::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &preds_[it->second];
}

const Predicate& PredicateTable::at(const std::string& name) const {
    const Predicate* p = find(name);
    if (!p) throw FormulaError("unknown predicate " + name);
    return *p;
}

PredicateTable PredicateTable::from_json(const std::string& text) {
    PredicateTable t;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        for (const auto& e : j.at("predicates"))
            t.add({e.at("name").get<std::string>(), e.at("a").get<std::vector<double>>(), e.value("b", 0.0)});
    } catch (const nlohmann::json::exception& e) {
        throw FormulaError(std::string("predicate table: ") + e.what());
    }
    return t;
}

PredicateTable PredicateTable::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FormulaError("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return from_json(ss.str());
}

std::string PredicateTable::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const Predicate& p : preds_) arr.push_back({{"name", p.name}, {"a", p.a}, {"b", p.b}});
    return nlohmann::json{{"predicates", arr}}.dump(2);
}

ParseError::ParseError(const std::string& msg, int l, int c)
    : FormulaError("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg), line(l), col(c) {}

namespace {

void check_interval(int k1, int k2) {
    if (k1 < 0 || k2 < k1) throw FormulaError("bad interval [" + std::to_string(k1) + "," + std::to_string(k2) + "]");
}

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

}  // namespace

FormulaPtr atom(std::string pred, bool neg) {
    Formula f;
    f.pred = std::move(pred);
    f.neg = neg;
    return make(std::move(f));
}

FormulaPtr timed_atom(std::string pred, int k, bool neg) {
    if (k < 0) throw FormulaError("negative time index");
    Formula f;
    f.pred = std::move(pred);
    f.neg = neg;
    f.time = k;
    return make(std::move(f));
}

FormulaPtr conj(std::vector<FormulaPtr> kids) {
    if (kids.empty()) throw FormulaError("empty conjunction");
    Formula f;
    f.op = Op::And;
    f.kids = std::move(kids);
    return make(std::move(f));
}

FormulaPtr disj(std::vector<FormulaPtr> kids) {
    if (kids.empty()) throw FormulaError("empty disjunction");
    Formula f;
    f.op = Op::Or;
    f.kids = std::move(kids);
    return make(std::move(f));
}

FormulaPtr always(int k1, int k2, FormulaPtr c) {
    check_interval(k1, k2);
    Formula f;
    f.op = Op::Always;
    f.k1 = k1;
    f.k2 = k2;
    f.kids = {std::move(c)};
    return make(std::move(f));
}

FormulaPtr eventually(int k1, int k2, FormulaPtr c) {
    check_interval(k1, k2);
    Formula f;
    f.op = Op::Eventually;
    f.k1 = k1;
    f.k2 = k2;
    f.kids = {std::move(c)};
    return make(std::move(f));
}

FormulaPtr until(int k1, int k2, FormulaPtr left, FormulaPtr right) {
    check_interval(k1, k2);
    Formula f;
    f.op = Op::Until;
    f.k1 = k1;
    f.k2 = k2;
    f.kids = {std::move(left), std::move(right)};
    return make(std::move(f));
}

FormulaPtr negate(const FormulaPtr& f) {
    switch (f->op) {
        case Op::Atom: {
            Formula g = *f;
            g.neg = !g.neg;
            return make(std::move(g));
        }
        case Op::And:
        case Op::Or: {
            std::vector<FormulaPtr> kids;
            for (const auto& c : f->kids) kids.push_back(negate(c));
            return f->op == Op::And ? disj(std::move(kids)) : conj(std::move(kids));
        }
        case Op::Always: return eventually(f->k1, f->k2, negate(f->kids[0]));
        case Op::Eventually: return always(f->k1, f->k2, negate(f->kids[0]));
        case Op::Until: throw FormulaError("negated Until is not supported in negation-normal form");
    }
    return f;
}

bool same(const Formula& a, const Formula& b) {
    if (a.op != b.op || a.kids.size() != b.kids.size()) return false;
    if (a.op == Op::Atom) return a.pred == b.pred && a.neg == b.neg && a.time == b.time;
    if ((a.op == Op::Always || a.op == Op::Eventually || a.op == Op::Until) && (a.k1 != b.k1 || a.k2 != b.k2)) return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!same(*a.kids[i], *b.kids[i])) return false;
    return true;
}

namespace {

std::string interval(const Formula& f) { return "[" + std::to_string(f.k1) + "," + std::to_string(f.k2) + "]"; }

std::string wrapped(const Formula& f) {
    std::string s = to_string(f);
    return f.op == Op::Atom ? s : "(" + s + ")";
}

}  // namespace

std::string to_string(const Formula& f) {
    switch (f.op) {
        case Op::Atom: return (f.neg ? "!" : "") + f.pred + (f.time >= 0 ? "@" + std::to_string(f.time) : "");
        case Op::And:
        case Op::Or: {
            std::string s;
            for (std::size_t i = 0; i < f.kids.size(); ++i) {
                if (i) s += f.op == Op::And ? " & " : " | ";
                s += wrapped(*f.kids[i]);
            }
            return s;
        }
        case Op::Always: return "G" + interval(f) + " " + wrapped(*f.kids[0]);
        case Op::Eventually: return "F" + interval(f) + " " + wrapped(*f.kids[0]);
        case Op::Until: return wrapped(*f.kids[0]) + " U" + interval(f) + " " + wrapped(*f.kids[1]);
    }
    return "";
}

std::size_t node_count(const Formula& f) {
    std::size_t n = 1;
    for (const auto& c : f.kids) n += node_count(*c);
    return n;
}

namespace {

class Parser {
public:
    Parser(const std::string& text, const PredicateTable* preds) : s_(text), preds_(preds) {}

    FormulaPtr run() {
        FormulaPtr f = parse_or();
        skip();
        if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return f;
    }

private:
    const std::string& s_;
    const PredicateTable* preds_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
    }

    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        advance();
    }

    // G, F or U immediately followed (after spaces) by '['
    bool temporal_keyword(char kw) {
        skip();
        if (pos_ >= s_.size() || s_[pos_] != kw) return false;
        std::size_t p = pos_ + 1;
        while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
        return p < s_.size() && s_[p] == '[';
    }

    int integer() {
        skip();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a non-negative integer");
        long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            if (v > std::numeric_limits<int>::max()) fail("integer too large");
            advance();
        }
        return static_cast<int>(v);
    }

    std::pair<int, int> bounds() {
        expect('[');
        int line = line_, col = col_;
        int a = integer();
        expect(',');
        int b = integer();
        expect(']');
        if (a > b) throw ParseError("interval lower bound exceeds upper bound", line, col);
        return {a, b};
    }

    FormulaPtr parse_or() {
        std::vector<FormulaPtr> kids{parse_and()};
        while (peek('|')) {
            advance();
            kids.push_back(parse_and());
        }
        return kids.size() == 1 ? kids[0] : disj(std::move(kids));
    }

    FormulaPtr parse_and() {
        std::vector<FormulaPtr> kids{parse_until()};
        while (peek('&')) {
            advance();
            kids.push_back(parse_until());
        }
        return kids.size() == 1 ? kids[0] : conj(std::move(kids));
    }

    FormulaPtr parse_until() {
        FormulaPtr left = parse_unary();
        if (!temporal_keyword('U')) return left;
        advance();
        auto [a, b] = bounds();
        return until(a, b, left, parse_until());
    }

    FormulaPtr parse_unary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '!') {
            advance();
            FormulaPtr inner = parse_unary();
            try {
                return negate(inner);
            } catch (const FormulaError& e) {
                fail(e.what());
            }
        }
        if (temporal_keyword('G') || temporal_keyword('F')) {
            advance();
            auto [a, b] = bounds();
            FormulaPtr inner = parse_unary();
            return c == 'G' ? always(a, b, inner) : eventually(a, b, inner);
        }
        if (c == '(') {
            advance();
            FormulaPtr f = parse_or();
            expect(')');
            return f;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            int line = line_, col = col_;
            std::string name;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                name.push_back(s_[pos_]);
                advance();
            }
            if (preds_ && !preds_->find(name)) throw ParseError("unknown predicate '" + name + "'", line, col);
            if (pos_ < s_.size() && s_[pos_] == '@') {
                advance();
                return timed_atom(name, integer());
            }
            return atom(name);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

}  // namespace

FormulaPtr parse_spec(const std::string& text, const PredicateTable* preds) { return Parser(text, preds).run(); }

int horizon(const Formula& f) {
    switch (f.op) {
        case Op::Atom: return std::max(f.time, 0);
        case Op::And:
        case Op::Or: {
            int h = 0;
            for (const auto& c : f.kids) h = std::max(h, horizon(*c));
            return h;
        }
        case Op::Always:
        case Op::Eventually: return f.k2 + horizon(*f.kids[0]);
        case Op::Until: return f.k2 + std::max(horizon(*f.kids[0]), horizon(*f.kids[1]));
    }
    return 0;
}

namespace {

FormulaPtr expand_at(const FormulaPtr& f, int k, int T) {
    switch (f->op) {
        case Op::Atom:
            if (f->time >= 0) return f;
            if (k > T) throw FormulaError("atom " + f->pred + " at step " + std::to_string(k) + " exceeds horizon " + std::to_string(T));
            return timed_atom(f->pred, k, f->neg);
        case Op::And:
        case Op::Or: {
            std::vector<FormulaPtr> kids;
            for (const auto& c : f->kids) kids.push_back(expand_at(c, k, T));
            return f->op == Op::And ? conj(std::move(kids)) : disj(std::move(kids));
        }
        case Op::Always:
        case Op::Eventually: {
            if (k + f->k2 > T)
                throw FormulaError("window [" + std::to_string(k + f->k1) + "," + std::to_string(k + f->k2) + "] exceeds horizon " +
                                   std::to_string(T));
            std::vector<FormulaPtr> kids;
            for (int t = k + f->k1; t <= k + f->k2; ++t) kids.push_back(expand_at(f->kids[0], t, T));
            return f->op == Op::Always ? conj(std::move(kids)) : disj(std::move(kids));
        }
        case Op::Until: {
            if (k + f->k2 > T)
                throw FormulaError("until window exceeds horizon " + std::to_string(T));
            std::vector<FormulaPtr> alts;
            for (int t = k + f->k1; t <= k + f->k2; ++t) {
                std::vector<FormulaPtr> parts{expand_at(f->kids[1], t, T)};
                for (int s = k + f->k1; s <= t; ++s) parts.push_back(expand_at(f->kids[0], s, T));
                alts.push_back(conj(std::move(parts)));
            }
            return disj(std::move(alts));
        }
    }
    return f;
}

void collect_atoms(const Formula& f, std::set<TimedAtom>& out) {
    if (f.op == Op::Atom) {
        if (f.time < 0) throw FormulaError("formula is not time-expanded");
        out.insert({f.pred, f.time, false});
        return;
    }
    if (f.op != Op::And && f.op != Op::Or) throw FormulaError("formula is not propositional");
    for (const auto& c : f.kids) collect_atoms(*c, out);
}

}  // namespace

FormulaPtr time_expand(const FormulaPtr& f, int T) {
    if (T < 0) throw FormulaError("negative horizon");
    return expand_at(f, 0, T);
}

std::string to_string(const TimedAtom& a) { return (a.neg ? "!" : "") + a.pred + "@" + std::to_string(a.k); }

std::vector<TimedAtom> atoms_of(const Formula& p) {
    std::set<TimedAtom> s;
    collect_atoms(p, s);
    return {s.begin(), s.end()};
}

namespace {

using Alt = CdForm::Alternative;
using Section = std::vector<Alt>;

bool contradictory(const Alt& a) {
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i].pred == a[i - 1].pred && a[i].k == a[i - 1].k) return true;  // sorted: neg differs
    return false;
}

Alt merge(const Alt& a, const Alt& b) {
    Alt out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void dedup(Section& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

// Multiplies the sections of a conjunction out into one disjunction.
Section flatten(const std::vector<Section>& secs, std::size_t limit) {
    Section acc{Alt{}};
    for (const Section& s : secs) {
        Section next;
        for (const Alt& a : acc)
            for (const Alt& b : s) {
                Alt m = merge(a, b);
                if (contradictory(m)) continue;
                next.push_back(std::move(m));
                if (next.size() > limit) throw CdSizeError("conjunctive-disjunctive form exceeds " + std::to_string(limit) + " alternatives");
            }
        dedup(next);
        acc = std::move(next);
    }
    return acc;
}

std::vector<Section> cd_rec(const Formula& f, std::size_t limit) {
    switch (f.op) {
        case Op::Atom:
            if (f.time < 0) throw FormulaError("formula is not time-expanded");
            return {Section{Alt{TimedAtom{f.pred, f.time, f.neg}}}};
        case Op::And: {
            std::vector<Section> out;
            Alt single;
            bool have_single = false;
            for (const auto& c : f.kids) {
                for (Section& s : cd_rec(*c, limit)) {
                    if (s.size() == 1) {
                        single = merge(single, s[0]);
                        have_single = true;
                    } else {
                        out.push_back(std::move(s));
                    }
                }
            }
            if (have_single) out.insert(out.begin(), contradictory(single) ? Section{} : Section{single});
            return out;
        }
        case Op::Or: {
            Section all;
            for (const auto& c : f.kids) {
                Section s = flatten(cd_rec(*c, limit), limit);
                all.insert(all.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
                if (all.size() > limit) throw CdSizeError("conjunctive-disjunctive form exceeds " + std::to_string(limit) + " alternatives");
            }
            dedup(all);
            return {all};
        }
        default: throw FormulaError("formula is not propositional");
    }
}

}  // namespace

CdForm to_cd_form(const Formula& p, std::size_t limit) {
    CdForm c;
    c.sections = cd_rec(p, limit);
    return c;
}

namespace {

bool value_at(const BoolTrace& trace, const std::string& pred, int k) {
    auto it = trace.find(pred);
    if (it == trace.end()) throw FormulaError("trace has no values for " + pred);
    if (k < 0 || k >= static_cast<int>(it->second.size()))
        throw FormulaError("trace for " + pred + " too short for step " + std::to_string(k));
    return it->second[k];
}

}  // namespace

namespace {

void pred_names(const Formula& f, std::set<std::string>& out) {
    if (f.op == Op::Atom) out.insert(f.pred);
    for (const auto& c : f.kids) pred_names(*c, out);
}

bool sat_rec(const Formula& f, const BoolTrace& trace, int k) {
    switch (f.op) {
        case Op::Atom: return value_at(trace, f.pred, f.time >= 0 ? f.time : k) != f.neg;
        case Op::And:
            for (const auto& c : f.kids)
                if (!sat_rec(*c, trace, k)) return false;
            return true;
        case Op::Or:
            for (const auto& c : f.kids)
                if (sat_rec(*c, trace, k)) return true;
            return false;
        case Op::Always:
            for (int t = k + f.k1; t <= k + f.k2; ++t)
                if (!sat_rec(*f.kids[0], trace, t)) return false;
            return true;
        case Op::Eventually:
            for (int t = k + f.k1; t <= k + f.k2; ++t)
                if (sat_rec(*f.kids[0], trace, t)) return true;
            return false;
        case Op::Until:
            for (int t = k + f.k1; t <= k + f.k2; ++t) {
                if (!sat_rec(*f.kids[1], trace, t)) continue;
                bool hold = true;
                for (int s = k + f.k1; s <= t && hold; ++s) hold = sat_rec(*f.kids[0], trace, s);
                if (hold) return true;
            }
            return false;
    }
    return false;
}

}  // namespace

bool eval_satisfaction(const Formula& f, const BoolTrace& trace, int start) {
    std::set<std::string> names;
    pred_names(f, names);
    const int last = start + horizon(f);
    for (const std::string& n : names) {
        auto it = trace.find(n);
        if (it == trace.end()) throw FormulaError("trace has no values for " + n);
        if (static_cast<int>(it->second.size()) <= last) throw FormulaError("trace for " + n + " too short for step " + std::to_string(last));
    }
    return sat_rec(f, trace, start);
}

bool eval_satisfaction(const CdForm& c, const BoolTrace& trace) {
    for (const auto& sec : c.sections) {
        bool any = false;
        for (const auto& alt : sec) {
            bool all = true;
            for (const TimedAtom& a : alt)
                if (value_at(trace, a.pred, a.k) == a.neg) {
                    all = false;
                    break;
                }
            if (all) {
                any = true;
                break;
            }
        }
        if (!any) return false;
    }
    return true;
}

namespace {

double rob_rec(const Formula& f, const Signal& x, const PredicateTable& preds, int k) {
    switch (f.op) {
        case Op::Atom: {
            int t = f.time >= 0 ? f.time : k;
            if (t < 0 || t >= static_cast<int>(x.size())) throw FormulaError("signal too short for step " + std::to_string(t));
            const Predicate& p = preds.at(f.pred);
            if (x[t].size() != p.a.size()) throw FormulaError("state dimension mismatch for " + p.name);
            double r = p.b;
            for (std::size_t i = 0; i < p.a.size(); ++i) r += p.a[i] * x[t][i];
            return f.neg ? -r : r;
        }
        case Op::And:
        case Op::Or: {
            double r = f.op == Op::And ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
            for (const auto& c : f.kids) {
                double v = rob_rec(*c, x, preds, k);
                r = f.op == Op::And ? std::min(r, v) : std::max(r, v);
            }
            return r;
        }
        case Op::Always:
        case Op::Eventually: {
            bool mn = f.op == Op::Always;
            double r = mn ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
            for (int t = k + f.k1; t <= k + f.k2; ++t) {
                double v = rob_rec(*f.kids[0], x, preds, t);
                r = mn ? std::min(r, v) : std::max(r, v);
            }
            return r;
        }
        case Op::Until: {
            double r = -std::numeric_limits<double>::infinity();
            for (int t = k + f.k1; t <= k + f.k2; ++t) {
                double v = rob_rec(*f.kids[1], x, preds, t);
                for (int s = k + f.k1; s <= t; ++s) v = std::min(v, rob_rec(*f.kids[0], x, preds, s));
                r = std::max(r, v);
            }
            return r;
        }
    }
    return 0.0;
}

}  // namespace

double eval_robustness(const Formula& f, const Signal& x, const PredicateTable& preds, int start) {
    if (start + horizon(f) >= static_cast<int>(x.size())) throw FormulaError("signal too short for step " + std::to_string(start + horizon(f)));
    return rob_rec(f, x, preds, start);
}

BoolTrace truth_trace(const Signal& x, const PredicateTable& preds) {
    BoolTrace tr;
    for (const Predicate& p : preds.all()) {
        std::vector<bool> v;
        for (const auto& xs : x) {
            double r = p.b;
            for (std::size_t i = 0; i < p.a.size(); ++i) r += p.a[i] * xs.at(i);
            v.push_back(r >= 0.0);
        }
        tr[p.name] = std::move(v);
    }
    return tr;
}

}  // namespace lnf
