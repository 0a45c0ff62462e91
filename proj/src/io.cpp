#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "lnf/milp.hpp"

namespace lnf {

namespace {

const std::set<std::string> kReserved = {"inf",   "infinity", "free",     "end",     "st",      "s.t.",
                                         "bounds", "bound",   "binaries", "binary",  "bin",     "generals",
                                         "general", "gen",    "minimize", "minimum", "min",     "maximize",
                                         "maximum", "max",    "subject",  "such",    "obj",     "rhs",
                                         "bnd",    "marker"};

bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_.#@$%&{}|~!?()").find(c) != std::string_view::npos;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string clean(const std::string& s) {
    std::string out;
    for (char c : s) out.push_back(name_char(c) ? c : '_');
    if (out.empty()) out = "_";
    if (std::isdigit(static_cast<unsigned char>(out[0])) || out[0] == '.') out = "_" + out;
    if (kReserved.count(lower(out))) out = "_" + out;
    return out;
}

// Sanitized unique names for one namespace; changed names go into `renamed`.
std::vector<std::string> unique_names(const std::vector<std::string>& raw, NameMap* renamed) {
    std::set<std::string> used;
    std::vector<std::string> out;
    out.reserve(raw.size());
    for (const std::string& r : raw) {
        std::string base = clean(r), nm = base;
        for (int k = 2; used.count(nm); ++k) nm = base + "_" + std::to_string(k);
        used.insert(nm);
        if (renamed && nm != r) (*renamed)[r] = nm;
        out.push_back(nm);
    }
    return out;
}

std::string num(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

double parse_num(const std::string& tok) {
    std::string t = lower(tok);
    if (t == "inf" || t == "+inf" || t == "infinity" || t == "+infinity" || t == "1e30" || t == "1e+30") return kInf;
    if (t == "-inf" || t == "-infinity" || t == "-1e30" || t == "-1e+30") return -kInf;
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw ModelError("bad number '" + tok + "'");
    return v;
}

bool is_num(const std::string& tok) {
    char* end = nullptr;
    std::strtod(tok.c_str(), &end);
    return end != tok.c_str() && *end == '\0';
}

void save(const std::string& text, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ModelError("cannot open " + path + " for writing");
    f << text;
    if (!f) throw ModelError("write failed for " + path);
}

}  // namespace

std::string write_mps(const Model& m, NameMap* renamed) {
    m.validate();
    std::vector<std::string> vraw, rraw;
    for (const Variable& v : m.vars) vraw.push_back(v.name);
    for (const Constraint& r : m.rows) rraw.push_back(r.name);
    const std::vector<std::string> vn = unique_names(vraw, renamed), rn = unique_names(rraw, renamed);
    std::size_t w = 8;
    for (const auto& s : vn) w = std::max(w, s.size());
    for (const auto& s : rn) w = std::max(w, s.size());

    std::vector<std::vector<std::pair<int, double>>> cols(m.num_vars());
    for (int i = 0; i < m.num_rows(); ++i)
        for (const Term& t : m.rows[i].terms) cols[t.var].emplace_back(i, t.coef);

    std::ostringstream o;
    o << "NAME          " << clean(m.name) << "\n";
    o << "ROWS\n N  OBJ\n";
    for (int i = 0; i < m.num_rows(); ++i) {
        const char* s = m.rows[i].sense == Sense::Le ? "L" : m.rows[i].sense == Sense::Ge ? "G" : "E";
        o << " " << s << "  " << rn[i] << "\n";
    }
    o << "COLUMNS\n";
    bool in_int = false;
    auto entry = [&](const std::string& col, const std::string& row, double v) {
        o << "    " << pad(col, w) << "  " << pad(row, w) << "  " << num(v) << "\n";
    };
    for (int j = 0; j < m.num_vars(); ++j) {
        bool bin = m.vars[j].kind == VarKind::Binary;
        if (bin != in_int) {
            o << "    MARKER                 'MARKER'                 " << (bin ? "'INTORG'" : "'INTEND'") << "\n";
            in_int = bin;
        }
        if (m.obj[j] != 0.0 || cols[j].empty()) entry(vn[j], "OBJ", m.obj[j]);
        for (auto [i, a] : cols[j]) entry(vn[j], rn[i], a);
    }
    if (in_int) o << "    MARKER                 'MARKER'                 'INTEND'\n";
    o << "RHS\n";
    if (m.obj_const != 0.0) entry("RHS", "OBJ", -m.obj_const);
    for (int i = 0; i < m.num_rows(); ++i)
        if (m.rows[i].rhs != 0.0) entry("RHS", rn[i], m.rows[i].rhs);
    o << "BOUNDS\n";
    auto bound = [&](const char* type, int j, const std::string& v) {
        o << " " << type << " BND       " << pad(vn[j], w) << (v.empty() ? "" : "  " + v) << "\n";
    };
    for (int j = 0; j < m.num_vars(); ++j) {
        const Variable& v = m.vars[j];
        if (v.lb == v.ub) {
            bound("FX", j, num(v.lb));
            continue;
        }
        if (v.lb == -kInf && v.ub == kInf) {
            bound("FR", j, "");
            continue;
        }
        if (v.lb == -kInf)
            bound("MI", j, "");
        else if (v.lb != 0.0 || v.kind == VarKind::Binary)
            bound("LO", j, num(v.lb));
        if (v.ub != kInf) bound("UP", j, num(v.ub));
    }
    if (!m.quad.empty()) {
        o << "QUADOBJ\n";
        for (const QuadTerm& q : m.quad) {
            // lower triangle of Q in 1/2 x'Qx
            int a = std::max(q.i, q.j), b = std::min(q.i, q.j);
            entry(vn[a], vn[b], q.i == q.j ? 2.0 * q.coef : q.coef);
        }
    }
    o << "ENDATA\n";
    return o.str();
}

Model read_mps(const std::string& text) {
    Model m;
    std::istringstream in(text);
    std::string line, section, objrow;
    std::unordered_map<std::string, int> rowidx, colidx;
    std::vector<std::vector<Term>> terms;
    std::vector<char> declared_int;
    std::vector<char> lb_set, ub_set;
    bool in_int = false;
    int lineno = 0;
    auto fail = [&](const std::string& msg) { throw ModelError("mps line " + std::to_string(lineno) + ": " + msg); };
    auto col_of = [&](const std::string& nm) {
        auto it = colidx.find(nm);
        if (it != colidx.end()) return it->second;
        int j = m.add_var(nm, VarKind::Continuous, 0.0, kInf);
        colidx[nm] = j;
        declared_int.push_back(in_int);
        lb_set.push_back(0);
        ub_set.push_back(0);
        return j;
    };
    auto existing_col = [&](const std::string& nm) {
        auto it = colidx.find(nm);
        if (it == colidx.end()) fail("unknown column " + nm);
        return it->second;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '*') continue;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (!std::isspace(static_cast<unsigned char>(line[0]))) {
            section = tok[0];
            if (section == "NAME") {
                if (tok.size() > 1) m.name = tok[1];
            } else if (section == "ENDATA") {
                break;
            } else if (section == "OBJSENSE") {
                if (tok.size() > 1 && tok[1] != "MIN" && tok[1] != "MINIMIZE") fail("only minimization is supported");
            } else if (section != "ROWS" && section != "COLUMNS" && section != "RHS" && section != "BOUNDS" &&
                       section != "QUADOBJ" && section != "QMATRIX" && section != "RANGES") {
                fail("unknown section " + section);
            }
            continue;
        }
        if (section == "ROWS") {
            if (tok.size() != 2) fail("expected row type and name");
            if (tok[0] == "N") {
                if (objrow.empty()) objrow = tok[1];
                continue;
            }
            Sense s;
            if (tok[0] == "L")
                s = Sense::Le;
            else if (tok[0] == "G")
                s = Sense::Ge;
            else if (tok[0] == "E")
                s = Sense::Eq;
            else
                fail("bad row type " + tok[0]);
            rowidx[tok[1]] = static_cast<int>(m.rows.size());
            m.rows.push_back({tok[1], {}, s, 0.0});
            terms.emplace_back();
        } else if (section == "COLUMNS") {
            if (tok.size() >= 3 && tok[1] == "'MARKER'") {
                if (tok[2] == "'INTORG'")
                    in_int = true;
                else if (tok[2] == "'INTEND'")
                    in_int = false;
                else
                    fail("bad marker");
                continue;
            }
            if (tok.size() != 3 && tok.size() != 5) fail("expected column, row, value pairs");
            int j = col_of(tok[0]);
            for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                double v = parse_num(tok[k + 1]);
                if (tok[k] == objrow) {
                    m.obj[j] += v;
                } else {
                    auto it = rowidx.find(tok[k]);
                    if (it == rowidx.end()) fail("unknown row " + tok[k]);
                    terms[it->second].push_back({j, v});
                }
            }
        } else if (section == "RHS") {
            if (tok.size() != 3 && tok.size() != 5 && tok.size() != 2 && tok.size() != 4) fail("bad RHS entry");
            std::size_t k = tok.size() % 2 == 1 ? 1 : 0;
            for (; k + 1 < tok.size(); k += 2) {
                double v = parse_num(tok[k + 1]);
                if (tok[k] == objrow) {
                    m.obj_const = -v;
                } else {
                    auto it = rowidx.find(tok[k]);
                    if (it == rowidx.end()) fail("unknown row " + tok[k]);
                    m.rows[it->second].rhs = v;
                }
            }
        } else if (section == "RANGES") {
            fail("RANGES section is not supported");
        } else if (section == "BOUNDS") {
            if (tok.size() < 3) fail("bad bound entry");
            const std::string& type = tok[0];
            int j = existing_col(tok[2]);
            Variable& v = m.vars[j];
            double val = tok.size() > 3 ? parse_num(tok[3]) : 0.0;
            if (type == "UP") {
                if (val < 0.0 && v.lb == 0.0 && !lb_set[j]) v.lb = -kInf;
                v.ub = val;
                ub_set[j] = 1;
            } else if (type == "LO") {
                v.lb = val;
                lb_set[j] = 1;
            } else if (type == "FX") {
                v.lb = v.ub = val;
                lb_set[j] = ub_set[j] = 1;
            } else if (type == "FR") {
                v.lb = -kInf;
                v.ub = kInf;
                lb_set[j] = ub_set[j] = 1;
            } else if (type == "MI") {
                v.lb = -kInf;
                lb_set[j] = 1;
            } else if (type == "PL") {
                v.ub = kInf;
                ub_set[j] = 1;
            } else if (type == "BV") {
                v.lb = 0.0;
                v.ub = 1.0;
                lb_set[j] = ub_set[j] = 1;
                declared_int[j] = 1;
            } else {
                fail("unsupported bound type " + type);
            }
        } else if (section == "QUADOBJ" || section == "QMATRIX") {
            if (tok.size() != 3) fail("bad quadratic entry");
            int a = existing_col(tok[0]), b = existing_col(tok[1]);
            double v = parse_num(tok[2]);
            if (a == b)
                m.add_quad(a, b, 0.5 * v);
            else if (section == "QUADOBJ")
                m.add_quad(a, b, v);
            else
                m.add_quad(a, b, 0.5 * v);  // QMATRIX lists both triangles
        } else {
            fail("data outside a section");
        }
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
        Constraint& r = m.rows[i];
        std::string nm = r.name;
        Sense s = r.sense;
        double rhs = r.rhs;
        std::vector<Term> t = std::move(terms[i]);
        std::sort(t.begin(), t.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
        std::vector<Term> merged;
        for (const Term& x : t) {
            if (!merged.empty() && merged.back().var == x.var)
                merged.back().coef += x.coef;
            else
                merged.push_back(x);
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Term& x) { return x.coef == 0.0; }), merged.end());
        r = {nm, std::move(merged), s, rhs};
    }
    for (int j = 0; j < m.num_vars(); ++j) {
        if (!declared_int[j]) continue;
        Variable& v = m.vars[j];
        if (!ub_set[j]) v.ub = 1.0;
        if (v.lb < 0.0 || v.ub > 1.0) throw ModelError("general integer column " + v.name + " is not supported");
        v.kind = VarKind::Binary;
    }
    m.validate();
    return m;
}

std::string write_lp(const Model& m, NameMap* renamed) {
    m.validate();
    std::vector<std::string> vraw, rraw;
    for (const Variable& v : m.vars) vraw.push_back(v.name);
    for (const Constraint& r : m.rows) rraw.push_back(r.name);
    const std::vector<std::string> vn = unique_names(vraw, renamed), rn = unique_names(rraw, renamed);

    auto signed_term = [](double c) { return (c < 0.0 ? " - " : " + ") + num(std::fabs(c)); };
    std::ostringstream o;
    o << "\\ " << clean(m.name) << "\n";
    o << "Minimize\n obj:";
    // every column appears here so that declaration order survives a round trip
    for (int j = 0; j < m.num_vars(); ++j) o << signed_term(m.obj[j]) << " " << vn[j];
    if (!m.quad.empty()) {
        o << " + [";
        for (const QuadTerm& q : m.quad) {
            o << signed_term(2.0 * q.coef) << " ";
            if (q.i == q.j)
                o << vn[q.i] << " ^ 2";
            else
                o << vn[q.i] << " * " << vn[q.j];
        }
        o << " ] / 2";
    }
    if (m.obj_const != 0.0 || m.num_vars() == 0) o << signed_term(m.obj_const);
    o << "\nSubject To\n";
    for (int i = 0; i < m.num_rows(); ++i) {
        const Constraint& r = m.rows[i];
        o << " " << rn[i] << ":";
        if (r.terms.empty()) o << " 0";
        for (const Term& t : r.terms) o << signed_term(t.coef) << " " << vn[t.var];
        o << (r.sense == Sense::Le ? " <= " : r.sense == Sense::Ge ? " >= " : " = ") << num(r.rhs) << "\n";
    }
    o << "Bounds\n";
    for (int j = 0; j < m.num_vars(); ++j) {
        const Variable& v = m.vars[j];
        bool bin = v.kind == VarKind::Binary;
        if (v.lb == v.ub)
            o << " " << vn[j] << " = " << num(v.lb) << "\n";
        else if (v.lb == -kInf && v.ub == kInf)
            o << " " << vn[j] << " free\n";
        else if (bin ? (v.lb != 0.0 || v.ub != 1.0) : (v.lb != 0.0 || v.ub != kInf))
            o << " " << num(v.lb) << " <= " << vn[j] << " <= " << num(v.ub) << "\n";
    }
    if (m.num_binary() > 0) {
        o << "Binaries\n";
        for (int j = 0; j < m.num_vars(); ++j)
            if (m.vars[j].kind == VarKind::Binary) o << " " << vn[j] << "\n";
    }
    o << "End\n";
    return o.str();
}

namespace {

std::vector<std::string> lp_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '<' || c == '>' || c == '=') {
            std::string op(1, c);
            ++i;
            if (i < s.size() && (s[i] == '=' || s[i] == '<' || s[i] == '>')) op.push_back(s[i++]);
            if (op == "=<") op = "<=";
            if (op == "=>") op = ">=";
            if (op == "<") op = "<=";
            if (op == ">") op = ">=";
            out.push_back(op);
        } else if (std::string_view("+-*^/[]:").find(c) != std::string_view::npos) {
            out.emplace_back(1, c);
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            std::strtod(s.c_str() + i, &end);
            std::size_t len = static_cast<std::size_t>(end - (s.c_str() + i));
            if (len == 0) len = 1;
            out.push_back(s.substr(i, len));
            i += len;
        } else if (name_char(c) || c == '[' || c == ']') {
            std::size_t j = i;
            while (j < s.size() && name_char(s[j])) ++j;
            if (j == i) ++j;
            out.push_back(s.substr(i, j - i));
            i = j;
        } else {
            throw ModelError(std::string("unexpected character '") + c + "' in LP text");
        }
    }
    return out;
}

struct LpExpr {
    std::vector<std::pair<std::string, double>> lin;
    std::vector<std::tuple<std::string, std::string, double>> quad;
    double constant = 0.0;
};

bool is_op(const std::string& t) { return t == "<=" || t == ">=" || t == "=" || t == "=="; }

// Parses a linear (optionally bracketed quadratic) expression starting at tok[k].
LpExpr parse_expr(const std::vector<std::string>& tok, std::size_t& k) {
    LpExpr e;
    while (k < tok.size() && !is_op(tok[k])) {
        double sign = 1.0;
        while (k < tok.size() && (tok[k] == "+" || tok[k] == "-")) {
            if (tok[k] == "-") sign = -sign;
            ++k;
        }
        if (k >= tok.size() || is_op(tok[k])) throw ModelError("dangling sign in LP expression");
        if (tok[k] == "[") {
            ++k;
            std::vector<std::tuple<std::string, std::string, double>> inner;
            while (k < tok.size() && tok[k] != "]") {
                double s2 = 1.0;
                while (tok.at(k) == "+" || tok[k] == "-") {
                    if (tok[k] == "-") s2 = -s2;
                    ++k;
                }
                double c = 1.0;
                if (is_num(tok[k])) c = parse_num(tok[k++]);
                std::string a = tok.at(k++), b;
                if (k < tok.size() && tok[k] == "^") {
                    if (tok.at(k + 1) != "2") throw ModelError("only squares are supported");
                    k += 2;
                    b = a;
                } else if (k < tok.size() && tok[k] == "*") {
                    b = tok.at(k + 1);
                    k += 2;
                } else {
                    throw ModelError("linear term inside quadratic brackets");
                }
                inner.emplace_back(a, b, s2 * c);
            }
            if (k >= tok.size()) throw ModelError("unterminated quadratic block");
            ++k;  // ]
            double div = 1.0;
            if (k < tok.size() && tok[k] == "/") {
                div = parse_num(tok.at(k + 1));
                k += 2;
            }
            for (auto& [a, b, c] : inner) e.quad.emplace_back(a, b, sign * c / div);
            continue;
        }
        if (is_num(tok[k])) {
            double c = parse_num(tok[k++]);
            if (k < tok.size() && !is_op(tok[k]) && tok[k] != "+" && tok[k] != "-" && tok[k] != "[") {
                e.lin.emplace_back(tok[k++], sign * c);
            } else {
                e.constant += sign * c;
            }
        } else {
            e.lin.emplace_back(tok[k++], sign);
        }
    }
    return e;
}

}  // namespace

Model read_lp(const std::string& text) {
    Model m;
    std::unordered_map<std::string, int> colidx;
    auto col_of = [&](const std::string& nm) {
        auto it = colidx.find(nm);
        if (it != colidx.end()) return it->second;
        int j = m.add_var(nm, VarKind::Continuous, 0.0, kInf);
        colidx[nm] = j;
        return j;
    };

    std::istringstream in(text);
    std::string line, section;
    std::string obj_text, st_text;
    std::vector<std::string> bound_lines, bin_names;
    bool first_comment = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t bs = line.find('\\');
        if (bs != std::string::npos) {
            if (first_comment && bs == 0 && line.size() > 2) {
                std::string nm = line.substr(1);
                nm.erase(0, nm.find_first_not_of(' '));
                if (!nm.empty()) m.name = nm;
            }
            line = line.substr(0, bs);
        }
        first_comment = false;
        std::string t = line;
        t.erase(0, t.find_first_not_of(" \t"));
        t.erase(t.find_last_not_of(" \t") + 1);
        if (t.empty()) continue;
        std::string lt = lower(t);
        if (lt == "minimize" || lt == "minimum" || lt == "min") {
            section = "obj";
            continue;
        }
        if (lt == "maximize" || lt == "maximum" || lt == "max") throw ModelError("only minimization is supported");
        if (lt == "subject to" || lt == "such that" || lt == "st" || lt == "s.t.") {
            section = "st";
            continue;
        }
        if (lt == "bounds" || lt == "bound") {
            section = "bounds";
            continue;
        }
        if (lt == "binaries" || lt == "binary" || lt == "bin") {
            section = "bin";
            continue;
        }
        if (lt == "generals" || lt == "general" || lt == "gen") throw ModelError("general integers are not supported");
        if (lt == "end") break;
        if (section == "obj")
            obj_text += " " + t;
        else if (section == "st")
            st_text += " " + t;
        else if (section == "bounds")
            bound_lines.push_back(t);
        else if (section == "bin") {
            std::istringstream ss(t);
            for (std::string nm; ss >> nm;) bin_names.push_back(nm);
        } else
            throw ModelError("LP text outside a section: " + t);
    }

    {
        std::vector<std::string> tok = lp_tokens(obj_text);
        std::size_t k = 0;
        if (tok.size() >= 2 && tok[1] == ":") k = 2;
        LpExpr e = parse_expr(tok, k);
        if (k != tok.size()) throw ModelError("trailing tokens in objective");
        for (auto& [nm, c] : e.lin) m.obj[col_of(nm)] += c;
        for (auto& [a, b, c] : e.quad) m.add_quad(col_of(a), col_of(b), c);
        m.obj_const = e.constant;
    }
    {
        std::vector<std::string> tok = lp_tokens(st_text);
        std::size_t k = 0;
        int unnamed = 0;
        while (k < tok.size()) {
            std::string nm;
            if (k + 1 < tok.size() && tok[k + 1] == ":") {
                nm = tok[k];
                k += 2;
            } else {
                nm = "R" + std::to_string(++unnamed);
            }
            LpExpr e = parse_expr(tok, k);
            if (!e.quad.empty()) throw ModelError("quadratic constraints are not supported");
            if (k >= tok.size()) throw ModelError("constraint " + nm + " without relation");
            std::string op = tok[k++];
            double sign = 1.0;
            while (k < tok.size() && (tok[k] == "+" || tok[k] == "-")) {
                if (tok[k] == "-") sign = -sign;
                ++k;
            }
            double rhs = sign * parse_num(tok.at(k++));
            std::vector<Term> terms;
            for (auto& [v, c] : e.lin) terms.push_back({col_of(v), c});
            Sense s = op == "<=" ? Sense::Le : op == ">=" ? Sense::Ge : Sense::Eq;
            m.add_row(nm, std::move(terms), s, rhs - e.constant);
        }
    }
    for (const std::string& bl : bound_lines) {
        std::vector<std::string> tok = lp_tokens(bl);
        // fold signs into numbers and infinities
        std::vector<std::string> t;
        for (std::size_t k = 0; k < tok.size(); ++k) {
            if ((tok[k] == "-" || tok[k] == "+") && k + 1 < tok.size() &&
                (is_num(tok[k + 1]) || lower(tok[k + 1]) == "inf" || lower(tok[k + 1]) == "infinity")) {
                t.push_back(tok[k] + tok[k + 1]);
                ++k;
            } else {
                t.push_back(tok[k]);
            }
        }
        auto numeric = [](const std::string& s) {
            std::string l = lower(s);
            return is_num(s) || l == "inf" || l == "-inf" || l == "+inf" || l == "infinity" || l == "-infinity" || l == "+infinity";
        };
        if (t.size() == 2 && lower(t[1]) == "free") {
            Variable& v = m.vars[col_of(t[0])];
            v.lb = -kInf;
            v.ub = kInf;
        } else if (t.size() == 3 && !numeric(t[0]) && numeric(t[2])) {
            Variable& v = m.vars[col_of(t[0])];
            double val = parse_num(t[2]);
            if (t[1] == "=")
                v.lb = v.ub = val;
            else if (t[1] == "<=")
                v.ub = val;
            else if (t[1] == ">=")
                v.lb = val;
            else
                throw ModelError("bad bound: " + bl);
        } else if (t.size() == 3 && numeric(t[0]) && !numeric(t[2])) {
            Variable& v = m.vars[col_of(t[2])];
            double val = parse_num(t[0]);
            if (t[1] == "=")
                v.lb = v.ub = val;
            else if (t[1] == "<=")
                v.lb = val;
            else if (t[1] == ">=")
                v.ub = val;
            else
                throw ModelError("bad bound: " + bl);
        } else if (t.size() == 5 && t[1] == "<=" && t[3] == "<=") {
            Variable& v = m.vars[col_of(t[2])];
            v.lb = parse_num(t[0]);
            v.ub = parse_num(t[4]);
        } else {
            throw ModelError("bad bound: " + bl);
        }
    }
    for (const std::string& nm : bin_names) {
        int j = col_of(nm);
        Variable& v = m.vars[j];
        v.kind = VarKind::Binary;
        if (v.lb == 0.0 && v.ub == kInf) v.ub = 1.0;
        if (v.lb < 0.0 || v.ub > 1.0) throw ModelError("binary " + nm + " outside [0,1]");
    }
    m.validate();
    return m;
}

NameMap export_mps(const Model& m, const std::string& path) {
    NameMap nm;
    save(write_mps(m, &nm), path);
    return nm;
}

NameMap export_lp(const Model& m, const std::string& path) {
    NameMap nm;
    save(write_lp(m, &nm), path);
    return nm;
}

Model import_model(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ModelError("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string ext = path.size() >= 3 ? lower(path.substr(path.size() - 3)) : "";
    if (ext == ".lp") return read_lp(ss.str());
    return read_mps(ss.str());
}

}  // namespace lnf
