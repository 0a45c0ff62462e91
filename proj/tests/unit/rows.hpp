#pragma once
// Canonical text form of linear rows for fixture comparisons.

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lnf/milp.hpp"

namespace rows {

// name -> coef, sense "<=" or "=", rhs
struct Canon {
    std::map<std::string, double> coef;
    std::string sense;
    double rhs;
};

inline std::string render(Canon c) {
    if (c.sense == ">=") {
        for (auto& [n, v] : c.coef) v = -v;
        c.rhs = -c.rhs;
        c.sense = "<=";
    }
    for (auto it = c.coef.begin(); it != c.coef.end();)
        it = std::fabs(it->second) < 1e-12 ? c.coef.erase(it) : std::next(it);
    if (c.sense == "=" && !c.coef.empty() && c.coef.begin()->second < 0) {
        for (auto& [n, v] : c.coef) v = -v;
        c.rhs = -c.rhs;
    }
    std::ostringstream o;
    for (auto& [n, v] : c.coef) o << (v >= 0 ? "+" : "") << v << "*" << n << " ";
    o << c.sense << " " << c.rhs + 0.0;
    return o.str();
}

// Parses "y1 + y2 <= z[2]", "y3 <= 1 - y2", "2 x - y = 1".
inline std::string parse(const std::string& text) {
    std::string op;
    std::size_t p = std::string::npos;
    for (const char* cand : {"<=", ">=", "="}) {
        p = text.find(cand);
        if (p != std::string::npos) {
            op = cand;
            break;
        }
    }
    Canon c{{}, op, 0.0};
    auto side = [&](const std::string& s, double sgn) {
        std::istringstream in(s);
        std::string tok;
        double sign = 1.0, num = 1.0;
        bool have_num = false;
        auto flush = [&] {
            if (have_num) c.rhs -= sgn * sign * num;
            have_num = false;
            sign = 1.0;
        };
        while (in >> tok) {
            if (tok == "+" || tok == "-") {
                flush();
                if (tok == "-") sign = -1.0;
                continue;
            }
            char* end = nullptr;
            double v = std::strtod(tok.c_str(), &end);
            if (end != tok.c_str() && *end == '\0') {
                num = v;
                have_num = true;
                continue;
            }
            c.coef[tok] += sgn * sign * (have_num ? num : 1.0);
            have_num = false;
            sign = 1.0;
        }
        flush();
    };
    side(text.substr(0, p), 1.0);
    side(text.substr(p + op.size()), -1.0);
    return render(c);
}

inline std::string of(const lnf::Constraint& r, const std::map<int, std::string>& names) {
    Canon c{{}, r.sense == lnf::Sense::Le ? "<=" : r.sense == lnf::Sense::Ge ? ">=" : "=", r.rhs};
    for (const auto& t : r.terms) c.coef[names.at(t.var)] += t.coef;
    return render(c);
}

inline std::set<std::string> of(const lnf::Model& m, const std::map<int, std::string>& names) {
    std::set<std::string> s;
    for (const auto& r : m.rows) s.insert(of(r, names));
    return s;
}

inline std::set<std::string> parse_all(const std::vector<std::string>& texts) {
    std::set<std::string> s;
    for (const auto& t : texts) s.insert(parse(t));
    return s;
}

}  // namespace rows
