#include "lnf/milp.hpp"

#include <algorithm>
#include <cmath>

namespace lnf {

int Model::add_var(std::string nm, VarKind kind, double lb, double ub) {
    if (lb > ub) throw ModelError("variable " + nm + ": lower bound above upper bound");
    if (kind == VarKind::Binary && (lb < 0.0 || ub > 1.0))
        throw ModelError("binary variable " + nm + " with bounds outside [0,1]");
    vars.push_back({std::move(nm), kind, lb, ub});
    obj.push_back(0.0);
    return num_vars() - 1;
}

int Model::add_row(std::string nm, std::vector<Term> terms, Sense sense, double rhs) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> merged;
    for (const Term& t : terms) {
        if (t.var < 0 || t.var >= num_vars()) throw ModelError("row " + nm + " references unknown variable");
        if (!merged.empty() && merged.back().var == t.var)
            merged.back().coef += t.coef;
        else
            merged.push_back(t);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Term& t) { return t.coef == 0.0; }),
                 merged.end());
    rows.push_back({std::move(nm), std::move(merged), sense, rhs});
    return num_rows() - 1;
}

void Model::set_obj(int var, double c) { obj.at(var) = c; }
void Model::add_obj(int var, double c) { obj.at(var) += c; }

void Model::add_quad(int i, int j, double coef) {
    if (i < 0 || j < 0 || i >= num_vars() || j >= num_vars()) throw ModelError("quadratic term references unknown variable");
    if (i > j) std::swap(i, j);
    for (QuadTerm& q : quad) {
        if (q.i == i && q.j == j) {
            q.coef += coef;
            return;
        }
    }
    quad.push_back({i, j, coef});
}

int Model::num_binary() const {
    return static_cast<int>(std::count_if(vars.begin(), vars.end(), [](const Variable& v) { return v.kind == VarKind::Binary; }));
}

int Model::find_var(const std::string& nm) const {
    for (int j = 0; j < num_vars(); ++j)
        if (vars[j].name == nm) return j;
    return -1;
}

void Model::remove_rows(const std::vector<int>& idx) {
    std::vector<char> drop(rows.size(), 0);
    for (int i : idx) drop.at(i) = 1;
    std::vector<Constraint> kept;
    kept.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!drop[i]) kept.push_back(std::move(rows[i]));
    rows = std::move(kept);
}

std::vector<int> Model::remove_vars(const std::vector<int>& idx) {
    std::vector<char> drop(vars.size(), 0);
    for (int j : idx) drop.at(j) = 1;
    for (const Constraint& r : rows)
        for (const Term& t : r.terms)
            if (drop[t.var]) throw ModelError("cannot remove variable " + vars[t.var].name + " still used by row " + r.name);
    for (const QuadTerm& q : quad)
        if (drop[q.i] || drop[q.j]) throw ModelError("cannot remove variable used by quadratic objective");
    std::vector<int> remap(vars.size(), -1);
    std::vector<Variable> nv;
    std::vector<double> no;
    for (std::size_t j = 0; j < vars.size(); ++j) {
        if (drop[j]) continue;
        remap[j] = static_cast<int>(nv.size());
        nv.push_back(std::move(vars[j]));
        no.push_back(obj[j]);
    }
    vars = std::move(nv);
    obj = std::move(no);
    for (Constraint& r : rows)
        for (Term& t : r.terms) t.var = remap[t.var];
    for (QuadTerm& q : quad) {
        q.i = remap[q.i];
        q.j = remap[q.j];
    }
    return remap;
}

double Model::eval_objective(const std::vector<double>& x) const {
    double v = obj_const;
    for (int j = 0; j < num_vars(); ++j) v += obj[j] * x[j];
    for (const QuadTerm& q : quad) v += q.coef * x[q.i] * x[q.j];
    return v;
}

double Model::max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (int j = 0; j < num_vars(); ++j) {
        worst = std::max(worst, vars[j].lb - x[j]);
        worst = std::max(worst, x[j] - vars[j].ub);
    }
    for (const Constraint& r : rows) {
        double a = 0.0;
        for (const Term& t : r.terms) a += t.coef * x[t.var];
        if (r.sense != Sense::Ge) worst = std::max(worst, a - r.rhs);
        if (r.sense != Sense::Le) worst = std::max(worst, r.rhs - a);
    }
    return worst;
}

void Model::validate() const {
    if (obj.size() != vars.size()) throw ModelError("objective size mismatch");
    for (const Variable& v : vars) {
        if (v.lb > v.ub) throw ModelError("variable " + v.name + " has empty bounds");
        if (v.kind == VarKind::Binary && (v.lb < 0.0 || v.ub > 1.0)) throw ModelError("binary " + v.name + " outside [0,1]");
    }
    for (const Constraint& r : rows)
        for (const Term& t : r.terms)
            if (t.var < 0 || t.var >= num_vars()) throw ModelError("row " + r.name + " references unknown variable");
}

double relative_gap(double ub, double lb) {
    double diff = std::fabs(ub - lb);
    if (diff <= 1e-12) return 0.0;
    if (std::fabs(ub) <= 1e-12) return kInf;
    return diff / std::fabs(ub);
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::GapLimit: return "gap-limit";
        case SolveStatus::NodeLimit: return "node-limit";
        case SolveStatus::TimeLimit: return "time-limit";
    }
    return "?";
}

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterLimit: return "iteration-limit";
    }
    return "?";
}

}  // namespace lnf
