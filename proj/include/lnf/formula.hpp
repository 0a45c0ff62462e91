#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lnf {

struct Predicate {
    std::string name;
    std::vector<double> a;
    double b = 0.0;
};

class PredicateTable {
public:
    void add(Predicate p);
    const Predicate* find(const std::string& name) const;
    const Predicate& at(const std::string& name) const;
    const std::vector<Predicate>& all() const { return preds_; }
    std::size_t size() const { return preds_.size(); }
    int dim() const { return preds_.empty() ? 0 : static_cast<int>(preds_.front().a.size()); }

    // {"predicates":[{"name":"p","a":[...],"b":0.0}]}
    static PredicateTable from_json(const std::string& text);
    static PredicateTable load(const std::string& path);
    std::string to_json() const;

private:
    std::vector<Predicate> preds_;
    std::map<std::string, std::size_t> index_;
};

class FormulaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public FormulaError {
public:
    ParseError(const std::string& msg, int line, int col);
    int line, col;
};

enum class Op { Atom, And, Or, Always, Eventually, Until };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Negation only appears on atoms. Atoms with time >= 0 are time-indexed
// (propositional) leaves produced by time_expand.
struct Formula {
    Op op = Op::Atom;
    std::string pred;
    bool neg = false;
    int time = -1;
    int k1 = 0, k2 = 0;
    std::vector<FormulaPtr> kids;  // Until: {left, right}
};

FormulaPtr atom(std::string pred, bool neg = false);
FormulaPtr timed_atom(std::string pred, int k, bool neg = false);
FormulaPtr conj(std::vector<FormulaPtr> kids);
FormulaPtr disj(std::vector<FormulaPtr> kids);
FormulaPtr always(int k1, int k2, FormulaPtr f);
FormulaPtr eventually(int k1, int k2, FormulaPtr f);
FormulaPtr until(int k1, int k2, FormulaPtr left, FormulaPtr right);
// Negation pushed to the atoms; Until cannot be negated in this fragment.
FormulaPtr negate(const FormulaPtr& f);

bool same(const Formula& a, const Formula& b);
std::string to_string(const Formula& f);
std::size_t node_count(const Formula& f);

// Unknown names are rejected when `preds` is given.
FormulaPtr parse_spec(const std::string& text, const PredicateTable* preds = nullptr);

// Largest time offset reached from start 0.
int horizon(const Formula& f);
FormulaPtr time_expand(const FormulaPtr& f, int T);

struct TimedAtom {
    std::string pred;
    int k = 0;
    bool neg = false;
    auto operator<=>(const TimedAtom&) const = default;
};

std::string to_string(const TimedAtom& a);
// Distinct (pred, k) pairs of a propositional formula, sign ignored, sorted.
std::vector<TimedAtom> atoms_of(const Formula& p);

// Conjunction of sections; each section is a disjunction of alternatives;
// each alternative a conjunction of atoms. An empty section is unsatisfiable.
struct CdForm {
    using Alternative = std::vector<TimedAtom>;  // sorted, unique
    std::vector<std::vector<Alternative>> sections;
};

class CdSizeError : public FormulaError {
public:
    using FormulaError::FormulaError;
};

CdForm to_cd_form(const Formula& p, std::size_t limit = 100000);

// pred -> value per time step
using BoolTrace = std::map<std::string, std::vector<bool>>;
using Signal = std::vector<std::vector<double>>;  // per time step state

bool eval_satisfaction(const Formula& f, const BoolTrace& trace, int start = 0);
bool eval_satisfaction(const CdForm& c, const BoolTrace& trace);
double eval_robustness(const Formula& f, const Signal& x, const PredicateTable& preds, int start = 0);
// Truth values a'x_k + b >= 0 per predicate.
BoolTrace truth_trace(const Signal& x, const PredicateTable& preds);

}  // namespace lnf
