#pragma once
// Random formula generators shared by the unit tests.

#include <random>
#include <string>
#include <vector>

#include "lnf/formula.hpp"

namespace gen {

inline lnf::FormulaPtr formula(std::mt19937_64& rng, int depth, const std::vector<std::string>& names, bool temporal = true) {
    std::uniform_int_distribution<int> pick(0, temporal ? 6 : 3);
    std::uniform_int_distribution<int> nm(0, static_cast<int>(names.size()) - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> win(0, 2);
    int c = depth <= 0 ? 0 : pick(rng);
    if (c <= 1) return lnf::atom(names[nm(rng)], coin(rng) == 1);
    if (c == 2 || c == 3) {
        int n = 2 + coin(rng);
        std::vector<lnf::FormulaPtr> kids;
        for (int i = 0; i < n; ++i) kids.push_back(formula(rng, depth - 1, names, temporal));
        return c == 2 ? lnf::conj(kids) : lnf::disj(kids);
    }
    int a = win(rng), b = a + win(rng) % 2;
    if (c == 4) return lnf::always(a, b, formula(rng, depth - 1, names, temporal));
    if (c == 5) return lnf::eventually(a, b, formula(rng, depth - 1, names, temporal));
    return lnf::until(a, b, formula(rng, depth - 1, names, temporal), formula(rng, depth - 1, names, temporal));
}

// Propositional formula over time-indexed atoms drawn from `pool`.
inline lnf::FormulaPtr propositional(std::mt19937_64& rng, int depth, const std::vector<lnf::TimedAtom>& pool) {
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_int_distribution<int> at(0, static_cast<int>(pool.size()) - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    int c = depth <= 0 ? 0 : pick(rng);
    if (c <= 1) {
        const auto& a = pool[at(rng)];
        return lnf::timed_atom(a.pred, a.k, coin(rng) == 1);
    }
    int n = 2 + coin(rng);
    std::vector<lnf::FormulaPtr> kids;
    for (int i = 0; i < n; ++i) kids.push_back(propositional(rng, depth - 1, pool));
    return c == 2 ? lnf::conj(kids) : lnf::disj(kids);
}

// All 2^n assignments over the given atoms, as traces of length T+1.
template <class F>
void for_each_assignment(const std::vector<lnf::TimedAtom>& atoms, int T, F&& fn) {
    const std::size_t n = atoms.size();
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
        lnf::BoolTrace tr;
        for (const auto& a : atoms) tr[a.pred].assign(T + 1, false);
        for (std::size_t i = 0; i < n; ++i) tr[atoms[i].pred][atoms[i].k] = (mask >> i) & 1UL;
        fn(tr);
    }
}

}  // namespace gen
