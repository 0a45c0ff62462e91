#pragma once

#include <string>
#include <vector>

#include "lnf/formula.hpp"
#include "lnf/lnf.hpp"
#include "lnf/logic_tree.hpp"
#include "lnf/milp.hpp"

namespace lnf {

struct ElimOptions {
    // skip the series-parallel projection and run plain Fourier-Motzkin
    bool force_fm = false;
    std::size_t max_forms = 20000;  // selection blow-up guard before falling back
};

struct ElimStats {
    int vars_removed = 0;
    int rows_before = 0;
    int rows_after = 0;
    bool series_parallel = false;
};

struct EliminationResult {
    std::vector<int> y;  // per edge, indices in the rewritten model
    std::vector<int> z;  // per flow component, indices in the rewritten model
    std::vector<Constraint> generated;
    ElimStats stats;
};

// Removes every flow variable of `enc` and the rows that mention them, and adds
// the projected rows over (y, z).
EliminationResult eliminate_flows(const Lnf& g, Model& m, const FlowEncoding& enc, const ElimOptions& opt = {});

// Builds the flow encoding and eliminates it in one step.
EliminationResult encode_lnf(const Lnf& g, Model& m, AtomVars& z, const FlowOptions& fopt = {}, const ElimOptions& eopt = {});

struct CdOptions {
    bool completeness = false;
};

struct CdEncoding {
    std::vector<std::vector<int>> y;  // section -> alternative -> variable
};

CdEncoding encode_cd_lnf(const CdForm& c, Model& m, AtomVars& z, const CdOptions& opt = {});

// Drops rows with no terms that hold trivially, exact duplicates, and rows
// dominated by another row with the same coefficients. Throws nothing; a
// trivially violated row is kept as is.
std::vector<Constraint> reduce_rows(std::vector<Constraint> rows);

}  // namespace lnf
