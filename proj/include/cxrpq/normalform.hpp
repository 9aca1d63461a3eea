#ifndef CXRPQ_NORMALFORM_HPP
#define CXRPQ_NORMALFORM_HPP

// Three-step rewriting of a vstar-free conjunctive xregex into normal form
// (every component an alternation of simple xregex), plus the expansion of a
// normal form into the simple tuples it denotes.
//
// Step 1 multiplies out alternations that contain variables, so each
// component becomes an alternation of variable-simple xregex. Step 2 renames
// per-alternative definitions apart and widens references accordingly, so
// every variable keeps at most one definition. Step 3 removes non-basic
// definitions root-first along the precedence DAG.

#include <vector>

#include "cxrpq/xregex.hpp"

namespace cxrpq {

struct NormalizeOptions {
    // Abort with limit_error once an intermediate tuple grows beyond this
    // many syntax-tree nodes; the worst case is doubly exponential.
    std::size_t node_limit = 1'000'000;
};

ConjunctiveXregex step1_multiply_out(const ConjunctiveXregex& cx, const NormalizeOptions& opts = {});

ConjunctiveXregex step2_unique_definitions(const ConjunctiveXregex& cx);

// Replaces the (unique, non-basic) definition of z by a concatenation of
// definitions, one per factor of its body, and widens every reference of z.
// Identity when the definition is already basic.
ConjunctiveXregex main_modification_step(const ConjunctiveXregex& cx, const VarId& z);

ConjunctiveXregex step3_remove_nonbasic(const ConjunctiveXregex& cx, const NormalizeOptions& opts = {});

ConjunctiveXregex normalize(const ConjunctiveXregex& cx, const NormalizeOptions& opts = {});

// One simple tuple per choice of a top-level alternative in every component.
// References of variables whose defining alternative was not chosen resolve
// to the empty word, matching the behaviour of the unexpanded alternation.
std::vector<ConjunctiveXregex> expand_to_simple_queries(const ConjunctiveXregex& cx,
                                                        const NormalizeOptions& opts = {});

// Rewrites every definition x{y} whose body is a single reference, together
// with all references of x, into references of y. Match-preserving on simple
// tuples, where every definition is instantiated.
ConjunctiveXregex eliminate_single_reference_definitions(const ConjunctiveXregex& cx);

} // namespace cxrpq

#endif
