#ifndef CXRPQ_REDUCTIONS_HPP
#define CXRPQ_REDUCTIONS_HPP

// Instance generators for the two hardness reductions, used as a correctness
// corpus: automata intersection encoded as a chained graph with a one-edge
// query, and hitting set encoded as a guessing chain with a bounded-image
// one-edge query. Both come with combinatorial reference solvers.

#include <optional>
#include <set>
#include <vector>

#include "cxrpq/graphdb.hpp"
#include "cxrpq/nfa.hpp"

namespace cxrpq {

struct ReductionInstance {
    GraphDb db;
    Query query;
};

enum class NfaIntersectionVariant {
    Starred,   // # $z{(a|b)*} (## $z)* ###   (references under a star)
    Unrolled,  // # $z{(a|b)*} (## $z)^{k-1} ###   (vstar-free)
};

// Each automaton needs exactly one final state, no epsilon transitions, and
// symbols among {a, b}. The database matches the query exactly when the
// intersection of the automata languages is nonempty.
ReductionInstance gen_nfa_intersection_instance(const std::vector<Nfa>& automata,
                                                NfaIntersectionVariant variant);

// Universe elements are 1..universe_size; each set must be a nonempty subset.
// The database matches the query exactly when some hitting set of size at
// most `budget` exists, under any image bound >= 1.
ReductionInstance gen_hitting_set_instance(std::size_t universe_size,
                                           const std::vector<std::set<std::size_t>>& sets,
                                           std::size_t budget);

// Smallest hitting set within the budget, by exhaustive search.
std::optional<std::set<std::size_t>> brute_hitting_set(const std::vector<std::set<std::size_t>>& sets,
                                                       std::size_t budget);

} // namespace cxrpq

#endif
