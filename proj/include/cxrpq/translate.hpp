#ifndef CXRPQ_TRANSLATE_HPP
#define CXRPQ_TRANSLATE_HPP

// Constructive translations between query classes:
//   ECRPQ with equality relations -> vstar-free, all-flat CXRPQ
//   vstar-free CXRPQ              -> union of ECRPQ with equalities
//   image-bounded CXRPQ           -> union of CRPQs
// plus evaluation of the equality fragment and of query unions.

#include <variant>
#include <vector>

#include "cxrpq/eval.hpp"
#include "cxrpq/graphdb.hpp"

namespace cxrpq {

struct EcrpqEq {
    GraphPattern pattern;  // classical regular expression labels
    std::vector<std::string> output;
    Alphabet alphabet;
    // Partition of the edge index set; singleton blocks carry no constraint.
    std::vector<std::vector<std::size_t>> equality_blocks;

    bool boolean() const { return output.empty(); }
};

void validate_ecrpq_eq(const EcrpqEq& q);

struct UnionQuery {
    std::vector<std::variant<Query, EcrpqEq>> disjuncts;
};

// Every equality block keeps its first edge, relabelled with a definition of
// a fresh variable over the intersection of the block languages; the other
// block edges become references. Unary blocks are left untouched.
Query ecrpq_eq_to_cxrpq(const EcrpqEq& q);

UnionQuery vsf_to_union_ecrpq_eq(const Query& q, const EvalOptions& opts = {});

// One CRPQ disjunct per variable mapping with images of length <= k;
// mappings producing an empty-set component are dropped.
UnionQuery bounded_to_union_crpq(const Query& q, std::size_t k, const EvalOptions& opts = {});

AnswerSet eval_ecrpq_eq(const EcrpqEq& q, const GraphDb& db, const EvalOptions& opts = {});

AnswerSet eval_union(const UnionQuery& u, const GraphDb& db, const EvalOptions& opts = {});

} // namespace cxrpq

#endif
