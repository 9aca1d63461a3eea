#ifndef CXRPQ_EVAL_HPP
#define CXRPQ_EVAL_HPP

// Fragment evaluators.
//
//   eval_simple       product-based evaluation of simple queries
//   eval_vsf          normalize + expand + union of simple evaluations
//   eval_bounded      image-size-bounded semantics as a union of CRPQs
//   eval_log_bounded  eval_bounded with k = floor(log2(|V| + |E|))
//   eval_oracle       exhaustive morphism/path/match search under explicit
//                     ref-word and path length bounds (the reference
//                     implementation everything else is tested against)

#include <optional>

#include "cxrpq/graphdb.hpp"
#include "cxrpq/normalform.hpp"
#include "cxrpq/refwords.hpp"

namespace cxrpq {

struct EvalOptions {
    std::size_t product_limit = 10'000'000;          // synchronized product vertices
    std::size_t mapping_space_limit = 100'000'000;   // bounded-image mapping count
    NormalizeOptions normalize;
};

AnswerSet eval_simple(const Query& q, const GraphDb& db, const EvalOptions& opts = {});

AnswerSet eval_vsf(const Query& q, const GraphDb& db, const EvalOptions& opts = {});

// Classical tuple denoting exactly the conjunctive matches whose variable
// mapping equals v; components collapse to the empty set when v is not
// realizable.
std::vector<AstPtr> fix_mapping(const ConjunctiveXregex& cx, const VariableMapping& v);

AnswerSet eval_bounded(const Query& q, std::size_t k, const GraphDb& db, const EvalOptions& opts = {});

AnswerSet eval_log_bounded(const Query& q, const GraphDb& db, const EvalOptions& opts = {});

// image_bound additionally restricts every variable image, giving the
// bounded-image semantics under the same truncation.
AnswerSet eval_oracle(const Query& q, const GraphDb& db, std::size_t ref_len_bound,
                      std::size_t path_len_bound,
                      std::size_t image_bound = static_cast<std::size_t>(-1));

// Evaluates according to the query's semantics mode (flags already folded in).
AnswerSet evaluate(const Query& q, const GraphDb& db, const EvalOptions& opts = {});

bool check_answer(const Query& q, const GraphDb& db, const AnswerTuple& tuple,
                  const EvalOptions& opts = {});

} // namespace cxrpq

#endif
