#ifndef CXRPQ_QUERYIO_HPP
#define CXRPQ_QUERYIO_HPP

// Query file format (UTF-8, line oriented; % starts a comment unless escaped):
//
//   alphabet <symbols>
//   output <var> <var> ...            absent = Boolean query
//   mode <unrestricted|simple|vsf|log>
//   mode bounded <K>
//   mode oracle <REF_LEN> <PATH_LEN>
//   edge <srcVar> <dstVar> <xregex text>
//   equal <edgeIndex> <edgeIndex> ...  1-based; equality-fragment files only
//
// Union files hold several such blocks separated by a line containing `---`.

#include <optional>
#include <string>
#include <vector>

#include "cxrpq/graphdb.hpp"
#include "cxrpq/translate.hpp"

namespace cxrpq {

struct QueryBlock {
    Query query;
    // Present when the file used `equal` lines; singleton blocks for the
    // remaining edges are implied.
    std::optional<std::vector<std::vector<std::size_t>>> equalities;

    bool is_equality_fragment() const { return equalities.has_value(); }
    EcrpqEq to_ecrpq_eq() const;
};

QueryBlock parse_query_block(const std::string& text);
std::vector<QueryBlock> parse_query_file(const std::string& text);

std::string save_query(const Query& q);
std::string save_ecrpq_eq(const EcrpqEq& q);
std::string save_union(const UnionQuery& u);

} // namespace cxrpq

#endif
