#ifndef CXRPQ_GRAPHDB_HPP
#define CXRPQ_GRAPHDB_HPP

// Edge-labelled directed multigraphs, graph patterns, queries, and the
// baseline CRPQ evaluator.
//
// Graph file format (UTF-8, line oriented):
//   % comment
//   alphabet <symbols>     optional; otherwise derived from the arcs
//   node <id>              declares a node (needed only for isolated ones)
//   <src> <symbol> <dst>   an arc; symbols are single characters

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cxrpq/xregex.hpp"

namespace cxrpq {

class GraphDb {
  public:
    struct Arc {
        int src;
        char sym;
        int dst;
    };

    GraphDb() = default;
    explicit GraphDb(const Alphabet& alphabet) : alphabet_(alphabet) {}

    int add_node(const std::string& id);
    std::optional<int> node_index(const std::string& id) const;
    const std::string& node_id(int idx) const { return ids_[idx]; }
    int num_nodes() const { return static_cast<int>(ids_.size()); }

    void add_arc(const std::string& src, char sym, const std::string& dst);
    const std::vector<Arc>& arcs() const { return arcs_; }
    // Outgoing arcs of a node carrying a given symbol.
    const std::vector<int>& out(int node, char sym) const;

    const Alphabet& alphabet() const { return alphabet_; }
    void set_alphabet(const Alphabet& a) { alphabet_ = a; }

    std::size_t size_measure() const { return ids_.size() + arcs_.size(); }

  private:
    std::vector<std::string> ids_;
    std::map<std::string, int> index_;
    std::vector<Arc> arcs_;
    Alphabet alphabet_;
    mutable std::map<std::pair<int, char>, std::vector<int>> adj_;
    mutable bool adj_dirty_ = true;
    void rebuild_adj() const;
};

GraphDb load_graphdb(const std::string& text);
std::string save_graphdb(const GraphDb& db);

struct PatternEdge {
    std::string src;
    std::string dst;
    AstPtr label;
};

struct GraphPattern {
    std::vector<std::string> node_vars;
    std::vector<PatternEdge> edges;
};

enum class SemanticsMode { Unrestricted, Simple, Vsf, Bounded, LogBounded, Oracle };

struct Query {
    GraphPattern pattern;
    std::vector<std::string> output;  // empty tuple = Boolean query
    Alphabet alphabet;
    SemanticsMode mode = SemanticsMode::Unrestricted;
    std::size_t bound_k = 0;      // Bounded
    std::size_t oracle_ref = 10;  // Oracle
    std::size_t oracle_path = 6;  // Oracle

    bool boolean() const { return output.empty(); }
    ConjunctiveXregex cx() const;  // labels in edge order; validated
    std::vector<AstPtr> labels() const;
};

using AnswerTuple = std::vector<std::string>;
using AnswerSet = std::set<AnswerTuple>;

inline bool boolean_match(const AnswerSet& a) { return !a.empty(); }

// All labelled walks from `source` of length <= max_len, the empty walk
// included, as (target node id, label word) pairs.
std::vector<std::pair<std::string, std::string>> enumerate_paths(const GraphDb& db,
                                                                 const std::string& source,
                                                                 std::size_t max_len);

// Nodes reachable relations: pairs (u, v) such that some path u -> v is
// labelled by a word of L(label).
std::set<std::pair<int, int>> edge_relation(const GraphDb& db, const AstPtr& classical_label);

// Pairs (u, v) connected by a path labelled with exactly `word`.
std::set<std::pair<int, int>> word_relation(const GraphDb& db, const std::string& word);

// Conjunctive evaluation for classical-regex labels: per-edge reachability
// via the NFA x database product, then a backtracking join over the node
// variables.
AnswerSet crpq_eval(const Query& q, const GraphDb& db);

// Shared join helper: per-edge relations in pattern edge order.
AnswerSet join_relations(const Query& q, const GraphDb& db,
                         const std::vector<std::set<std::pair<int, int>>>& relations);

} // namespace cxrpq

#endif
