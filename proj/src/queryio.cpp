#include "cxrpq/queryio.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cxrpq {

namespace {

std::string strip_comment(const std::string& line) {
    for (std::size_t i = 0; i < line.size(); ++i)
        if (line[i] == '%' && (i == 0 || line[i - 1] != '\\')) return line.substr(0, i);
    return line;
}

std::string mode_text(const Query& q) {
    switch (q.mode) {
        case SemanticsMode::Unrestricted: return "unrestricted";
        case SemanticsMode::Simple: return "simple";
        case SemanticsMode::Vsf: return "vsf";
        case SemanticsMode::Bounded: return "bounded " + std::to_string(q.bound_k);
        case SemanticsMode::LogBounded: return "log";
        case SemanticsMode::Oracle:
            return "oracle " + std::to_string(q.oracle_ref) + " " + std::to_string(q.oracle_path);
    }
    return "unrestricted";
}

} // namespace

QueryBlock parse_query_block(const std::string& text) {
    QueryBlock block;
    Query& q = block.query;
    std::optional<Alphabet> alphabet;
    struct RawEdge {
        std::string src, dst, regex;
        std::size_t line;
    };
    std::vector<RawEdge> raw_edges;
    std::vector<std::vector<std::size_t>> equalities;
    bool has_equal = false;

    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_comment(line);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "alphabet") {
            std::string syms;
            if (!(ls >> syms)) throw parse_error("alphabet line without symbols", lineno);
            alphabet = Alphabet(syms);
        } else if (head == "output") {
            std::string var;
            while (ls >> var) q.output.push_back(var);
        } else if (head == "mode") {
            std::string m;
            if (!(ls >> m)) throw parse_error("mode line without a mode", lineno);
            if (m == "unrestricted") {
                q.mode = SemanticsMode::Unrestricted;
            } else if (m == "simple") {
                q.mode = SemanticsMode::Simple;
            } else if (m == "vsf") {
                q.mode = SemanticsMode::Vsf;
            } else if (m == "log") {
                q.mode = SemanticsMode::LogBounded;
            } else if (m == "bounded") {
                q.mode = SemanticsMode::Bounded;
                if (!(ls >> q.bound_k)) throw parse_error("mode bounded needs an image bound", lineno);
            } else if (m == "oracle") {
                q.mode = SemanticsMode::Oracle;
                if (!(ls >> q.oracle_ref >> q.oracle_path))
                    throw parse_error("mode oracle needs ref and path length bounds", lineno);
            } else {
                throw parse_error("unknown mode '" + m + "'", lineno);
            }
        } else if (head == "edge") {
            RawEdge e;
            if (!(ls >> e.src >> e.dst)) throw parse_error("edge line needs two node variables", lineno);
            std::getline(ls, e.regex);
            if (e.regex.find_first_not_of(" \t") == std::string::npos)
                throw parse_error("edge line without an xregex", lineno);
            e.line = lineno;
            raw_edges.push_back(std::move(e));
        } else if (head == "equal") {
            has_equal = true;
            std::vector<std::size_t> block_indices;
            std::size_t idx;
            while (ls >> idx) {
                if (idx == 0) throw parse_error("edge indices are 1-based", lineno);
                block_indices.push_back(idx - 1);
            }
            if (block_indices.empty()) throw parse_error("equal line without edge indices", lineno);
            equalities.push_back(std::move(block_indices));
        } else {
            throw parse_error("unknown directive '" + head + "'", lineno);
        }
    }
    if (!alphabet) throw validation_error("query file needs an alphabet line");
    q.alphabet = *alphabet;

    std::set<std::string> vars;
    for (const RawEdge& e : raw_edges) {
        AstPtr label;
        try {
            label = parse_xregex(e.regex, q.alphabet);
        } catch (const parse_error& pe) {
            throw parse_error(std::string(pe.what()) + " in edge on line " + std::to_string(e.line), e.line);
        }
        q.pattern.edges.push_back({e.src, e.dst, label});
        vars.insert(e.src);
        vars.insert(e.dst);
    }
    q.pattern.node_vars.assign(vars.begin(), vars.end());
    for (const std::string& z : q.output)
        if (!vars.count(z)) throw validation_error("output variable '" + z + "' is not a pattern variable");

    if (has_equal) {
        std::set<std::size_t> covered;
        for (const auto& b : equalities)
            for (std::size_t e : b) {
                if (e >= q.pattern.edges.size())
                    throw validation_error("equal line names an unknown edge");
                if (!covered.insert(e).second)
                    throw validation_error("edge listed in two equality blocks");
            }
        for (std::size_t e = 0; e < q.pattern.edges.size(); ++e)
            if (!covered.count(e)) equalities.push_back({e});
        block.equalities = std::move(equalities);
    }
    return block;
}

std::vector<QueryBlock> parse_query_file(const std::string& text) {
    std::vector<std::string> chunks{""};
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string bare = strip_comment(line);
        bare.erase(std::remove_if(bare.begin(), bare.end(), [](char c) { return std::isspace((unsigned char)c); }),
                   bare.end());
        if (bare == "---")
            chunks.push_back("");
        else
            chunks.back() += line + "\n";
    }
    std::vector<QueryBlock> out;
    for (const std::string& c : chunks) out.push_back(parse_query_block(c));
    return out;
}

EcrpqEq QueryBlock::to_ecrpq_eq() const {
    if (!equalities) throw validation_error("query block has no equality constraints");
    EcrpqEq e;
    e.pattern = query.pattern;
    e.output = query.output;
    e.alphabet = query.alphabet;
    e.equality_blocks = *equalities;
    validate_ecrpq_eq(e);
    return e;
}

std::string save_query(const Query& q) {
    std::string out = "alphabet " + q.alphabet.str() + "\n";
    if (!q.output.empty()) {
        out += "output";
        for (const std::string& z : q.output) out += " " + z;
        out += "\n";
    }
    out += "mode " + mode_text(q) + "\n";
    for (const PatternEdge& e : q.pattern.edges)
        out += "edge " + e.src + " " + e.dst + " " + render_xregex(e.label) + "\n";
    return out;
}

std::string save_ecrpq_eq(const EcrpqEq& q) {
    std::string out = "alphabet " + q.alphabet.str() + "\n";
    if (!q.output.empty()) {
        out += "output";
        for (const std::string& z : q.output) out += " " + z;
        out += "\n";
    }
    for (const PatternEdge& e : q.pattern.edges)
        out += "edge " + e.src + " " + e.dst + " " + render_xregex(e.label) + "\n";
    for (const auto& block : q.equality_blocks) {
        if (block.size() < 2) continue;
        out += "equal";
        for (std::size_t e : block) out += " " + std::to_string(e + 1);
        out += "\n";
    }
    return out;
}

std::string save_union(const UnionQuery& u) {
    std::string out;
    for (std::size_t i = 0; i < u.disjuncts.size(); ++i) {
        if (i) out += "---\n";
        if (std::holds_alternative<Query>(u.disjuncts[i]))
            out += save_query(std::get<Query>(u.disjuncts[i]));
        else
            out += save_ecrpq_eq(std::get<EcrpqEq>(u.disjuncts[i]));
    }
    return out;
}

} // namespace cxrpq
