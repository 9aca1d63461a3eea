#ifndef CXRPQ_REFWORDS_HPP
#define CXRPQ_REFWORDS_HPP

// Ref-words: words over terminals, variable references, and paired
// definition parentheses. A ref-word resolves to a terminal word and a
// variable mapping through the deref substitution process.
//
// Text form used by tests and tools: whitespace-separated tokens, where
// `<x` opens and `>x` closes the definition of x, `$x` is a reference,
// and any other token is a run of terminal symbols.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cxrpq/xregex.hpp"

namespace cxrpq {

struct VariableMapping {
    std::map<VarId, std::string> images;  // absent means the empty word

    std::string get(const VarId& x) const {
        auto it = images.find(x);
        return it == images.end() ? std::string() : it->second;
    }
    void set(const VarId& x, std::string w) {
        if (w.empty())
            images.erase(x);
        else
            images[x] = std::move(w);
    }
    VariableMapping normalized() const {
        VariableMapping m;
        for (const auto& [x, w] : images)
            if (!w.empty()) m.images.emplace(x, w);
        return m;
    }
    // Equality as total maps (absent == empty image).
    bool operator==(const VariableMapping& o) const { return normalized().images == o.normalized().images; }
    bool operator<(const VariableMapping& o) const { return normalized().images < o.normalized().images; }
    std::string str() const;
};

struct RefWord {
    std::vector<RefSymbol> symbols;

    std::size_t size() const { return symbols.size(); }
    bool operator==(const RefWord& o) const { return symbols == o.symbols; }
    bool operator<(const RefWord& o) const {
        if (symbols.size() != o.symbols.size()) return symbols.size() < o.symbols.size();
        return symbols < o.symbols;
    }
    std::string str() const;
};

struct DerefResult {
    std::string word;
    VariableMapping mapping;
};

// Validates the three ref-word conditions: each parenthesis occurs at most
// once and is well nested, definitions do not overlap, and the induced
// precedence relation is acyclic.
RefWord validate_refword(std::vector<RefSymbol> symbols, const Alphabet& alphabet);

bool is_valid_refword(const std::vector<RefSymbol>& symbols);

RefWord parse_refword_text(const std::string& text);

DerefResult deref(const RefWord& w);

// All ref-words of the (sequential) xregex up to the token-length bound,
// ordered by length then lexicographically.
std::vector<RefWord> enumerate_refwords(const AstPtr& x, std::size_t max_ref_len,
                                        std::size_t max_count = 50'000'000,
                                        std::size_t max_terminals = static_cast<std::size_t>(-1));

// Membership in Ref(x) without enumeration.
bool refword_member(const AstPtr& x, const RefWord& w);

// { deref(w) : w in Ref(x), |w| <= max_ref_len, |deref(w)| <= max_word_len }.
// A sound under-approximation of L(x); exact only once both bounds are
// large enough for the words of interest.
std::set<std::string> enumerate_lang_bounded(const AstPtr& x, std::size_t max_ref_len,
                                             std::size_t max_word_len);

// Bounded ref-words whose deref mapping equals v on the declared variables.
std::vector<RefWord> refwords_with_mapping(const AstPtr& x, const VariableMapping& v,
                                           std::size_t max_ref_len);

} // namespace cxrpq

#endif
