#ifndef CXRPQ_CONJUNCTIVE_HPP
#define CXRPQ_CONJUNCTIVE_HPP

// Semantics of conjunctive xregex. A tuple of words is a conjunctive match
// when every component admits a bounded ref-word witness and all witnesses
// share one variable mapping. Witnesses are ref-words of the component's
// inter-xregex: a prefix of dummy definitions x{Sigma*} for the variables
// the component does not define, a separator, and the component itself.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cxrpq/refwords.hpp"
#include "cxrpq/xregex.hpp"

namespace cxrpq {

// Reserved separator; alphabets cannot contain control characters, so this
// can never collide with a user terminal.
inline constexpr char kSeparatorChar = '\x01';

RefSymbol separator_symbol();

// Concatenation of $x{Sigma*} for each variable of all_vars that has no
// definition in the component, in lexicographic variable order.
AstPtr var_prefix(const AstPtr& component, const std::set<VarId>& all_vars, const Alphabet& alphabet);

// var_prefix # component.
AstPtr inter_xregex(const AstPtr& component, const std::set<VarId>& all_vars, const Alphabet& alphabet);

struct ConjunctiveMatch {
    std::vector<std::string> words;
    VariableMapping mapping;

    bool operator<(const ConjunctiveMatch& o) const {
        if (words != o.words) return words < o.words;
        return mapping < o.mapping;
    }
    bool operator==(const ConjunctiveMatch& o) const { return words == o.words && mapping == o.mapping; }
};

// Decides whether `words` is a conjunctive match within the ref-word length
// bound. The bound applies to the component part of each witness (the
// ref-word from Ref(component), after the separator); the dummy-prefix part
// exists for every mapping and would only re-measure the variable count.
// Sound and complete relative to the bound.
std::optional<VariableMapping> is_conjunctive_match_bounded(const ConjunctiveXregex& cx,
                                                            const std::vector<std::string>& words,
                                                            std::size_t max_ref_len);

// All matches whose component ref-words have <= max_ref_len tokens and whose
// words are no longer than max_word_len. Matches are found by bucketing
// component witnesses by their variable mapping and crossing the words of
// each shared-mapping bucket; variables no witness constrains are reported
// with empty images.
std::vector<ConjunctiveMatch> enumerate_conjunctive_matches(const ConjunctiveXregex& cx,
                                                            std::size_t max_ref_len,
                                                            std::size_t max_word_len,
                                                            std::size_t max_count = 2'000'000);

// ---------------------------------------------------------------------------
// Symbolic component analysis. Suffix ref-words are enumerated once per
// component; references of variables the component neither defines nor
// instantiates stay symbolic ("slots") so that candidate witnesses can later
// be matched against concrete words without enumerating prefix images.

struct SymItem {
    bool is_slot = false;
    char ch = 0;  // terminal when !is_slot
    VarId var;    // slot variable

    bool operator==(const SymItem& o) const = default;
    bool operator<(const SymItem& o) const {
        if (is_slot != o.is_slot) return is_slot < o.is_slot;
        if (ch != o.ch) return ch < o.ch;
        return var < o.var;
    }
};

using SymWord = std::vector<SymItem>;

struct SuffixCandidate {
    SymWord word;                        // symbolic deref of the suffix
    std::map<VarId, SymWord> images;     // every variable defined in the component
    std::size_t u_len = 0;               // suffix token count
};

struct ComponentAnalysis {
    std::set<VarId> syntactic_defs;  // variables with a definition in the component
    std::set<VarId> prefix_vars;     // all_vars minus syntactic_defs
    std::vector<SuffixCandidate> candidates;
};

ComponentAnalysis analyze_component(const AstPtr& component, const std::set<VarId>& all_vars,
                                    std::size_t max_suffix_len,
                                    std::size_t max_terminals = static_cast<std::size_t>(-1),
                                    std::size_t max_count = 50'000'000);

// All consistent slot assignments making the symbolic word equal `word`;
// each result is the full constrained partial mapping of the candidate
// (defined variables concretized, slot variables bound).
std::vector<std::map<VarId, std::string>> match_candidate(const SuffixCandidate& cand,
                                                          const std::string& word);

} // namespace cxrpq

#endif
