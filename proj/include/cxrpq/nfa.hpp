#ifndef CXRPQ_NFA_HPP
#define CXRPQ_NFA_HPP

// Nondeterministic finite automata over the extended symbol space used by
// this library (plain terminals plus ref-word markers). Epsilon transitions
// are allowed; symbol ids index the per-automaton symbol table.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "cxrpq/xregex.hpp"

namespace cxrpq {

class Nfa {
  public:
    static constexpr int kEpsilon = -1;

    struct Transition {
        int sym;  // index into symbols(), or kEpsilon
        int dst;
    };

    int add_state();
    int num_states() const { return static_cast<int>(out_.size()); }
    void add_transition(int src, int sym, int dst);
    void add_epsilon(int src, int dst) { add_transition(src, kEpsilon, dst); }

    int intern_symbol(const RefSymbol& s);
    const std::vector<RefSymbol>& symbols() const { return symtab_; }
    const std::vector<Transition>& out(int state) const { return out_[state]; }

    int start = 0;
    std::vector<bool> final_states;  // sized with states

    void set_final(int s, bool v = true);
    bool is_final(int s) const { return final_states[s]; }
    std::vector<int> finals() const;

    std::vector<int> epsilon_closure(const std::vector<int>& states) const;
    // Epsilon-closed step on a symbol id.
    std::vector<int> step(const std::vector<int>& states, int sym) const;

    bool accepts(const std::vector<RefSymbol>& word) const;
    bool accepts_text(const std::string& word) const;  // terminals only

    // Minimal number of symbol transitions from each state to a final state;
    // -1 when no final state is reachable.
    std::vector<int> distance_to_final() const;

    bool language_empty() const;

  private:
    std::vector<std::vector<Transition>> out_;
    std::vector<RefSymbol> symtab_;
    std::map<RefSymbol, int> symids_;
};

// Thompson-style construction; `a` must not contain variable nodes
// (ref-word markers appearing as terminal symbols are fine).
Nfa regex_to_nfa(const AstPtr& a, const Alphabet& alphabet);

// NFA whose language is exactly L(to_ref_regex(a)) over the extended alphabet.
Nfa ref_regex_nfa(const AstPtr& a);

// NFA accepting every word over the given alphabet.
Nfa sigma_star_nfa(const Alphabet& alphabet);

// Shortest word in the intersection of all argument languages, if any.
std::optional<std::vector<RefSymbol>> nfa_intersection_nonempty(const std::vector<const Nfa*>& automata);

// Product automaton accepting the intersection of all argument languages.
Nfa nfa_product(const std::vector<const Nfa*>& automata);

// State-elimination translation back to a classical regex.
AstPtr nfa_to_regex(const Nfa& n);

// Enumerates every accepted word of length <= max_len carrying at most
// max_terminals plain-terminal symbols, in order of length and then
// lexicographically by the automaton's symbol order. Throws limit_error if
// more than max_count words would be produced.
std::vector<std::vector<RefSymbol>> enumerate_nfa_words(const Nfa& n, std::size_t max_len,
                                                        std::size_t max_count = 50'000'000,
                                                        std::size_t max_terminals = static_cast<std::size_t>(-1));

} // namespace cxrpq

#endif
