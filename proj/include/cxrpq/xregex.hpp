#ifndef CXRPQ_XREGEX_HPP
#define CXRPQ_XREGEX_HPP

// Regular expressions with backreferences (xregex) and conjunctive xregex.
//
// Concrete syntax:
//   terminal     any non-whitespace char except ( ) | + * { } $ \ %
//   \c           escaped metacharacter c
//   \e           empty word, \0 empty set
//   (r)          grouping
//   r|s          alternation (lowest precedence, right associative)
//   rs           concatenation (binds tighter than |)
//   r+  r*       postfix repetition; r* is parsed as (r)+|\e
//   $x{r}        definition of variable x
//   $x           reference of variable x; the name ends at the first
//                character outside [A-Za-z0-9_]
//
// The syntax tree has no star node: the parser desugars r* immediately.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cxrpq/errors.hpp"

namespace cxrpq {

using VarId = std::string;

// One symbol of the extended alphabet used for ref-words: a plain terminal,
// an opening/closing definition parenthesis, or a variable reference.
struct RefSymbol {
    enum class Kind { Terminal, Open, Close, Ref };
    Kind kind = Kind::Terminal;
    char ch = 0;  // Terminal only
    VarId var;    // Open/Close/Ref only

    static RefSymbol terminal(char c) { return {Kind::Terminal, c, {}}; }
    static RefSymbol open(VarId v) { return {Kind::Open, 0, std::move(v)}; }
    static RefSymbol close(VarId v) { return {Kind::Close, 0, std::move(v)}; }
    static RefSymbol ref(VarId v) { return {Kind::Ref, 0, std::move(v)}; }

    bool operator==(const RefSymbol& o) const { return kind == o.kind && ch == o.ch && var == o.var; }
    bool operator<(const RefSymbol& o) const {
        if (kind != o.kind) return kind < o.kind;
        if (ch != o.ch) return ch < o.ch;
        return var < o.var;
    }
    std::string str() const;
};

// Finite terminal alphabet. Symbols are single characters; whitespace and the
// xregex metacharacters cannot be alphabet members.
class Alphabet {
  public:
    Alphabet() = default;
    explicit Alphabet(const std::string& chars);

    bool contains(char c) const;
    const std::vector<char>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    std::string str() const { return std::string(symbols_.begin(), symbols_.end()); }

    bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

    static bool valid_symbol(char c);

  private:
    std::vector<char> symbols_;  // sorted, unique
};

struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

struct Ast {
    enum class Kind { Terminal, Epsilon, EmptySet, Concat, Alt, Plus, VarDef, VarRef };

    Kind kind;
    RefSymbol sym;                 // Terminal
    VarId var;                     // VarDef / VarRef
    std::vector<AstPtr> children;  // Concat: >=2, Alt: 2, Plus: 1, VarDef: 1

    static AstPtr terminal(char c) { return symbol(RefSymbol::terminal(c)); }
    static AstPtr symbol(RefSymbol s);
    static AstPtr epsilon();
    static AstPtr empty_set();
    static AstPtr concat(std::vector<AstPtr> parts);  // 0 parts -> epsilon, 1 -> the part
    static AstPtr alt(AstPtr l, AstPtr r);
    static AstPtr plus(AstPtr c);
    static AstPtr star(AstPtr c);  // sugar: (c)+ | epsilon
    static AstPtr def(VarId v, AstPtr body);
    static AstPtr ref(VarId v);
    static AstPtr word(const std::string& w);  // concatenation of terminals
};

bool structurally_equal(const AstPtr& a, const AstPtr& b);

// Recognizes the desugared form of r*: (r)+ | epsilon. Star counts as a
// repetition operator, not as an alternation.
bool is_star_sugar(const AstPtr& a);

// Flattens directly nested concatenations; shape-only, language preserving.
AstPtr canonical(const AstPtr& a);

std::size_t node_count(const AstPtr& a);
bool is_classical(const AstPtr& a);           // no VarDef / VarRef nodes
bool contains_variables(const AstPtr& a);
std::set<VarId> vars_of(const AstPtr& a);

AstPtr parse_xregex(const std::string& text, const Alphabet& alphabet);
std::string render_xregex(const AstPtr& a);

// Classical regex over the extended alphabet, obtained by rewriting every
// definition $x{b} into open(x) b close(x) and every reference into ref(x).
AstPtr to_ref_regex(const AstPtr& a);

bool is_sequential(const AstPtr& a);
// Identifies a variable with two reachable opening parentheses, if any.
std::optional<VarId> sequentiality_offender(const AstPtr& a);

struct PrecedenceGraph {
    std::set<VarId> nodes;
    std::set<std::pair<VarId, VarId>> arcs;  // (x, y) means x precedes y

    bool is_acyclic() const;
    std::optional<std::vector<VarId>> find_cycle() const;  // witness x1 -> ... -> x1
    std::vector<VarId> topological_order() const;          // valid only when acyclic
};

PrecedenceGraph precedence_graph_of(const AstPtr& a);

struct ConjunctiveXregex {
    std::vector<AstPtr> components;
    Alphabet alphabet;

    std::size_t dimension() const { return components.size(); }
    AstPtr concatenation() const;
    std::set<VarId> all_vars() const;
    std::size_t size() const;  // total node count
};

// Checks sequentiality and acyclicity of the concatenation; throws
// not_sequential_error or cyclic_error otherwise.
ConjunctiveXregex validate_conjunctive(std::vector<AstPtr> components, const Alphabet& alphabet);

PrecedenceGraph precedence_graph(const ConjunctiveXregex& cx);
bool is_acyclic(const ConjunctiveXregex& cx);

struct FragmentClassification {
    bool vstar_free = false;
    bool valt_free = false;
    bool variable_simple = false;
    bool simple = false;
    bool normal_form = false;
    std::set<VarId> flat_vars;
    bool all_flat = false;
};

bool is_vstar_free(const AstPtr& a);
bool is_valt_free(const AstPtr& a);
bool is_variable_simple(const AstPtr& a);
bool is_simple(const AstPtr& a);
bool is_normal_form(const AstPtr& a);

// Top-level alternation spine, left to right.
std::vector<AstPtr> top_alternatives(const AstPtr& a);
// Top-level concatenation spine (recursively flattened), left to right.
std::vector<AstPtr> concat_factors(const AstPtr& a);

FragmentClassification classify(const ConjunctiveXregex& cx);

} // namespace cxrpq

#endif
