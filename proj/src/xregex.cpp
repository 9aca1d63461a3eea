#include "cxrpq/xregex.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "cxrpq/nfa.hpp"

namespace cxrpq {

namespace {
const std::string kMetachars = "()|+*{}$\\%";

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
} // namespace

std::string RefSymbol::str() const {
    switch (kind) {
        case Kind::Terminal: return std::string(1, ch);
        case Kind::Open: return "<" + var;
        case Kind::Close: return ">" + var;
        case Kind::Ref: return "$" + var;
    }
    return {};
}

bool Alphabet::valid_symbol(char c) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    if (kMetachars.find(c) != std::string::npos) return false;
    if (static_cast<unsigned char>(c) < 0x20) return false;  // control chars reserved
    return true;
}

Alphabet::Alphabet(const std::string& chars) {
    for (char c : chars) {
        if (!valid_symbol(c)) throw validation_error(std::string("invalid alphabet symbol '") + c + "'");
        symbols_.push_back(c);
    }
    std::sort(symbols_.begin(), symbols_.end());
    symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
    if (symbols_.empty()) throw validation_error("alphabet must be nonempty");
}

bool Alphabet::contains(char c) const {
    return std::binary_search(symbols_.begin(), symbols_.end(), c);
}

AstPtr Ast::symbol(RefSymbol s) {
    auto n = std::make_shared<Ast>();
    n->kind = Kind::Terminal;
    n->sym = std::move(s);
    return n;
}

AstPtr Ast::epsilon() {
    auto n = std::make_shared<Ast>();
    n->kind = Kind::Epsilon;
    return n;
}

AstPtr Ast::empty_set() {
    auto n = std::make_shared<Ast>();
    n->kind = Kind::EmptySet;
    return n;
}

AstPtr Ast::concat(std::vector<AstPtr> parts) {
    if (parts.empty()) return epsilon();
    if (parts.size() == 1) return parts[0];
    auto n = std::make_shared<Ast>();
    n->kind = Kind::Concat;
    n->children = std::move(parts);
    return n;
}

AstPtr Ast::alt(AstPtr l, AstPtr r) {
    auto n = std::make_shared<Ast>();
    n->kind = Kind::Alt;
    n->children = {std::move(l), std::move(r)};
    return n;
}

AstPtr Ast::plus(AstPtr c) {
    auto n = std::make_shared<Ast>();
    n->kind = Kind::Plus;
    n->children = {std::move(c)};
    return n;
}

AstPtr Ast::star(AstPtr c) { return alt(plus(std::move(c)), epsilon()); }

AstPtr Ast::def(VarId v, AstPtr body) {
    auto vs = vars_of(body);
    if (vs.count(v))
        throw validation_error("variable '" + v + "' occurs inside its own definition");
    auto n = std::make_shared<Ast>();
    n->kind = Kind::VarDef;
    n->var = std::move(v);
    n->children = {std::move(body)};
    return n;
}

AstPtr Ast::ref(VarId v) {
    auto n = std::make_shared<Ast>();
    n->kind = Kind::VarRef;
    n->var = std::move(v);
    return n;
}

AstPtr Ast::word(const std::string& w) {
    if (w.empty()) return epsilon();
    std::vector<AstPtr> parts;
    parts.reserve(w.size());
    for (char c : w) parts.push_back(terminal(c));
    return concat(std::move(parts));
}

bool is_star_sugar(const AstPtr& a) {
    return a->kind == Ast::Kind::Alt && a->children[0]->kind == Ast::Kind::Plus &&
           a->children[1]->kind == Ast::Kind::Epsilon;
}

bool structurally_equal(const AstPtr& a, const AstPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    if (a->kind == Ast::Kind::Terminal && !(a->sym == b->sym)) return false;
    if ((a->kind == Ast::Kind::VarDef || a->kind == Ast::Kind::VarRef) && a->var != b->var) return false;
    if (a->children.size() != b->children.size()) return false;
    for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!structurally_equal(a->children[i], b->children[i])) return false;
    return true;
}

AstPtr canonical(const AstPtr& a) {
    if (!a) return a;
    if (a->children.empty()) return a;
    std::vector<AstPtr> kids;
    kids.reserve(a->children.size());
    for (const auto& c : a->children) kids.push_back(canonical(c));
    if (a->kind == Ast::Kind::Concat) {
        std::vector<AstPtr> flat;
        for (auto& c : kids) {
            if (c->kind == Ast::Kind::Concat)
                flat.insert(flat.end(), c->children.begin(), c->children.end());
            else
                flat.push_back(c);
        }
        return Ast::concat(std::move(flat));
    }
    auto n = std::make_shared<Ast>(*a);
    n->children = std::move(kids);
    return n;
}

std::size_t node_count(const AstPtr& a) {
    std::size_t n = 1;
    for (const auto& c : a->children) n += node_count(c);
    return n;
}

bool is_classical(const AstPtr& a) {
    if (a->kind == Ast::Kind::VarDef || a->kind == Ast::Kind::VarRef) return false;
    for (const auto& c : a->children)
        if (!is_classical(c)) return false;
    return true;
}

bool contains_variables(const AstPtr& a) { return !is_classical(a); }

namespace {
void collect_vars(const AstPtr& a, std::set<VarId>& out) {
    if (a->kind == Ast::Kind::VarDef || a->kind == Ast::Kind::VarRef) out.insert(a->var);
    for (const auto& c : a->children) collect_vars(c, out);
}
} // namespace

std::set<VarId> vars_of(const AstPtr& a) {
    std::set<VarId> out;
    collect_vars(a, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
  public:
    Parser(const std::string& text, const Alphabet& alphabet) : text_(text), alphabet_(alphabet) {}

    AstPtr run() {
        skip_ws();
        if (eof()) throw parse_error("empty xregex", 0);
        AstPtr a = parse_alt();
        skip_ws();
        if (!eof()) throw parse_error(std::string("unexpected '") + peek() + "'", pos_);
        return a;
    }

  private:
    const std::string& text_;
    const Alphabet& alphabet_;
    std::size_t pos_ = 0;

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    AstPtr parse_alt() {
        AstPtr left = parse_concat();
        skip_ws();
        if (!eof() && peek() == '|') {
            ++pos_;
            skip_ws();
            AstPtr right = parse_alt();
            return Ast::alt(std::move(left), std::move(right));
        }
        return left;
    }

    AstPtr parse_concat() {
        std::vector<AstPtr> items;
        for (;;) {
            skip_ws();
            if (eof() || peek() == '|' || peek() == ')' || peek() == '}') break;
            items.push_back(parse_postfix());
        }
        if (items.empty()) throw parse_error("expected an expression", pos_);
        return Ast::concat(std::move(items));
    }

    AstPtr parse_postfix() {
        AstPtr a = parse_atom();
        for (;;) {
            skip_ws();
            if (!eof() && peek() == '+') {
                ++pos_;
                a = Ast::plus(std::move(a));
            } else if (!eof() && peek() == '*') {
                ++pos_;
                a = Ast::star(std::move(a));
            } else {
                break;
            }
        }
        return a;
    }

    VarId parse_name() {
        if (eof() || !is_ident_start(peek()))
            throw parse_error("expected a variable name after '$'", pos_);
        std::size_t begin = pos_;
        while (!eof() && is_ident_char(peek())) ++pos_;
        return text_.substr(begin, pos_ - begin);
    }

    AstPtr parse_atom() {
        if (eof()) throw parse_error("unexpected end of input", pos_);
        char c = peek();
        if (c == '(') {
            std::size_t open_pos = pos_;
            ++pos_;
            AstPtr inner = parse_alt();
            skip_ws();
            if (eof() || peek() != ')') throw parse_error("unbalanced '('", open_pos);
            ++pos_;
            return inner;
        }
        if (c == '\\') {
            ++pos_;
            if (eof()) throw parse_error("dangling escape", pos_ - 1);
            char e = text_[pos_++];
            if (e == 'e') return Ast::epsilon();
            if (e == '0') return Ast::empty_set();
            if (kMetachars.find(e) == std::string::npos)
                throw parse_error(std::string("unknown escape '\\") + e + "'", pos_ - 2);
            return make_terminal(e, pos_ - 2);
        }
        if (c == '$') {
            std::size_t dollar = pos_;
            ++pos_;
            VarId name = parse_name();
            skip_ws();
            if (!eof() && peek() == '{') {
                std::size_t open_pos = pos_;
                ++pos_;
                skip_ws();
                AstPtr body = parse_alt();
                skip_ws();
                if (eof() || peek() != '}') throw parse_error("unbalanced '{'", open_pos);
                ++pos_;
                if (vars_of(body).count(name))
                    throw parse_error("variable '" + name + "' occurs inside its own definition", dollar);
                return Ast::def(name, std::move(body));
            }
            return Ast::ref(name);
        }
        if (kMetachars.find(c) != std::string::npos)
            throw parse_error(std::string("unexpected '") + c + "'", pos_);
        ++pos_;
        return make_terminal(c, pos_ - 1);
    }

    AstPtr make_terminal(char c, std::size_t at) {
        if (!alphabet_.contains(c))
            throw parse_error(std::string("terminal '") + c + "' is not in the alphabet", at);
        return Ast::terminal(c);
    }
};

} // namespace

AstPtr parse_xregex(const std::string& text, const Alphabet& alphabet) {
    return Parser(text, alphabet).run();
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

// Precedence levels: 0 alternation, 1 concatenation, 2 postfix, 3 atom.
int ast_prec(const AstPtr& a) {
    switch (a->kind) {
        case Ast::Kind::Alt: return 0;
        case Ast::Kind::Concat: return 1;
        case Ast::Kind::Plus: return 2;
        default: return 3;
    }
}

void render_node(const AstPtr& a, int min_prec, std::string& out);

void render_wrapped(const AstPtr& a, int min_prec, std::string& out) {
    int prec = is_star_sugar(a) ? 2 : ast_prec(a);
    if (prec < min_prec) {
        out += '(';
        render_node(a, 0, out);
        out += ')';
    } else {
        render_node(a, min_prec, out);
    }
}

void append_symbol(const RefSymbol& s, std::string& out) {
    switch (s.kind) {
        case RefSymbol::Kind::Terminal:
            if (kMetachars.find(s.ch) != std::string::npos) out += '\\';
            out += s.ch;
            return;
        case RefSymbol::Kind::Open: out += "<" + s.var + " "; return;
        case RefSymbol::Kind::Close: out += ">" + s.var + " "; return;
        case RefSymbol::Kind::Ref: out += "$" + s.var + " "; return;
    }
}

// A space keeps a following identifier character from being read as part of
// a preceding variable name.
void maybe_separate(std::string& out, char next) {
    if (!out.empty() && is_ident_char(out.back()) && out.find_last_of('$') != std::string::npos) {
        std::size_t d = out.find_last_of('$');
        bool all_ident = true;
        for (std::size_t i = d + 1; i < out.size(); ++i)
            if (!is_ident_char(out[i])) { all_ident = false; break; }
        if (all_ident && is_ident_char(next)) out += ' ';
    }
}

void render_node(const AstPtr& a, int min_prec, std::string& out) {
    switch (a->kind) {
        case Ast::Kind::Terminal: {
            char first = a->sym.kind == RefSymbol::Kind::Terminal ? a->sym.ch : '<';
            maybe_separate(out, first);
            append_symbol(a->sym, out);
            return;
        }
        case Ast::Kind::Epsilon: out += "\\e"; return;
        case Ast::Kind::EmptySet: out += "\\0"; return;
        case Ast::Kind::VarRef: out += "$" + a->var; return;
        case Ast::Kind::VarDef:
            out += "$" + a->var + "{";
            render_node(a->children[0], 0, out);
            out += "}";
            return;
        case Ast::Kind::Plus:
            render_wrapped(a->children[0], 3, out);
            out += '+';
            return;
        case Ast::Kind::Alt:
            if (is_star_sugar(a)) {
                render_wrapped(a->children[0]->children[0], 3, out);
                out += '*';
                return;
            }
            render_wrapped(a->children[0], 1, out);
            out += '|';
            render_wrapped(a->children[1], 0, out);
            return;
        case Ast::Kind::Concat:
            for (const auto& c : a->children) render_wrapped(c, 2, out);
            return;
    }
}

} // namespace

std::string render_xregex(const AstPtr& a) {
    std::string out;
    render_node(a, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Ref-regex and sequentiality

AstPtr to_ref_regex(const AstPtr& a) {
    switch (a->kind) {
        case Ast::Kind::VarDef:
            return Ast::concat({Ast::symbol(RefSymbol::open(a->var)), to_ref_regex(a->children[0]),
                                Ast::symbol(RefSymbol::close(a->var))});
        case Ast::Kind::VarRef: return Ast::symbol(RefSymbol::ref(a->var));
        case Ast::Kind::Concat:
        case Ast::Kind::Alt:
        case Ast::Kind::Plus: {
            auto n = std::make_shared<Ast>(*a);
            n->children.clear();
            for (const auto& c : a->children) n->children.push_back(to_ref_regex(c));
            return n;
        }
        default: return a;
    }
}

std::optional<VarId> sequentiality_offender(const AstPtr& a) {
    Nfa n = ref_regex_nfa(a);
    std::vector<int> dist = n.distance_to_final();
    for (const VarId& x : vars_of(a)) {
        int open_sym = -2;
        for (std::size_t i = 0; i < n.symbols().size(); ++i)
            if (n.symbols()[i].kind == RefSymbol::Kind::Open && n.symbols()[i].var == x)
                open_sym = static_cast<int>(i);
        if (open_sym == -2) continue;
        // Product with a counter for occurrences of open(x); accepting with
        // counter >= 2 witnesses two instantiated definitions.
        std::vector<std::vector<bool>> seen(n.num_states(), std::vector<bool>(3, false));
        std::vector<std::pair<int, int>> stack;
        auto push = [&](int s, int c) {
            if (!seen[s][c]) {
                seen[s][c] = true;
                stack.emplace_back(s, c);
            }
        };
        push(n.start, 0);
        bool bad = false;
        while (!stack.empty() && !bad) {
            auto [s, c] = stack.back();
            stack.pop_back();
            if (c >= 2 && dist[s] >= 0) { bad = true; break; }
            for (const auto& t : n.out(s)) {
                int nc = (t.sym == open_sym) ? std::min(2, c + 1) : c;
                push(t.dst, nc);
            }
        }
        if (bad) return x;
    }
    return std::nullopt;
}

bool is_sequential(const AstPtr& a) { return !sequentiality_offender(a).has_value(); }

// ---------------------------------------------------------------------------
// Precedence graph

namespace {
void precedence_walk(const AstPtr& a, std::vector<VarId>& enclosing, PrecedenceGraph& g) {
    if (a->kind == Ast::Kind::VarDef || a->kind == Ast::Kind::VarRef) {
        g.nodes.insert(a->var);
        for (const VarId& y : enclosing) g.arcs.insert({a->var, y});
    }
    if (a->kind == Ast::Kind::VarDef) {
        enclosing.push_back(a->var);
        precedence_walk(a->children[0], enclosing, g);
        enclosing.pop_back();
        return;
    }
    for (const auto& c : a->children) precedence_walk(c, enclosing, g);
}
} // namespace

PrecedenceGraph precedence_graph_of(const AstPtr& a) {
    PrecedenceGraph g;
    std::vector<VarId> enclosing;
    precedence_walk(a, enclosing, g);
    return g;
}

std::optional<std::vector<VarId>> PrecedenceGraph::find_cycle() const {
    std::map<VarId, std::vector<VarId>> adj;
    for (const auto& [x, y] : arcs) adj[x].push_back(y);
    std::map<VarId, int> state;  // 0 new, 1 active, 2 done
    std::vector<VarId> path;
    std::optional<std::vector<VarId>> found;
    std::function<bool(const VarId&)> dfs = [&](const VarId& v) {
        state[v] = 1;
        path.push_back(v);
        for (const VarId& w : adj[v]) {
            if (state[w] == 1) {
                auto it = std::find(path.begin(), path.end(), w);
                std::vector<VarId> cyc(it, path.end());
                cyc.push_back(w);
                found = cyc;
                return true;
            }
            if (state[w] == 0 && dfs(w)) return true;
        }
        path.pop_back();
        state[v] = 2;
        return false;
    };
    for (const VarId& v : nodes)
        if (state[v] == 0 && dfs(v)) return found;
    return std::nullopt;
}

bool PrecedenceGraph::is_acyclic() const { return !find_cycle().has_value(); }

std::vector<VarId> PrecedenceGraph::topological_order() const {
    std::map<VarId, int> indeg;
    std::map<VarId, std::vector<VarId>> adj;
    for (const VarId& v : nodes) indeg[v] = 0;
    for (const auto& [x, y] : arcs) {
        adj[x].push_back(y);
        ++indeg[y];
    }
    std::vector<VarId> ready, order;
    for (const auto& [v, d] : indeg)
        if (d == 0) ready.push_back(v);
    while (!ready.empty()) {
        std::sort(ready.begin(), ready.end(), std::greater<>());
        VarId v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (const VarId& w : adj[v])
            if (--indeg[w] == 0) ready.push_back(w);
    }
    return order;
}

// ---------------------------------------------------------------------------
// Conjunctive xregex

AstPtr ConjunctiveXregex::concatenation() const {
    if (components.size() == 1) return components[0];
    return Ast::concat(components);
}

std::set<VarId> ConjunctiveXregex::all_vars() const { return vars_of(concatenation()); }

std::size_t ConjunctiveXregex::size() const {
    std::size_t n = 0;
    for (const auto& c : components) n += node_count(c);
    return n;
}

ConjunctiveXregex validate_conjunctive(std::vector<AstPtr> components, const Alphabet& alphabet) {
    if (components.empty()) throw validation_error("a conjunctive xregex needs at least one component");
    ConjunctiveXregex cx{std::move(components), alphabet};
    AstPtr cat = cx.concatenation();
    if (auto bad = sequentiality_offender(cat)) throw not_sequential_error(*bad);
    if (auto cyc = precedence_graph_of(cat).find_cycle()) {
        std::vector<std::string> witness(cyc->begin(), cyc->end());
        throw cyclic_error(std::move(witness));
    }
    return cx;
}

PrecedenceGraph precedence_graph(const ConjunctiveXregex& cx) {
    return precedence_graph_of(cx.concatenation());
}

bool is_acyclic(const ConjunctiveXregex& cx) { return precedence_graph(cx).is_acyclic(); }

// ---------------------------------------------------------------------------
// Fragment classification

bool is_vstar_free(const AstPtr& a) {
    if (a->kind == Ast::Kind::Plus && contains_variables(a->children[0])) return false;
    for (const auto& c : a->children)
        if (!is_vstar_free(c)) return false;
    return true;
}

bool is_valt_free(const AstPtr& a) {
    if (a->kind == Ast::Kind::Alt && !is_star_sugar(a) &&
        (contains_variables(a->children[0]) || contains_variables(a->children[1])))
        return false;
    for (const auto& c : a->children)
        if (!is_valt_free(c)) return false;
    return true;
}

bool is_variable_simple(const AstPtr& a) { return is_vstar_free(a) && is_valt_free(a); }

namespace {
bool defs_basic(const AstPtr& a) {
    if (a->kind == Ast::Kind::VarDef) {
        const AstPtr& body = a->children[0];
        if (!is_classical(body) && body->kind != Ast::Kind::VarRef) return false;
    }
    for (const auto& c : a->children)
        if (!defs_basic(c)) return false;
    return true;
}
} // namespace

bool is_simple(const AstPtr& a) { return is_variable_simple(a) && defs_basic(a); }

std::vector<AstPtr> top_alternatives(const AstPtr& a) {
    if (a->kind != Ast::Kind::Alt) return {a};
    std::vector<AstPtr> out = top_alternatives(a->children[0]);
    std::vector<AstPtr> right = top_alternatives(a->children[1]);
    out.insert(out.end(), right.begin(), right.end());
    return out;
}

std::vector<AstPtr> concat_factors(const AstPtr& a) {
    if (a->kind != Ast::Kind::Concat) return {a};
    std::vector<AstPtr> out;
    for (const auto& c : a->children) {
        auto sub = concat_factors(c);
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

bool is_normal_form(const AstPtr& a) {
    for (const AstPtr& alt : top_alternatives(a))
        if (!is_simple(alt)) return false;
    return true;
}

namespace {
// A definition body occurring in the definition of another variable.
void refs_inside_defs(const AstPtr& a, bool inside, std::set<VarId>& out) {
    if (a->kind == Ast::Kind::VarRef && inside) out.insert(a->var);
    if (a->kind == Ast::Kind::VarDef) {
        refs_inside_defs(a->children[0], true, out);
        return;
    }
    for (const auto& c : a->children) refs_inside_defs(c, inside, out);
}

void defs_of(const AstPtr& a, std::map<VarId, std::vector<AstPtr>>& out) {
    if (a->kind == Ast::Kind::VarDef) out[a->var].push_back(a);
    for (const auto& c : a->children) defs_of(c, out);
}
} // namespace

FragmentClassification classify(const ConjunctiveXregex& cx) {
    FragmentClassification fc;
    fc.vstar_free = fc.valt_free = fc.normal_form = true;
    for (const auto& comp : cx.components) {
        fc.vstar_free = fc.vstar_free && is_vstar_free(comp);
        fc.valt_free = fc.valt_free && is_valt_free(comp);
        fc.normal_form = fc.normal_form && is_normal_form(comp);
    }
    fc.variable_simple = fc.vstar_free && fc.valt_free;
    bool basic = true;
    for (const auto& comp : cx.components) basic = basic && defs_basic(comp);
    fc.simple = fc.variable_simple && basic;

    AstPtr cat = cx.concatenation();
    std::set<VarId> referenced_in_other_defs;
    refs_inside_defs(cat, false, referenced_in_other_defs);
    std::map<VarId, std::vector<AstPtr>> defs;
    defs_of(cat, defs);
    for (const VarId& x : cx.all_vars()) {
        bool all_basic = true;
        auto it = defs.find(x);
        if (it != defs.end()) {
            for (const AstPtr& d : it->second) {
                const AstPtr& body = d->children[0];
                if (!is_classical(body) && body->kind != Ast::Kind::VarRef) all_basic = false;
            }
        }
        if (all_basic || !referenced_in_other_defs.count(x)) fc.flat_vars.insert(x);
    }
    fc.all_flat = fc.flat_vars.size() == cx.all_vars().size();
    return fc;
}

} // namespace cxrpq
