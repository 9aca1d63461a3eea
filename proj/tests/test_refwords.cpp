#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cxrpq/conjunctive.hpp"
#include "cxrpq/refwords.hpp"
#include "testutil.hpp"

using namespace cxrpq;
using testutil::Gen;

namespace {
const Alphabet kAb("ab");
const Alphabet kAbc("abc");

AstPtr P(const std::string& text, const Alphabet& sigma = kAbc) { return parse_xregex(text, sigma); }

// Reference deref: literal textual substitution in randomized order.
std::string deref_random_order(const RefWord& w, std::mt19937& rng) {
    std::vector<RefSymbol> cur = w.symbols;
    std::set<VarId> defined;
    for (const RefSymbol& s : cur)
        if (s.kind == RefSymbol::Kind::Open) defined.insert(s.var);
    std::vector<RefSymbol> tmp;
    for (const RefSymbol& s : cur)
        if (s.kind != RefSymbol::Kind::Ref || defined.count(s.var)) tmp.push_back(s);
    cur = tmp;
    for (;;) {
        std::vector<VarId> ready;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (cur[i].kind != RefSymbol::Kind::Open) continue;
            bool plain = true;
            for (std::size_t j = i + 1; j < cur.size(); ++j) {
                if (cur[j].kind == RefSymbol::Kind::Close && cur[j].var == cur[i].var) break;
                if (cur[j].kind != RefSymbol::Kind::Terminal) { plain = false; break; }
            }
            if (plain) ready.push_back(cur[i].var);
        }
        if (ready.empty()) break;
        VarId x = ready[std::uniform_int_distribution<std::size_t>(0, ready.size() - 1)(rng)];
        std::string image;
        std::size_t open = 0, close = 0;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (cur[i].kind == RefSymbol::Kind::Open && cur[i].var == x) open = i;
            if (cur[i].kind == RefSymbol::Kind::Close && cur[i].var == x) close = i;
        }
        for (std::size_t i = open + 1; i < close; ++i) image += cur[i].ch;
        std::vector<RefSymbol> next;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (i >= open && i <= close) {
                if (i == open)
                    for (char c : image) next.push_back(RefSymbol::terminal(c));
                continue;
            }
            if (cur[i].kind == RefSymbol::Kind::Ref && cur[i].var == x) {
                for (char c : image) next.push_back(RefSymbol::terminal(c));
                continue;
            }
            next.push_back(cur[i]);
        }
        cur = std::move(next);
    }
    std::string out;
    for (const RefSymbol& s : cur) out += s.ch;
    return out;
}
} // namespace

TEST_CASE("validate_refword accepts the worked example") {
    RefWord w = parse_refword_text("a $x4 a <x1 ab <x2 acc >x2 a $x2 $x4 >x1 <x3 $x1 a $x2 >x3 $x3 b $x1");
    CHECK_NOTHROW(validate_refword(w.symbols, kAbc));
    CHECK(is_valid_refword(w.symbols));
}

TEST_CASE("validate_refword rejections") {
    RefWord cyc = parse_refword_text("a $x b <x ab >x c <y $x aa $y >y $y");
    CHECK_THROWS_AS(validate_refword(cyc.symbols, kAbc), cyclic_error);
    CHECK_FALSE(is_valid_refword(cyc.symbols));

    RefWord nested_ref = parse_refword_text("a $x a <x a $y b >x c <y $x a >y");
    CHECK_THROWS_AS(validate_refword(nested_ref.symbols, kAbc), cyclic_error);

    RefWord dup = parse_refword_text("<x a >x <x b >x");
    CHECK_THROWS_AS(validate_refword(dup.symbols, kAbc), validation_error);

    RefWord overlap = parse_refword_text("<x <y a >x >y");
    CHECK_THROWS_AS(validate_refword(overlap.symbols, kAbc), validation_error);

    CHECK_NOTHROW(validate_refword(parse_refword_text("abc").symbols, kAbc));
}

TEST_CASE("deref of the worked example") {
    RefWord w = parse_refword_text("a $x4 a <x1 ab <x2 acc >x2 a $x2 $x4 >x1 <x3 $x1 a $x2 >x3 $x3 b $x1");
    DerefResult r = deref(w);
    CHECK(r.mapping.get("x1") == "abaccaacc");
    CHECK(r.mapping.get("x2") == "acc");
    CHECK(r.mapping.get("x3") == "abaccaaccaacc");
    CHECK(r.mapping.get("x4") == "");
    CHECK(r.word == "aa" + r.mapping.get("x1") + r.mapping.get("x3") + r.mapping.get("x3") + "b" +
                        r.mapping.get("x1"));
}

TEST_CASE("deref of u5") {
    RefWord u5 = parse_refword_text("<x1 cc <x2 aa >x2 >x1 c $x2 c $x3 b $x1");
    DerefResult r = deref(u5);
    CHECK(r.word == "ccaacaacbccaa");
    CHECK(r.mapping.get("x1") == "ccaa");
    CHECK(r.mapping.get("x2") == "aa");
    CHECK(r.mapping.get("x3") == "");
}

TEST_CASE("deref is the identity on terminal words") {
    RefWord w = parse_refword_text("abc");
    DerefResult r = deref(w);
    CHECK(r.word == "abc");
    CHECK(r.mapping.images.empty());
}

TEST_CASE("enumerate_refwords small cases") {
    auto ws = enumerate_refwords(P("$x{a|b}"), 4);
    REQUIRE(ws.size() == 2);
    CHECK(ws[0].str() == "<x a >x");
    CHECK(ws[1].str() == "<x b >x");

    CHECK(enumerate_refwords(P("\\0"), 8).empty());
}

TEST_CASE("the nested-star example admits the documented witness") {
    AstPtr alpha = P("a*$x1{a*$x2{(a|b)*}b*a*}$x2*(a|b)*$x1", kAb);
    RefWord u1 = parse_refword_text("aaaa <x1 <x2 ba >x2 baa >x1 $x2 $x2 bba $x1");
    CHECK(refword_member(alpha, u1));
    DerefResult r = deref(u1);
    CHECK(r.word == "aaaababaabababbababaa");  // a^4 (ba)^2 (ab)^3 (ba)^3 a
    CHECK(r.mapping.get("x1") == "babaa");
    CHECK(r.mapping.get("x2") == "ba");

    RefWord u2 = parse_refword_text("aaa <x1 a <x2 bab >x2 aa >x1 $x2 abb $x1");
    CHECK(refword_member(alpha, u2));
    CHECK(deref(u2).word == r.word);
}

TEST_CASE("enumerate_refwords matches direct syntax tree enumeration") {
    Gen gen(23);
    for (int i = 0; i < 120; ++i) {
        AstPtr a = gen.xregex(kAb, {"x", "y"}, gen.pick(1, 8), gen.coin());
        auto got = enumerate_refwords(a, 6);
        std::set<std::vector<RefSymbol>> expect;
        for (const auto& w : testutil::ast_reflang(a, 6))
            if (is_valid_refword(w)) expect.insert(w);
        std::set<std::vector<RefSymbol>> got_set;
        for (const auto& w : got) got_set.insert(w.symbols);
        CAPTURE(render_xregex(a));
        CHECK(got_set == expect);
    }
}

TEST_CASE("enumerate_lang_bounded") {
    SUBCASE("doubled block language") {
        auto got = enumerate_lang_bounded(P("$x{a+}$x", kAb), 10, 10);
        // Independent route over the directly enumerated ref-language.
        std::set<std::string> expect;
        for (const auto& w : testutil::ast_reflang(P("$x{a+}$x", kAb), 10)) {
            DerefResult r = deref(RefWord{w});
            if (r.word.size() <= 10) expect.insert(r.word);
        }
        CHECK(got == expect);
        CHECK(expect == std::set<std::string>{"aa", "aaaa", "aaaaaa", "aaaaaaaa", "aaaaaaaaaa"});
    }
    SUBCASE("plain alternation") {
        CHECK(enumerate_lang_bounded(P("(a|b)"), 4, 4) == std::set<std::string>{"a", "b"});
    }
}

TEST_CASE("refwords_with_mapping") {
    VariableMapping v;
    v.set("x", "aa");
    auto ws = refwords_with_mapping(P("$x{a*}", kAb), v, 6);
    REQUIRE(ws.size() == 1);
    CHECK(ws[0].str() == "<x aa >x");

    VariableMapping bad;
    bad.set("x", "b");
    CHECK(refwords_with_mapping(P("$x{a*}", kAb), bad, 6).empty());

    VariableMapping eps;
    auto rs = refwords_with_mapping(P("$x1{(a|b)*}c$x1"), eps, 6);
    bool found = false;
    for (const RefWord& w : rs) found = found || w.str() == "<x1 >x1 c $x1";
    CHECK(found);
}

TEST_CASE("property: deref is order independent and repeatable") {
    Gen gen(29);
    std::mt19937 rng(31);
    for (int i = 0; i < 150; ++i) {
        AstPtr a = gen.xregex(kAb, {"x", "y", "z"}, gen.pick(1, 9), gen.coin());
        for (const RefWord& w : enumerate_refwords(a, 7)) {
            DerefResult r1 = deref(w);
            DerefResult r2 = deref(w);
            CHECK(r1.word == r2.word);
            CHECK(r1.mapping == r2.mapping);
            CHECK(deref_random_order(w, rng) == r1.word);

            std::size_t terminals = 0;
            for (const RefSymbol& s : w.symbols) terminals += s.kind == RefSymbol::Kind::Terminal;
            CHECK(r1.word.size() >= terminals);
        }
    }
}

TEST_CASE("property: bounded language words pass the one-dimensional match oracle") {
    Gen gen(37);
    for (int i = 0; i < 60; ++i) {
        AstPtr a = gen.xregex(kAb, {"x", "y"}, gen.pick(1, 8), gen.coin());
        ConjunctiveXregex cx = validate_conjunctive({a}, kAb);
        for (const std::string& w : enumerate_lang_bounded(a, 8, 8)) {
            auto psi = is_conjunctive_match_bounded(cx, {w}, 16);
            CAPTURE(render_xregex(a));
            CAPTURE(w);
            CHECK(psi.has_value());
        }
    }
}
