#include <gtest/gtest.h>

#include "support.hpp"

using namespace stg;
using test::state;

TEST(Corpus, LoadsFixture) {
    const Corpus& c = test::fixture_corpus();
    EXPECT_EQ(c.sentences.size(), 11u);
    EXPECT_EQ(c.source, "example analyses");
    EXPECT_EQ(c.sentences.front().id, "1a");
    EXPECT_EQ(c.sentences.front().tokens.size(), 7u);
    EXPECT_EQ(c.sentences.front().tokens[0].surface, "The");
    EXPECT_EQ(format(test::sentence("7a").tokens[4].state), "NP(t) [N(+) [NP(t)]]");
}

TEST(Corpus, DefaultIdsAreOrdinals) {
    Corpus c = load_corpus("a\tS [ ]\nb\tN [ ]\n\nc\tS [ ]\n");
    ASSERT_EQ(c.sentences.size(), 2u);
    EXPECT_EQ(c.sentences[0].id, "1");
    EXPECT_EQ(c.sentences[1].id, "2");
}

TEST(Corpus, RoundTripIsByteIdentical) {
    for (const char* name : {"analyses.tb", "lexical_heads.tb"}) {
        Corpus c = load_corpus(test::read_text(test::fixture_path(name)));
        std::string once = write_corpus(c);
        std::string twice = write_corpus(load_corpus(once));
        EXPECT_EQ(once, twice) << name;
        EXPECT_EQ(load_corpus(once).sentences, c.sentences);
    }
}

TEST(Corpus, CanonicalizesNotation) {
    Corpus c = load_corpus("# id: x\nThe\tS[]\ndog\tN [ ]\n");
    EXPECT_EQ(write_corpus(c), "# sentences: 1\n# tokens: 2\n\n# id: x\nThe\tS [ ]\ndog\tN [ ]\n");
}

TEST(Corpus, StrictModeReportsTheLine) {
    try {
        load_corpus("a\tS [ ]\nb\tN [ ]\n\nc\tS [\n");
        FAIL();
    } catch (const CorpusError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
    EXPECT_THROW(load_corpus("a S [ ]\n"), CorpusError);
    EXPECT_THROW(load_corpus("a\tS [ ]\nb\t<end>\n"), CorpusError);
}

TEST(Corpus, InvalidAnalysisIsRejected) {
    // N [NP, NP] cannot follow N [VP]
    try {
        load_corpus("a\tS [ ]\nb\tN [VP]\nc\tN [NP, NP]\n");
        FAIL();
    } catch (const CorpusError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("invalid analysis"), std::string::npos);
    }
}

TEST(Corpus, LenientModeSkipsAndReports) {
    LoadOptions lenient;
    lenient.strict = false;
    std::vector<Diagnostic> diagnostics;
    Corpus c = load_corpus("# id: good\na\tS [ ]\nb\tN [ ]\n\n# id: bad\nc\tS [\n\n# id: also\nd\tS [ ]\ne\tN [ ]\n",
                           lenient, &diagnostics);
    ASSERT_EQ(c.sentences.size(), 2u);
    EXPECT_EQ(c.sentences[0].id, "good");
    EXPECT_EQ(c.sentences[1].id, "also");
    ASSERT_EQ(diagnostics.size(), 1u);
    EXPECT_EQ(diagnostics[0].line, 6u);
}

TEST(Corpus, RootMustHaveEmptyStack) {
    EXPECT_THROW(load_corpus("a\tS [NP]\nb\tNP [ ]\n"), CorpusError);
    LoadOptions o;
    o.root = parse_category("NP");
    EXPECT_THROW(load_corpus("a\tS [ ]\nb\tN [ ]\n", o), CorpusError);
    EXPECT_NO_THROW(load_corpus("a\tNP [ ]\nb\tN [ ]\n", o));
}

TEST(Corpus, EmptyInput) {
    Corpus c = load_corpus("");
    EXPECT_TRUE(c.sentences.empty());
    EXPECT_EQ(write_corpus(c), "# sentences: 0\n# tokens: 0\n");
}

TEST(Corpus, EventsEndInTerminal) {
    Corpus c;
    c.sentences.push_back(test::sentence("1a"));
    auto events = extract_events(c);
    ASSERT_EQ(events.size(), 7u);
    EXPECT_EQ(events[0].lexeme, "the");
    EXPECT_EQ(events[0].surface, "The");
    EXPECT_EQ(format(events[4].from), "N [NP]");
    EXPECT_EQ(format(events[4].to), "NP [ ]");
    EXPECT_TRUE(events.back().to.terminal);
}

TEST(Validation, AcceptsEveryFixtureAnalysis) {
    for (const auto& s : test::fixture_corpus().sentences) EXPECT_TRUE(validate_parse(s.tokens).empty()) << s.id;
}

TEST(Validation, FlagsUnlicensedTransitions) {
    auto tokens = test::sentence("1a").tokens;
    tokens[4].state = state("N [VP]");
    auto v = validate_parse(tokens);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v.front().position, 4u);
}

TEST(Validation, TruncatedAnalysisDoesNotReachTheEnd) {
    Parse p;
    p.tokens = test::sentence("1a").tokens;
    for (std::size_t i = 0; i < p.tokens.size(); ++i) {
        State next = i + 1 < p.tokens.size() ? p.tokens[i + 1].state : State::end();
        p.transitions.push_back(alpha_generalize(p.tokens[i].state, next));
    }
    EXPECT_TRUE(validate_parse(p).empty());
    p.tokens.pop_back();
    p.transitions.pop_back();
    auto v = validate_parse(p);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].position, 6u);
    EXPECT_NE(v[0].message.find("end state"), std::string::npos);
}

TEST(Validation, RecordedTransitionMustProduceTheNextState) {
    Parse p;
    p.tokens = test::sentence("1a").tokens;
    for (std::size_t i = 0; i < p.tokens.size(); ++i) {
        State next = i + 1 < p.tokens.size() ? p.tokens[i + 1].state : State::end();
        p.transitions.push_back(alpha_generalize(p.tokens[i].state, next));
    }
    p.transitions[2] = test::schema("VP [*]", "NP [*]");
    auto v = validate_parse(p);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].position, 3u);
}
