#include <gtest/gtest.h>

#include <array>

#include "support.hpp"

using namespace stg;
using test::schema;
using test::state;

namespace {

std::string apply(const Transition& t, const char* s) {
    auto r = match_and_apply(t, state(s));
    return r ? format(*r) : "no match";
}

}  // namespace

TEST(Schema, PushCarriesTheStack) {
    Transition gave = schema("VP [*]", "NP [NP, *]");
    EXPECT_EQ(apply(gave, "VP [ ]"), "NP [NP]");
    EXPECT_EQ(apply(gave, "VP [X(out)]"), "NP [NP, X(out)]");
    EXPECT_EQ(apply(gave, "N [ ]"), "no match");
    EXPECT_EQ(apply(gave, "VP(np) [ ]"), "no match");
}

TEST(Schema, PopTakesTheTopEntry) {
    Transition pop = schema("N [*]", "* [ ]");
    EXPECT_EQ(apply(pop, "N [NP]"), "NP [ ]");
    EXPECT_EQ(apply(pop, "N [VP(np), VP]"), "VP(np) [VP]");
    EXPECT_EQ(apply(pop, "N [ ]"), "<end>");
    EXPECT_EQ(apply(pop, "N [N(+) [NP(t)], VP]"), "N(+) [NP(t), VP]");
}

TEST(Schema, PopAndPush) {
    Transition t = schema("N [*]", "* [S(rel)]");
    EXPECT_EQ(apply(t, "N [NP(t)]"), "NP(t) [S(rel)]");
    EXPECT_EQ(apply(t, "N [ ]"), "no match");
}

TEST(Schema, FeatureVariableBindsTheRemainder) {
    Transition the = schema("S(?b) [*]", "N [VP(?b), *]");
    EXPECT_EQ(apply(the, "S [ ]"), "N [VP]");
    EXPECT_EQ(apply(the, "S(np) [VP]"), "N [VP(np), VP]");
    EXPECT_EQ(apply(the, "S(rel,np(dog)) [ ]"), "N [VP(rel,np(dog))]");
    EXPECT_EQ(apply(the, "NP [ ]"), "no match");
}

TEST(Schema, RepeatedVariableMustAgree) {
    Transition t = schema("S(?b) [VP(?b), *]", "VP [*]");
    EXPECT_EQ(apply(t, "S(np) [VP(np)]"), "VP [ ]");
    EXPECT_EQ(apply(t, "S(np) [VP(rel)]"), "no match");
}

TEST(Schema, ConcreteTransitionsMatchExactly) {
    Transition t = Transition::concrete(state("N [NP]"), state("NP [ ]"));
    EXPECT_EQ(apply(t, "N [NP]"), "NP [ ]");
    EXPECT_EQ(apply(t, "N [NP, VP]"), "no match");
    Transition fin = Transition::concrete(state("N [ ]"), State::end());
    EXPECT_EQ(apply(fin, "N [ ]"), "<end>");
}

TEST(Schema, EndStateHasNoSuccessor) {
    EXPECT_FALSE(match_and_apply(schema("N [*]", "* [ ]"), State::end()));
}

TEST(Schema, CheckRejectsIllFormedSchemas) {
    EXPECT_THROW(check_schema(schema("* [ ]", "N [*]")), SchemaError);
    EXPECT_THROW(check_schema(schema("N [ ]", "* [ ]")), SchemaError);
    EXPECT_THROW(check_schema(schema("N [*]", "NP [ ]")), SchemaError);
    EXPECT_NO_THROW(check_schema(schema("N [*]", "S(rel) [*]")));
    EXPECT_NO_THROW(check_schema(schema("N [ ]", "<end>")));
}

TEST(Schema, ClassifiesTransitions) {
    EXPECT_EQ(classify_transition(state("VP [ ]"), state("NP [NP]")), TransitionShape::Push);
    EXPECT_EQ(classify_transition(state("N [NP]"), state("NP [ ]")), TransitionShape::Pop);
    EXPECT_EQ(classify_transition(state("N [ ]"), State::end()), TransitionShape::Terminal);
    EXPECT_EQ(classify_transition(state("N [NP]"), State::end()), TransitionShape::Unlicensed);
    EXPECT_EQ(classify_transition(state("N [NP]"), state("VP [ ]")), TransitionShape::Unlicensed);
}

TEST(Schema, AlphaGeneralization) {
    auto alpha = [](const char* from, const char* to) {
        return format(alpha_generalize(state(from), std::string_view(to) == "<end>" ? State::end() : state(to)));
    };
    EXPECT_EQ(alpha("VP [ ]", "NP [NP]"), "VP [*] -> NP [NP, *]");
    EXPECT_EQ(alpha("N [NP]", "NP [ ]"), "N [*] -> * [ ]");
    EXPECT_EQ(alpha("N [NP(t)]", "NP(t) [S(rel)]"), "N [*] -> * [S(rel)]");
    EXPECT_EQ(alpha("N [VP(np), VP]", "S(np) [VP(np), VP]"), "N [*] -> S(np) [*]");
    EXPECT_EQ(alpha("N [ ]", "<end>"), "N [*] -> * [ ]");
    EXPECT_EQ(alpha("S [ ]", "N [VP]"), "S [*] -> N [VP, *]");
}

TEST(Schema, AlphaSchemaReproducesItsEvent) {
    for (const auto& s : test::fixture_corpus().sentences)
        for (std::size_t i = 0; i < s.tokens.size(); ++i) {
            State next = i + 1 < s.tokens.size() ? s.tokens[i + 1].state : State::end();
            auto got = match_and_apply(alpha_generalize(s.tokens[i].state, next), s.tokens[i].state);
            ASSERT_TRUE(got) << s.id << " token " << i + 1;
            EXPECT_EQ(*got, next) << s.id << " token " << i + 1;
        }
}

TEST(Schema, StandardCoordination) {
    Transition gnawed = derive_coordination(schema("VP [*]", "NP [*]"));
    EXPECT_EQ(format(gnawed), "VP [*] -> NP [VP(+), *]");
    EXPECT_EQ(apply(gnawed, "VP [ ]"), "NP [VP(+)]");
    Transition bone = derive_coordination(schema("N [*]", "* [ ]"));
    EXPECT_EQ(apply(bone, "N [VP(+)]"), "VP(+) [N(+)]");
}

TEST(Schema, ListCoordination) {
    const std::array<Category, 1> discharged{parse_category("NP(t)")};
    Transition bone = derive_coordination(schema("N [*]", "* [ ]"), discharged);
    EXPECT_EQ(format(bone), "N [NP(t), *] -> NP(t) [N(+) [NP(t)], *]");
    EXPECT_EQ(apply(bone, "N [NP(t)]"), "NP(t) [N(+) [NP(t)]]");
}

TEST(Schema, CoordinationRejections) {
    EXPECT_THROW(derive_coordination(schema("N [ ]", "<end>")), SchemaError);
    const std::array<Category, 2> two{parse_category("NP"), parse_category("NP(t)")};
    EXPECT_THROW(derive_coordination(schema("N [*]", "* [ ]"), two), SchemaError);
    const std::array<Category, 1> one{parse_category("NP")};
    EXPECT_THROW(derive_coordination(schema("VP [*]", "NP [*]"), one), SchemaError);
}
