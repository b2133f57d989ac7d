// Acceptance suite: one PASS/FAIL line per criterion, with its runtime
// checked against the allowed budget. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracle_values.hpp"
#include "support.hpp"

using namespace stg;

namespace {

struct Check {
    bool ok = true;
    std::string why;

    void require(bool condition, const std::string& what) {
        if (!condition && ok) {
            ok = false;
            why = what;
        }
    }
};

const Corpus& corpus() { return test::fixture_corpus(); }
Lexicon word_counts() { return count_events(extract_events(corpus())); }

void dog_mle(Check& c) {
    Lexicon mle = estimate_mle(extract_events(corpus()));
    const auto& dog = mle.at("dog");
    c.require(dog.size() == 5, "dog has " + std::to_string(dog.size()) + " transitions");
    for (const char* key : {"N [NP] -> NP [ ]", "N [NP(t)] -> S(rel) [NP(t)]", "N [NP(t)] -> NP(t) [S(rel)]",
                            "N [VP(np), VP] -> S(np) [VP(np), VP]", "N [ ] -> S(rel) [ ]"}) {
        auto it = dog.entries().find(key);
        c.require(it != dog.entries().end() && it->second.weight == 1.0 / 5.0, std::string("P(") + key + ") != 1/5");
    }
}

void dog_alpha(Check& c) {
    const Lexicon alpha = normalize(generalize_alpha(word_counts()));
    const auto& dog = alpha.at("dog");
    c.require(dog.size() == 4, "dog has " + std::to_string(dog.size()) + " alpha-schemas");
    const std::pair<const char*, double> expected[] = {{"N [*] -> * [ ]", 0.2},
                                                       {"N [*] -> * [S(rel)]", 0.2},
                                                       {"N [*] -> S(np) [*]", 0.2},
                                                       {"N [*] -> S(rel) [*]", 0.4}};
    for (const auto& [key, p] : expected) {
        auto it = dog.entries().find(key);
        c.require(it != dog.entries().end() && it->second.weight == p, std::string("P(") + key + ") inexact");
    }
}

void beta_merge(Check& c) {
    Lexicon alpha = generalize_alpha(word_counts());
    const auto& before = alpha.at("the");
    c.require(before.weight(test::schema("S [*]", "N [VP, *]")) > 0 &&
                  before.weight(test::schema("S(np) [*]", "N [VP(np), *]")) > 0,
              "the two alpha-schemas are not both present");
    const Lexicon beta = generalize_beta(alpha);
    const auto& after = beta.at("the");
    c.require(after.weight(test::schema("S(?b) [*]", "N [VP(?b), *]")) ==
                  before.weight(test::schema("S [*]", "N [VP, *]")) +
                      before.weight(test::schema("S(np) [*]", "N [VP(np), *]")),
              "merged schema does not pool both counts");
    c.require(after.weight(test::schema("S [*]", "N [VP, *]")) == 0 &&
                  after.weight(test::schema("S(np) [*]", "N [VP(np), *]")) == 0,
              "unmerged schemas remain");
}

void oracle_equivalence(Check& c) {
    const auto& m = test::fixture_model();
    DecoderConfig cfg;
    cfg.beam_width = 10000;
    for (const auto& s : corpus().sentences) {
        auto words = stg::surfaces(s.tokens);
        auto v = viterbi(m, words, cfg);
        auto o = exhaustive_oracle(m, words, cfg);
        if (!v || !o) {
            c.require(false, s.id + ": no parse");
            continue;
        }
        c.require(test::path_of(v->tokens) == test::path_of(o->tokens), s.id + ": viterbi and oracle differ");
        c.require(std::abs(v->log_prob - o->log_prob) <= 1e-9, s.id + ": scores differ");
        c.require(test::path_of(v->tokens) == test::path_of(s.tokens), s.id + ": parse is not the gold analysis");
    }
}

void round_trip(Check& c) {
    for (const char* name : {"analyses.tb", "lexical_heads.tb"}) {
        std::string once = write_corpus(load_corpus(test::read_text(test::fixture_path(name))));
        c.require(write_corpus(load_corpus(once)) == once, std::string(name) + " changes on rewrite");
    }
    std::string model = write_model(test::fixture_model());
    c.require(write_model(load_model(model)) == model, "model file changes on rewrite");
}

void depth_accounting(Check& c) {
    auto depths = [](const AnnotatedSentence& s) {
        std::vector<int> d;
        for (const auto& t : s.tokens) d.push_back(static_cast<int>(depth(t.state)));
        return d;
    };
    c.require(depths(test::sentence("8")) == std::vector<int>{0, 1, 1, 2, 2, 3, 2, 1, 0}, "(8) depth sequence");
    c.require(depths(test::sentence("9")) == std::vector<int>(test::sentence("9").tokens.size(), 0),
              "(9) depth sequence");
}

void heavy_np(Check& c) {
    EstimationConfig cfg;
    cfg.weights = {0.0, 1.0, 0.0, 0.0};
    TransitionModel toy = train(corpus(), cfg);
    auto& threw = toy.alpha["threw"];
    threw = {};
    const double p2 = 1.0 / 3.0;
    threw.add(test::schema("VP [*]", "NP [X(out), *]"), 2 * p2);
    threw.add(test::schema("VP [*]", "X(out) [NP, *]"), p2);

    std::vector<double> gaps;
    for (int n = 1; n <= 12; ++n) {
        std::vector<Token> unshifted{{"I", test::state("S [ ]")}, {"threw", test::state("VP [ ]")}};
        std::vector<Token> shifted = unshifted;
        shifted.push_back({"out", test::state("X(out) [NP]")});
        std::vector<std::pair<std::string, std::string>> object{{"the", "NP"}, {"cat", "N"}};
        for (int k = 1; k < n; ++k)
            for (auto [w, cat] : {std::pair{"that", "S(rel)"}, {"scratched", "VP"}, {"the", "NP"}, {"cat", "N"}})
                object.emplace_back(w, cat);
        for (const auto& [w, cat] : object) {
            unshifted.push_back({w, test::state(cat + " [X(out)]")});
            shifted.push_back({w, test::state(cat + " [ ]")});
        }
        unshifted.push_back({"out", test::state("X(out) [ ]")});
        gaps.push_back(score_parse(toy, shifted) - score_parse(toy, unshifted));
    }
    for (std::size_t i = 1; i < gaps.size(); ++i) c.require(gaps[i] > gaps[i - 1], "score gap is not increasing");
    std::size_t cross = 0;
    while (cross < gaps.size() && gaps[cross] <= 0) ++cross;
    c.require(cross < gaps.size(), "no crossover up to 12 noun phrases");
    c.require(cross > 0, "shifted analysis wins already at the shortest object");
    if (c.ok) std::printf("      crossover at %zu noun phrases in the object\n", cross + 1);
}

void normalization(Check& c) {
    const auto& m = test::fixture_model();
    auto sums = [&](const Distribution& d, const std::string& what) {
        c.require(std::abs(d.total() - 1.0) <= 1e-9, what + " sums to " + std::to_string(d.total()));
    };
    for (const Lexicon* table : {&m.word, &m.alpha, &m.beta})
        for (const auto& [w, d] : *table) sums(d, w);
    for (const auto& p : m.paradigms) sums(p.distribution, p.id);
    for (const auto& [cls, d] : m.unknown) sums(d, std::string(to_string(cls)));
    for (const auto& [w, _] : m.frequency) sums(blended_distribution(m, w), "blend of " + w);
    c.require(m.penalty.factor(0) == 1.0, "penalty(0) != 1");
    for (std::size_t d = 1; d < 32; ++d)
        c.require(m.penalty.factor(d) <= m.penalty.factor(d - 1) && m.penalty.factor(d) > 0, "penalty not monotone");
}

void evaluation(Check& c) {
    const auto& m = test::fixture_model();
    EvalResult clean = evaluate(m, corpus());
    c.require(clean.totals.correct == corpus().sentences.size(), "fixture is not 100% correct");

    Corpus corrupted = corpus();
    corrupted.sentences[0].tokens[4].state = test::state("N [VP]");
    EvalResult wrong = evaluate(m, corrupted);
    c.require(wrong.totals.wrong == 1 && wrong.totals.correct == corpus().sentences.size() - 1,
              "corrupting one state does not give exactly one WRONG");

    TransitionModel gapped = m;
    gapped.unknown.clear();
    gapped.remove_lexeme("gave");
    EvalResult missing = evaluate(gapped, corpus());
    c.require(missing.totals.no_parse >= 1, "deleting a word's transitions gives no NOPARSE");
}

struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<void(Check&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"dog distribution exactness", 1, dog_mle},
        {"alpha-generalization exactness", 1, dog_alpha},
        {"beta-merge", 1, beta_merge},
        {"oracle equivalence", 10, oracle_equivalence},
        {"round-trip", 1, round_trip},
        {"depth accounting", 1, depth_accounting},
        {"heavy-NP crossover", 5, heavy_np},
        {"normalization suite", 5, normalization},
        {"evaluation protocol", 5, evaluation},
    };
    int failures = 0;
    for (const auto& criterion : criteria) {
        Check check;
        auto start = std::chrono::steady_clock::now();
        try {
            criterion.run(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        check.require(seconds <= criterion.budget_seconds, "took " + std::to_string(seconds) + " s");
        std::printf("%s  %-32s %8.3f s%s%s\n", check.ok ? "PASS" : "FAIL", criterion.name, seconds,
                    check.ok ? "" : "  ", check.why.c_str());
        failures += check.ok ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
