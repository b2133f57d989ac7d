#pragma once

// Three-way scoring of decoder output against a gold treebank: a sentence
// is CORRECT when the predicted state path equals the gold one, NOPARSE
// when no path was found, WRONG otherwise.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdio>
#include <exception>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "stg/corpus.hpp"
#include "stg/decoder.hpp"
#include "stg/estimation.hpp"
#include "stg/notation.hpp"
#include "stg/parse.hpp"

namespace stg {

enum class Verdict { Correct, Wrong, NoParse };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Correct: return "CORRECT";
        case Verdict::Wrong: return "WRONG";
        case Verdict::NoParse: return "NOPARSE";
    }
    return "?";
}

struct SentenceResult {
    std::string id;
    Verdict verdict = Verdict::NoParse;
    std::vector<Token> gold;
    std::optional<Parse> predicted;
    std::optional<std::size_t> first_divergence;  ///< 1-based token, WRONG only
};

struct EvalTotals {
    std::size_t correct = 0;
    std::size_t wrong = 0;
    std::size_t no_parse = 0;

    std::size_t total() const { return correct + wrong + no_parse; }
    bool operator==(const EvalTotals&) const = default;
};

struct EvalResult {
    std::vector<SentenceResult> sentences;
    EvalTotals totals;
};

/// Runs f(0) .. f(n-1) on up to `threads` workers. Each index is handled
/// exactly once, so writing to slot i of a presized vector is safe.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                f(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.surface);
    return out;
}

inline SentenceResult evaluate_sentence(const TransitionModel& model, const AnnotatedSentence& gold,
                                        const DecoderConfig& config = {}) {
    SentenceResult r;
    r.id = gold.id;
    r.gold = gold.tokens;
    try {
        r.predicted = viterbi(model, surfaces(gold.tokens), config);
    } catch (const std::exception&) {
        r.predicted.reset();
    }
    if (!r.predicted) {
        r.verdict = Verdict::NoParse;
        return r;
    }
    const auto& pred = r.predicted->tokens;
    for (std::size_t i = 0; i < gold.tokens.size(); ++i) {
        if (i >= pred.size() || !(pred[i].state == gold.tokens[i].state)) {
            r.first_divergence = i + 1;
            break;
        }
    }
    r.verdict = r.first_divergence ? Verdict::Wrong : Verdict::Correct;
    return r;
}

inline EvalResult evaluate(const TransitionModel& model, const Corpus& test, const DecoderConfig& config = {},
                           unsigned threads = 1) {
    config.validate();
    EvalResult out;
    out.sentences.resize(test.sentences.size());
    parallel_for(test.sentences.size(), threads,
                 [&](std::size_t i) { out.sentences[i] = evaluate_sentence(model, test.sentences[i], config); });
    for (const auto& s : out.sentences) {
        switch (s.verdict) {
            case Verdict::Correct: ++out.totals.correct; break;
            case Verdict::Wrong: ++out.totals.wrong; break;
            case Verdict::NoParse: ++out.totals.no_parse; break;
        }
    }
    return out;
}

/// "27%" for whole percentages, otherwise one decimal ("33.3%").
inline std::string format_percent(std::size_t part, std::size_t whole) {
    if (whole == 0) return "0%";
    const double pct = 100.0 * static_cast<double>(part) / static_cast<double>(whole);
    char buf[32];
    if (part * 100 % whole == 0)
        std::snprintf(buf, sizeof buf, "%zu%%", part * 100 / whole);
    else
        std::snprintf(buf, sizeof buf, "%.1f%%", pct);
    return buf;
}

inline void write_report(std::ostream& out, const EvalResult& r) {
    const EvalTotals& t = r.totals;
    const std::size_t n = t.total();
    out << "sentences: " << n << '\n';
    out << "correct:   " << t.correct << " (" << format_percent(t.correct, n) << ")\n";
    out << "wrong:     " << t.wrong << " (" << format_percent(t.wrong, n) << ")\n";
    out << "no parse:  " << t.no_parse << " (" << format_percent(t.no_parse, n) << ")\n";
    if (r.sentences.empty()) return;
    out << '\n';
    for (const auto& s : r.sentences) {
        out << s.id << '\t' << to_string(s.verdict);
        if (s.verdict == Verdict::Wrong && s.first_divergence) {
            const std::size_t i = *s.first_divergence - 1;
            out << "\tdiverges at token " << *s.first_divergence << " '" << s.gold[i].surface << "': gold "
                << format(s.gold[i].state) << ", predicted "
                << (i < s.predicted->tokens.size() ? format(s.predicted->tokens[i].state) : std::string("<end>"));
        }
        out << '\n';
    }
}

inline std::string write_report(const EvalResult& r) {
    std::ostringstream out;
    write_report(out, r);
    return out.str();
}

inline void write_verdicts(std::ostream& out, const EvalResult& r) {
    for (const auto& s : r.sentences) out << s.id << '\t' << to_string(s.verdict) << '\n';
}

}  // namespace stg
