#pragma once

// Turning corpus events into a smoothed transition model.
//
// Pipeline: concrete counts per lexeme -> alpha-schemas (carried stack
// factored out) -> beta-schemas (copied features factored out) -> word
// paradigms clustered on beta distributions -> unknown-word class pools
// built from hapax legomena -> state-length penalty from the depth histogram.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stg/category.hpp"
#include "stg/corpus.hpp"
#include "stg/distribution.hpp"
#include "stg/notation.hpp"
#include "stg/schema.hpp"

namespace stg {

/// lexeme -> transition weights (counts or probabilities, per context)
using Lexicon = std::map<std::string, TransitionTable>;

// ---------------------------------------------------------------- counting

inline Lexicon count_events(const std::vector<TransitionEvent>& events) {
    Lexicon out;
    for (const auto& e : events) out[e.lexeme].add(Transition::concrete(e.from, e.to), 1.0);
    return out;
}

inline Lexicon normalize(const Lexicon& counts) {
    Lexicon out;
    for (const auto& [w, t] : counts) out.emplace(w, t.normalized());
    return out;
}

/// P(t | w) = count(w, t) / count(w).
inline Lexicon estimate_mle(const std::vector<TransitionEvent>& events) {
    return normalize(count_events(events));
}

/// Rewrites every concrete transition to its alpha-schema and pools the
/// weights per lexeme. Mass is conserved, so counts stay counts and
/// distributions stay normalized.
inline Lexicon generalize_alpha(const Lexicon& word) {
    Lexicon out;
    for (const auto& [w, table] : word) {
        TransitionTable& pooled = out[w];
        for (const auto& [_, e] : table) {
            const Transition& t = e.transition;
            if (!t.is_concrete()) {
                pooled.add(t, e.weight);
                continue;
            }
            pooled.add(alpha_generalize(t.from.as_state(), t.to.as_state()), e.weight);
        }
    }
    return out;
}

namespace detail {

// All to-side category slots: the to-category (push form) and every stack
// entry category, nested ones included.
inline void collect_slots(Stack& stack, std::vector<Category*>& slots) {
    for (auto& e : stack) {
        slots.push_back(&e.category);
        collect_slots(e.nested, slots);
    }
}

inline std::vector<Category*> to_slots(Transition& t) {
    std::vector<Category*> slots;
    if (t.to.form == StatePattern::Form::Category) slots.push_back(&t.to.category);
    if (t.to.form != StatePattern::Form::Terminal) collect_slots(t.to.prefix, slots);
    return slots;
}

inline bool transition_has_variables(const Transition& t) {
    if (t.from.category.has_variables() || t.to.category.has_variables()) return true;
    for (const auto& e : t.from.prefix)
        if (e.has_variables()) return true;
    for (const auto& e : t.to.prefix)
        if (e.has_variables()) return true;
    return false;
}

// Every way of abstracting the from-category's feature list together with
// one to-side slot carrying an identical feature list.
inline std::vector<Transition> beta_candidates(const Transition& t) {
    std::vector<Transition> out;
    if (t.from.form != StatePattern::Form::Category || transition_has_variables(t)) return out;
    const auto& features = t.from.category.features;
    Transition probe = t;
    const std::size_t n = to_slots(probe).size();
    for (std::size_t i = 0; i < n; ++i) {
        Transition cand = t;
        auto slots = to_slots(cand);
        if (slots[i]->features != features) continue;
        slots[i]->features = {FeatureTerm::var("b")};
        cand.from.category.features = {FeatureTerm::var("b")};
        out.push_back(std::move(cand));
    }
    return out;
}

}  // namespace detail

/// Merges alpha-schemas of a lexeme that differ only in a feature list
/// copied intact from the from-category to one to-side slot, replacing the
/// copied value by a variable: S [*] -> N [VP, *] and S(np) [*] -> N [VP(np), *]
/// become S(?b) [*] -> N [VP(?b), *]. A merge needs at least two schemas;
/// weights are pooled.
inline Lexicon generalize_beta(const Lexicon& alpha) {
    Lexicon out;
    for (const auto& [w, table] : alpha) {
        struct Group {
            Transition merged;
            std::set<std::string> covers;
        };
        std::map<std::string, Group> groups;
        for (const auto& [key, e] : table)
            for (auto& cand : detail::beta_candidates(e.transition)) {
                auto& g = groups[format(cand)];
                g.merged = cand;
                g.covers.insert(key);
            }

        std::set<std::string> assigned;
        TransitionTable& pooled = out[w];
        for (;;) {
            const Group* best = nullptr;
            std::size_t best_cover = 1;
            std::string best_key;
            for (const auto& [gkey, g] : groups) {
                std::size_t cover = 0;
                for (const auto& k : g.covers) cover += assigned.count(k) ? 0 : 1;
                if (cover > best_cover) {
                    best = &g;
                    best_cover = cover;
                    best_key = gkey;
                }
            }
            if (!best) break;
            for (const auto& k : best->covers) {
                if (assigned.count(k)) continue;
                assigned.insert(k);
                pooled.add(best->merged, table.entries().at(k).weight);
            }
        }
        for (const auto& [key, e] : table)
            if (!assigned.count(key)) pooled.add(e.transition, e.weight);
    }
    return out;
}

// ---------------------------------------------------------------- paradigms

struct Paradigm {
    std::string id;
    std::vector<std::string> members;  // sorted
    CountTable counts;                 // pooled member counts
    bool open_class = false;           // contains a hapax
};

/// Greedy agglomerative clustering on Jensen-Shannon divergence between
/// pooled beta distributions; the closest pair merges while its divergence
/// is at most `tau`. Expects counts, so pooling is count-weighted.
inline std::vector<Paradigm> build_paradigms(const Lexicon& beta_counts, double tau) {
    if (tau < 0.0) throw std::invalid_argument("paradigm threshold must be non-negative");
    struct Cluster {
        std::vector<std::string> members;
        CountTable counts;
        Distribution dist;
    };
    std::vector<Cluster> clusters;
    for (const auto& [w, t] : beta_counts) {
        if (t.empty()) continue;
        clusters.push_back({{w}, t, t.normalized()});
    }
    for (;;) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        double best_js = 0.0;
        for (std::size_t i = 0; i < clusters.size(); ++i)
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                double js = jensen_shannon(clusters[i].dist, clusters[j].dist);
                if (js > tau) continue;
                if (!best || js < best_js) {
                    best = {i, j};
                    best_js = js;
                }
            }
        if (!best) break;
        auto [i, j] = *best;
        Cluster& a = clusters[i];
        Cluster& b = clusters[j];
        a.members.insert(a.members.end(), b.members.begin(), b.members.end());
        std::sort(a.members.begin(), a.members.end());
        a.counts.merge(b.counts);
        a.dist = a.counts.normalized();
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& x, const Cluster& y) { return x.members.front() < y.members.front(); });
    std::vector<Paradigm> out;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        Paradigm p{"P" + std::to_string(i), clusters[i].members, clusters[i].counts, false};
        for (const auto& m : p.members)
            if (beta_counts.at(m).total() == 1.0) p.open_class = true;
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------- unknown words

enum class OrthoClass {
    Capitalized,
    AllCaps,
    Numeric,
    ContainsDigit,
    Hyphenated,
    SuffixInflected,
    Other,
};

inline constexpr std::array<OrthoClass, 7> kOrthoClasses = {
    OrthoClass::Capitalized, OrthoClass::AllCaps,         OrthoClass::Numeric, OrthoClass::ContainsDigit,
    OrthoClass::Hyphenated,  OrthoClass::SuffixInflected, OrthoClass::Other};

inline std::string_view to_string(OrthoClass c) {
    switch (c) {
    case OrthoClass::Capitalized: return "CAPITALIZED";
    case OrthoClass::AllCaps: return "ALL_CAPS";
    case OrthoClass::Numeric: return "NUMERIC";
    case OrthoClass::ContainsDigit: return "CONTAINS_DIGIT";
    case OrthoClass::Hyphenated: return "HYPHENATED";
    case OrthoClass::SuffixInflected: return "SUFFIX_INFLECTED";
    case OrthoClass::Other: return "OTHER";
    }
    return "OTHER";
}

inline std::optional<OrthoClass> ortho_class_from_string(std::string_view s) {
    for (auto c : kOrthoClasses)
        if (to_string(c) == s) return c;
    return std::nullopt;
}

/// First matching class in declaration order wins.
inline OrthoClass classify_unknown(std::string_view surface) {
    auto is_upper = [](char c) { return c >= 'A' && c <= 'Z'; };
    auto is_lower = [](char c) { return c >= 'a' && c <= 'z'; };
    auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    bool any_lower = false, any_upper = false, any_digit = false, digits_only = !surface.empty();
    for (char c : surface) {
        any_lower |= is_lower(c);
        any_upper |= is_upper(c);
        any_digit |= is_digit(c);
        if (!is_digit(c) && c != '.' && c != ',') digits_only = false;
    }
    if (!surface.empty() && is_upper(surface.front()) && any_lower) return OrthoClass::Capitalized;
    if (any_upper && !any_lower) return OrthoClass::AllCaps;
    if (digits_only && any_digit) return OrthoClass::Numeric;
    if (any_digit) return OrthoClass::ContainsDigit;
    if (surface.find('-') != std::string_view::npos) return OrthoClass::Hyphenated;
    std::string lower = normalize_lexeme(surface);
    for (std::string_view suffix : {"ing", "ed", "ly", "s"}) {
        if (lower.size() > suffix.size() + 1 &&
            std::string_view(lower).substr(lower.size() - suffix.size()) == suffix)
            return OrthoClass::SuffixInflected;
    }
    return OrthoClass::Other;
}

/// Per orthographic class: the pooled beta counts of the corpus hapaxes in
/// that class; classes without hapaxes get the mixture of all open-class
/// paradigms. Classes with no data at all are absent from the result.
inline std::map<OrthoClass, Distribution> estimate_unknown_classes(const Corpus& corpus,
                                                                   const Lexicon& beta_counts,
                                                                   const std::vector<Paradigm>& paradigms) {
    std::map<std::string, std::string> surface_of;
    for (const auto& s : corpus.sentences)
        for (const auto& t : s.tokens) surface_of.emplace(normalize_lexeme(t.surface), t.surface);

    std::set<std::string> open_members;
    CountTable global;
    for (const auto& p : paradigms) {
        if (!p.open_class) continue;
        global.merge(p.counts);
        open_members.insert(p.members.begin(), p.members.end());
    }

    std::map<OrthoClass, CountTable> pools;
    for (const auto& [w, counts] : beta_counts) {
        if (counts.total() != 1.0 || !open_members.count(w)) continue;
        auto it = surface_of.find(w);
        pools[classify_unknown(it == surface_of.end() ? w : it->second)].merge(counts);
    }
    std::map<OrthoClass, Distribution> out;
    for (auto c : kOrthoClasses) {
        auto it = pools.find(c);
        const CountTable& source = it != pools.end() ? it->second : global;
        if (!source.empty()) out.emplace(c, source.normalized());
    }
    return out;
}

// ---------------------------------------------------------------- length penalty

/// Multiplicative penalty by state depth; 1 at depth 0, non-increasing.
class LengthPenalty {
public:
    LengthPenalty() : table_{1.0}, tail_ratio_(1.0) {}
    LengthPenalty(std::vector<double> table, double tail_ratio)
        : table_(std::move(table)), tail_ratio_(tail_ratio) {
        if (table_.empty() || table_.front() != 1.0)
            throw std::invalid_argument("penalty table must start with factor 1 at depth 0");
        for (std::size_t d = 0; d < table_.size(); ++d) {
            if (!(table_[d] > 0.0 && table_[d] <= 1.0))
                throw std::invalid_argument("penalty factors must lie in (0, 1]");
            if (d && table_[d] > table_[d - 1]) throw std::invalid_argument("penalty must be non-increasing");
        }
        if (!(tail_ratio_ > 0.0 && tail_ratio_ <= 1.0))
            throw std::invalid_argument("penalty tail ratio must lie in (0, 1]");
    }

    double factor(std::size_t d) const {
        if (d < table_.size()) return table_[d];
        return table_.back() * std::pow(tail_ratio_, static_cast<double>(d - table_.size() + 1));
    }
    double log_factor(std::size_t d) const { return std::log(factor(d)); }

    const std::vector<double>& table() const { return table_; }
    double tail_ratio() const { return tail_ratio_; }

    bool operator==(const LengthPenalty&) const = default;

private:
    std::vector<double> table_;
    double tail_ratio_;
};

/// Add-one smoothed depth histogram over all token states, up to the
/// deepest observed state plus `slack`; factor(d) = f(d) / f(0), clamped
/// to be non-increasing. Beyond the table the factor decays geometrically
/// with the ratio between the deepest observed depth and the one before.
inline LengthPenalty estimate_length_penalty(const Corpus& corpus, std::size_t slack = 2) {
    std::vector<double> counts;
    for (const auto& s : corpus.sentences)
        for (const auto& t : s.tokens) {
            std::size_t d = depth(t.state);
            if (counts.size() <= d) counts.resize(d + 1, 0.0);
            counts[d] += 1.0;
        }
    if (counts.empty()) throw std::invalid_argument("length penalty needs a non-empty corpus");
    const std::size_t max_observed = counts.size() - 1;
    counts.resize(max_observed + slack + 1, 0.0);
    std::vector<double> table(counts.size());
    const double base = counts[0] + 1.0;
    for (std::size_t d = 0; d < counts.size(); ++d) {
        table[d] = std::min(1.0, (counts[d] + 1.0) / base);
        if (d) table[d] = std::min(table[d], table[d - 1]);
    }
    table[0] = 1.0;
    const std::size_t ref = std::max<std::size_t>(max_observed, 1);
    double ratio = table[ref] / table[ref - 1];
    return LengthPenalty(std::move(table), ratio);
}

// ---------------------------------------------------------------- model

struct BlendWeights {
    double word = 0.4;
    double alpha = 0.2;
    double beta = 0.2;
    double paradigm = 0.2;

    bool operator==(const BlendWeights&) const = default;
};

struct EstimationConfig {
    BlendWeights weights;
    double k = 1.0;     ///< count constant damping the word-level weight
    double tau = 0.25;  ///< paradigm merge threshold (JS divergence, bits)
    Category root = Category("S");
    std::size_t penalty_slack = 2;

    void validate() const {
        const BlendWeights& w = weights;
        for (double x : {w.word, w.alpha, w.beta, w.paradigm})
            if (!(x >= 0.0)) throw std::invalid_argument("blend weights must be non-negative");
        if (std::abs(w.word + w.alpha + w.beta + w.paradigm - 1.0) > 1e-9)
            throw std::invalid_argument("blend weights must sum to 1");
        if (!(k >= 0.0)) throw std::invalid_argument("k must be non-negative");
        if (!(tau >= 0.0)) throw std::invalid_argument("tau must be non-negative");
    }
};

struct ParadigmDistribution {
    std::string id;
    std::vector<std::string> members;
    Distribution distribution;
};

class NoTransitionData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TransitionModel {
    Lexicon word;   ///< concrete MLE distributions
    Lexicon alpha;  ///< alpha-schema distributions
    Lexicon beta;   ///< alpha+beta-schema distributions
    std::map<std::string, std::size_t> frequency;
    std::vector<ParadigmDistribution> paradigms;
    std::map<std::string, std::size_t> paradigm_of;  ///< lexeme -> index into paradigms
    std::map<OrthoClass, Distribution> unknown;
    LengthPenalty penalty;
    EstimationConfig config;

    bool knows(const std::string& lexeme) const { return frequency.count(lexeme) != 0; }

    /// Forgets everything recorded for one word; it is then treated as unknown.
    void remove_lexeme(const std::string& lexeme) {
        word.erase(lexeme);
        alpha.erase(lexeme);
        beta.erase(lexeme);
        frequency.erase(lexeme);
        paradigm_of.erase(lexeme);
        for (auto& p : paradigms) std::erase(p.members, lexeme);
    }
};

inline TransitionModel train(const Corpus& corpus, const EstimationConfig& config = {}) {
    config.validate();
    TransitionModel m;
    m.config = config;
    auto events = extract_events(corpus);
    Lexicon word_counts = count_events(events);
    Lexicon alpha_counts = generalize_alpha(word_counts);
    Lexicon beta_counts = generalize_beta(alpha_counts);
    auto paradigms = build_paradigms(beta_counts, config.tau);

    m.word = normalize(word_counts);
    m.alpha = normalize(alpha_counts);
    m.beta = normalize(beta_counts);
    for (const auto& [w, t] : word_counts) m.frequency[w] = static_cast<std::size_t>(t.total());
    for (std::size_t i = 0; i < paradigms.size(); ++i) {
        m.paradigms.push_back({paradigms[i].id, paradigms[i].members, paradigms[i].counts.normalized()});
        for (const auto& w : paradigms[i].members) m.paradigm_of[w] = i;
    }
    m.unknown = estimate_unknown_classes(corpus, beta_counts, paradigms);
    if (!corpus.sentences.empty()) m.penalty = estimate_length_penalty(corpus, config.penalty_slack);
    return m;
}

/// Effective per-table weights for a lexeme seen `count` times: the word
/// weight is scaled by c / (c + k) and the freed mass is shared among the
/// other tables in proportion to their weights.
inline BlendWeights effective_weights(const BlendWeights& w, double count, double k) {
    BlendWeights out = w;
    const double others = w.alpha + w.beta + w.paradigm;
    if (others <= 0.0 || count + k <= 0.0) return out;
    out.word = w.word * count / (count + k);
    const double freed = w.word - out.word;
    out.alpha = w.alpha + freed * w.alpha / others;
    out.beta = w.beta + freed * w.beta / others;
    out.paradigm = w.paradigm + freed * w.paradigm / others;
    return out;
}

/// The smoothed distribution used for decoding a surface form: a blend of
/// the word's own tables and its paradigm for known words, the class pool
/// for unknown ones.
inline Distribution blended_distribution(const TransitionModel& m, std::string_view surface) {
    const std::string lexeme = normalize_lexeme(surface);
    if (!m.knows(lexeme)) {
        auto it = m.unknown.find(classify_unknown(surface));
        if (it == m.unknown.end() || it->second.empty())
            throw NoTransitionData("no transition data for unknown word '" + std::string(surface) + "'");
        return it->second;
    }
    const BlendWeights w =
        effective_weights(m.config.weights, static_cast<double>(m.frequency.at(lexeme)), m.config.k);
    Distribution out;
    auto blend = [&](const Lexicon& table, double weight) {
        if (weight <= 0.0) return;
        auto it = table.find(lexeme);
        if (it != table.end()) out.merge(it->second, weight);
    };
    blend(m.word, w.word);
    blend(m.alpha, w.alpha);
    blend(m.beta, w.beta);
    if (w.paradigm > 0.0) {
        auto p = m.paradigm_of.find(lexeme);
        if (p != m.paradigm_of.end()) out.merge(m.paradigms[p->second].distribution, w.paradigm);
    }
    return out;
}

}  // namespace stg
