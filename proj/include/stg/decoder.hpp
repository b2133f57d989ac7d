#pragma once

// Most-probable state paths under the first-order model
//
//   score(S1..Sn) = sum_i [ log P(x_i : S_i -> S_{i+1}) + log penalty(depth(S_{i+1})) ]
//
// with S1 the root state and S_{n+1} Terminal. States are generated lazily
// from the blended schema distributions; the search is a k-best Viterbi
// over a per-position chart pruned to the top `beam_width` states.
// Equal scores are ordered by the formatted state path, lexicographically.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stg/category.hpp"
#include "stg/corpus.hpp"
#include "stg/estimation.hpp"
#include "stg/notation.hpp"
#include "stg/parse.hpp"
#include "stg/schema.hpp"

namespace stg {

struct DecoderConfig {
    std::size_t beam_width = 256;
    std::size_t max_depth = 8;
    std::size_t n_best = 1;
    bool use_penalty = true;
    std::size_t node_budget = 5'000'000;  ///< exhaustive search only

    void validate() const {
        if (beam_width < 1) throw std::invalid_argument("beam width must be at least 1");
        if (max_depth < 1) throw std::invalid_argument("max depth must be at least 1");
        if (n_best < 1) throw std::invalid_argument("n-best must be at least 1");
    }
};

class NoScore : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SearchBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScoredTransition {
    Transition transition;
    double log_prob;
};

/// The support of a word's blended distribution, in log space.
using CompiledWord = std::vector<ScoredTransition>;

inline CompiledWord compile_word(const TransitionModel& model, std::string_view surface) {
    CompiledWord out;
    Distribution d;
    try {
        d = blended_distribution(model, surface);
    } catch (const NoTransitionData&) {
        return out;
    }
    for (const auto& [_, e] : d)
        if (e.weight > 0.0) out.push_back({e.transition, std::log(e.weight)});
    return out;
}

struct Successor {
    State state;
    double log_score;
    std::size_t via;  ///< index into the CompiledWord
};

/// Every state reachable from `state` by one of the word's transitions,
/// scored with the transition and the successor's depth penalty. When
/// several transitions lead to the same state the best one is kept.
inline std::vector<Successor> successors(const TransitionModel& model, const CompiledWord& word,
                                         const State& state, const DecoderConfig& config) {
    std::vector<std::pair<std::string, Successor>> found;
    if (state.terminal) return {};
    for (std::size_t i = 0; i < word.size(); ++i) {
        auto next = match_and_apply(word[i].transition, state);
        if (!next) continue;
        const std::size_t d = depth(*next);
        if (d > config.max_depth) continue;
        double score = word[i].log_prob + (config.use_penalty ? model.penalty.log_factor(d) : 0.0);
        std::string key = format(*next);
        auto it = std::find_if(found.begin(), found.end(), [&](const auto& f) { return f.first == key; });
        if (it == found.end())
            found.emplace_back(std::move(key), Successor{std::move(*next), score, i});
        else if (score > it->second.log_score)
            it->second = Successor{std::move(*next), score, i};
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Successor> out;
    out.reserve(found.size());
    for (auto& f : found) out.push_back(std::move(f.second));
    return out;
}

inline std::vector<Successor> successors(const TransitionModel& model, const State& state,
                                         std::string_view surface, const DecoderConfig& config = {}) {
    return successors(model, compile_word(model, surface), state, config);
}

namespace detail {

// Chart for k-best Viterbi: per position, the states reached and for each
// up to n hypotheses with backpointers.
class Lattice {
public:
    struct Hyp {
        double score;
        std::size_t prev_node;
        std::size_t prev_hyp;
        std::size_t via;
    };
    struct Node {
        State state;
        std::string key;
        std::vector<Hyp> hyps;
    };

    Lattice(const TransitionModel& model, const std::vector<std::string>& sentence, const DecoderConfig& config)
        : model_(model), sentence_(sentence), config_(config), chart_(sentence.size() + 1) {
        for (const auto& w : sentence) words_.push_back(compile_word(model, w));
    }

    std::vector<Parse> run() {
        const std::size_t n = sentence_.size();
        State root(model_.config.root);
        chart_[0].push_back(Node{root, format(root), {Hyp{0.0, 0, 0, 0}}});
        for (std::size_t pos = 0; pos < n; ++pos) {
            std::unordered_map<std::string, std::size_t> index;
            std::vector<Node>& next = chart_[pos + 1];
            const bool last = pos + 1 == n;
            for (std::size_t ni = 0; ni < chart_[pos].size(); ++ni) {
                const Node& node = chart_[pos][ni];
                for (auto& succ : successors(model_, words_[pos], node.state, config_)) {
                    if (last != succ.state.terminal) continue;
                    // each later token can shed at most one entry
                    if (!last && depth(succ.state) > n - pos - 2) continue;
                    std::string key = format(succ.state);
                    auto it = index.find(key);
                    if (it == index.end()) {
                        it = index.emplace(key, next.size()).first;
                        next.push_back(Node{succ.state, std::move(key), {}});
                    }
                    for (std::size_t hi = 0; hi < node.hyps.size(); ++hi)
                        insert(pos + 1, it->second, Hyp{node.hyps[hi].score + succ.log_score, ni, hi, succ.via});
                }
            }
            prune(pos + 1);
            if (next.empty()) return {};
        }
        std::vector<Parse> out;
        for (const Node& final_node : chart_[n])
            for (std::size_t hi = 0; hi < final_node.hyps.size(); ++hi) out.push_back(backtrace(n, 0, hi));
        return out;
    }

private:
    // Path keys from position 0 up to (pos, node, hyp), in order.
    std::vector<const std::string*> path(std::size_t pos, std::size_t node, std::size_t hyp) const {
        std::vector<const std::string*> keys(pos + 1);
        for (std::size_t p = pos + 1; p-- > 0;) {
            const Node& nd = chart_[p][node];
            keys[p] = &nd.key;
            if (p == 0) break;
            const Hyp& h = nd.hyps[hyp];
            node = h.prev_node;
            hyp = h.prev_hyp;
        }
        return keys;
    }

    // Path of a candidate not yet stored: predecessor path plus this node.
    std::vector<const std::string*> candidate_path(std::size_t pos, std::size_t node, const Hyp& h) const {
        auto keys = path(pos - 1, h.prev_node, h.prev_hyp);
        keys.push_back(&chart_[pos][node].key);
        return keys;
    }

    static bool path_less(const std::vector<const std::string*>& a, const std::vector<const std::string*>& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [](const std::string* x, const std::string* y) { return *x < *y; });
    }

    bool better(std::size_t pos, std::size_t node, const Hyp& a, const Hyp& b) const {
        if (a.score != b.score) return a.score > b.score;
        return path_less(candidate_path(pos, node, a), candidate_path(pos, node, b));
    }

    void insert(std::size_t pos, std::size_t node, const Hyp& h) {
        auto& hyps = chart_[pos][node].hyps;
        const std::size_t cap = config_.n_best;
        if (hyps.size() == cap && !better(pos, node, h, hyps.back())) return;
        auto at = hyps.begin();
        while (at != hyps.end() && !better(pos, node, h, *at)) ++at;
        hyps.insert(at, h);
        if (hyps.size() > cap) hyps.pop_back();
    }

    void prune(std::size_t pos) {
        auto& nodes = chart_[pos];
        if (nodes.empty()) return;
        std::vector<std::size_t> order(nodes.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        auto best_less = [&](std::size_t a, std::size_t b) {
            const Hyp& ha = nodes[a].hyps.front();
            const Hyp& hb = nodes[b].hyps.front();
            if (ha.score != hb.score) return ha.score > hb.score;
            return path_less(path(pos, a, 0), path(pos, b, 0));
        };
        std::sort(order.begin(), order.end(), best_less);
        if (order.size() > config_.beam_width) order.resize(config_.beam_width);
        std::vector<Node> kept;
        kept.reserve(order.size());
        for (std::size_t i : order) kept.push_back(std::move(nodes[i]));
        nodes = std::move(kept);
    }

    Parse backtrace(std::size_t pos, std::size_t node, std::size_t hyp) const {
        Parse p;
        p.tokens.resize(pos);
        p.transitions.resize(pos);
        p.log_prob = chart_[pos][node].hyps[hyp].score;
        for (std::size_t at = pos; at > 0; --at) {
            const Hyp& h = chart_[at][node].hyps[hyp];
            p.transitions[at - 1] = words_[at - 1][h.via].transition;
            node = h.prev_node;
            hyp = h.prev_hyp;
            p.tokens[at - 1] = Token{sentence_[at - 1], chart_[at - 1][node].state};
        }
        return p;
    }

    const TransitionModel& model_;
    const std::vector<std::string>& sentence_;
    DecoderConfig config_;
    std::vector<CompiledWord> words_;
    std::vector<std::vector<Node>> chart_;
};

inline std::vector<std::string> state_keys(const Parse& p) {
    std::vector<std::string> keys;
    keys.reserve(p.tokens.size());
    for (const auto& t : p.tokens) keys.push_back(format(t.state));
    return keys;
}

// Best-first order: higher score, then lexicographically smaller path.
inline bool parse_before(const Parse& a, const Parse& b) {
    if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
    return state_keys(a) < state_keys(b);
}

}  // namespace detail

/// Up to config.n_best complete parses in descending score order; empty
/// when no path reaches Terminal.
inline std::vector<Parse> n_best(const TransitionModel& model, const std::vector<std::string>& sentence,
                                 const DecoderConfig& config = {}) {
    config.validate();
    if (sentence.empty()) throw std::invalid_argument("cannot decode an empty sentence");
    detail::Lattice lattice(model, sentence, config);
    auto parses = lattice.run();
    std::sort(parses.begin(), parses.end(), detail::parse_before);
    if (parses.size() > config.n_best) parses.resize(config.n_best);
    return parses;
}

inline std::optional<Parse> viterbi(const TransitionModel& model, const std::vector<std::string>& sentence,
                                    DecoderConfig config = {}) {
    config.n_best = 1;
    auto parses = n_best(model, sentence, config);
    if (parses.empty()) return std::nullopt;
    return std::move(parses.front());
}

namespace detail {

class Enumerator {
public:
    Enumerator(const TransitionModel& model, const std::vector<std::string>& sentence, const DecoderConfig& config)
        : model_(model), sentence_(sentence), config_(config) {
        for (const auto& w : sentence) words_.push_back(compile_word(model, w));
    }

    // Calls `emit` for every complete path.
    template <class Emit>
    void run(Emit&& emit) {
        std::vector<State> states{State(model_.config.root)};
        std::vector<std::size_t> via;
        expand(states, via, 0.0, emit);
    }

    Parse make_parse(const std::vector<State>& states, const std::vector<std::size_t>& via, double score) const {
        Parse p;
        p.log_prob = score;
        for (std::size_t i = 0; i < sentence_.size(); ++i) {
            p.tokens.push_back(Token{sentence_[i], states[i]});
            p.transitions.push_back(words_[i][via[i]].transition);
        }
        return p;
    }

private:
    template <class Emit>
    void expand(std::vector<State>& states, std::vector<std::size_t>& via, double score, Emit& emit) {
        if (++nodes_ > config_.node_budget)
            throw SearchBudgetExceeded("exhaustive search exceeded " + std::to_string(config_.node_budget) + " nodes");
        const std::size_t pos = states.size() - 1;
        const std::size_t n = sentence_.size();
        const bool last = pos + 1 == n;
        for (auto& succ : successors(model_, words_[pos], states.back(), config_)) {
            if (last != succ.state.terminal) continue;
            if (!last && depth(succ.state) > n - pos - 2) continue;
            const double s = score + succ.log_score;
            via.push_back(succ.via);
            if (last) {
                emit(states, via, s);
            } else {
                states.push_back(succ.state);
                expand(states, via, s, emit);
                states.pop_back();
            }
            via.pop_back();
        }
    }

    const TransitionModel& model_;
    const std::vector<std::string>& sentence_;
    DecoderConfig config_;
    std::vector<CompiledWord> words_;
    std::size_t nodes_ = 0;
};

}  // namespace detail

/// Exact best parse by depth-first enumeration of every complete path.
/// Meant for short sentences; throws SearchBudgetExceeded past
/// config.node_budget expanded nodes.
inline std::optional<Parse> exhaustive_oracle(const TransitionModel& model, const std::vector<std::string>& sentence,
                                              const DecoderConfig& config = {}) {
    config.validate();
    if (sentence.empty()) throw std::invalid_argument("cannot decode an empty sentence");
    detail::Enumerator e(model, sentence, config);
    std::optional<Parse> best;
    e.run([&](const std::vector<State>& states, const std::vector<std::size_t>& via, double score) {
        Parse p = e.make_parse(states, via, score);
        if (!best || detail::parse_before(p, *best)) best = std::move(p);
    });
    return best;
}

/// Every complete parse, best first.
inline std::vector<Parse> enumerate_parses(const TransitionModel& model, const std::vector<std::string>& sentence,
                                           const DecoderConfig& config = {}) {
    config.validate();
    if (sentence.empty()) throw std::invalid_argument("cannot decode an empty sentence");
    detail::Enumerator e(model, sentence, config);
    std::vector<Parse> all;
    e.run([&](const std::vector<State>& states, const std::vector<std::size_t>& via, double score) {
        all.push_back(e.make_parse(states, via, score));
    });
    std::sort(all.begin(), all.end(), detail::parse_before);
    return all;
}

/// Log score of a given analysis under the model; NoScore when one of its
/// transitions lies outside the model's support.
inline double score_parse(const TransitionModel& model, const std::vector<Token>& tokens,
                          const DecoderConfig& config = {}) {
    double total = 0.0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const State next = i + 1 < tokens.size() ? tokens[i + 1].state : State::end();
        const CompiledWord word = compile_word(model, tokens[i].surface);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& st : word) {
            auto got = match_and_apply(st.transition, tokens[i].state);
            if (got && *got == next) best = std::max(best, st.log_prob);
        }
        if (!std::isfinite(best))
            throw NoScore("'" + tokens[i].surface + "': " + format(tokens[i].state) + " -> " + format(next) +
                          " is outside the model's support");
        const double step = best + (config.use_penalty ? model.penalty.log_factor(depth(next)) : 0.0);
        total += step;
    }
    return total;
}

inline double score_parse(const TransitionModel& model, const Parse& parse, const DecoderConfig& config = {}) {
    return score_parse(model, parse.tokens, config);
}

/// Vertical rendering of one decoder result: the analysis followed by
/// `# logprob=<value>`, or `# NOPARSE` when there is none.
inline void write_parse(std::ostream& out, const std::optional<Parse>& parse) {
    if (!parse) {
        out << "# NOPARSE\n";
        return;
    }
    write_sentence(out, parse->tokens);
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, parse->log_prob);
    out << "# logprob=" << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf)) << '\n';
}

}  // namespace stg
