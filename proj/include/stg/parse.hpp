#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stg/category.hpp"
#include "stg/notation.hpp"
#include "stg/schema.hpp"

namespace stg {

/// A word together with the state it is labelled with.
struct Token {
    std::string surface;
    State state;

    bool operator==(const Token&) const = default;
};

/// A complete analysis: each token's state; the implicit state after the
/// last token is Terminal. `transitions`, when non-empty, records for each
/// token the schema or concrete transition that licensed its move.
struct Parse {
    std::vector<Token> tokens;
    std::vector<Transition> transitions;
    double log_prob = 0.0;
};

struct Violation {
    std::size_t position;  ///< 1-based token index
    std::string message;
};

namespace detail {

inline std::vector<Violation> check_column(const std::vector<Token>& tokens, const Category& root) {
    std::vector<Violation> out;
    if (tokens.empty()) {
        out.push_back({0, "analysis has no tokens"});
        return out;
    }
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const State& s = tokens[i].state;
        if (s.terminal) out.push_back({i + 1, "token labelled with the end state"});
        if (s.has_variables()) out.push_back({i + 1, "variable in concrete state " + format(s)});
    }
    const State& first = tokens.front().state;
    if (first.terminal || first.category != root || !first.stack.empty())
        out.push_back({1, "analysis must start at " + format(State(root)) + ", found " + format(first)});
    return out;
}

}  // namespace detail

/// Checks that a state column forms a licensed chain from the root to
/// Terminal. Without recorded transitions each step must be a push or pop
/// instance and the last state must have an empty stack.
inline std::vector<Violation> validate_parse(const std::vector<Token>& tokens,
                                             const Category& root = Category("S")) {
    std::vector<Violation> out = detail::check_column(tokens, root);
    if (tokens.empty()) return out;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        const State& from = tokens[i].state;
        const State& to = tokens[i + 1].state;
        if (from.terminal || to.terminal) continue;
        if (classify_transition(from, to) == TransitionShape::Unlicensed)
            out.push_back({i + 1, "'" + tokens[i].surface + "': " + format(from) + " -> " +
                                      format(to) + " is neither a push nor a pop"});
    }
    const State& last = tokens.back().state;
    if (!last.terminal && !last.stack.empty())
        out.push_back({tokens.size(), "does not reach the end state: " + format(last) +
                                          " still has stack material"});
    return out;
}

/// As above, but when the parse records its transitions every one of them
/// must map its token's state onto the next token's state (Terminal after
/// the last token).
inline std::vector<Violation> validate_parse(const Parse& p, const Category& root = Category("S")) {
    if (p.transitions.empty()) return validate_parse(p.tokens, root);
    std::vector<Violation> out = detail::check_column(p.tokens, root);
    if (p.tokens.empty()) return out;
    if (p.transitions.size() != p.tokens.size()) {
        out.push_back({0, "expected one recorded transition per token"});
        return out;
    }
    for (std::size_t i = 0; i < p.tokens.size(); ++i) {
        const bool last = i + 1 == p.tokens.size();
        const State expected = last ? State::end() : p.tokens[i + 1].state;
        const Transition& t = p.transitions[i];
        std::optional<State> got;
        try {
            got = match_and_apply(t, p.tokens[i].state);
        } catch (const SchemaError& e) {
            out.push_back({i + 1, e.what()});
            continue;
        }
        if (got && *got == expected) continue;
        std::string msg = "'" + p.tokens[i].surface + "': " + format(t);
        if (!got)
            msg += " does not apply to " + format(p.tokens[i].state);
        else if (last)
            msg += " does not reach the end state (gives " + format(*got) + ")";
        else
            msg += " gives " + format(*got) + ", not " + format(expected);
        out.push_back({i + 1, msg});
    }
    return out;
}

}  // namespace stg
