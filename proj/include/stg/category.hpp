#pragma once

// Core value types of the state-transition grammar: feature terms,
// categories, stack entries, concrete states and schema patterns.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace stg {

/// A feature such as `np`, `rel`, `+` or a lexical head `np(dog)`.
/// In schema patterns a term may instead be a variable (`?b`) standing
/// for the remainder of the feature list it appears in.
struct FeatureTerm {
    std::string name;
    std::vector<FeatureTerm> args;
    bool variable = false;

    static FeatureTerm atom(std::string n, std::vector<FeatureTerm> a = {}) {
        return FeatureTerm{std::move(n), std::move(a), false};
    }
    static FeatureTerm var(std::string n) { return FeatureTerm{std::move(n), {}, true}; }

    bool operator==(const FeatureTerm&) const = default;

    bool has_variables() const {
        if (variable) return true;
        for (const auto& a : args)
            if (a.has_variables()) return true;
        return false;
    }
};

struct Category {
    std::string base;
    std::vector<FeatureTerm> features;

    Category() = default;
    explicit Category(std::string b, std::vector<FeatureTerm> f = {})
        : base(std::move(b)), features(std::move(f)) {}

    bool operator==(const Category&) const = default;

    bool has_variables() const {
        for (const auto& f : features)
            if (f.has_variables()) return true;
        return false;
    }

    bool has_feature(const std::string& functor) const {
        for (const auto& f : features)
            if (!f.variable && f.name == functor) return true;
        return false;
    }
};

/// One element of a state's stack. Non-empty `nested` only arises from
/// list coordination, e.g. the `N(+) [NP(t)]` entry.
struct StackEntry {
    Category category;
    std::vector<StackEntry> nested;

    StackEntry() = default;
    StackEntry(Category c, std::vector<StackEntry> n = {})  // NOLINT(google-explicit-constructor)
        : category(std::move(c)), nested(std::move(n)) {}

    bool operator==(const StackEntry&) const = default;

    bool has_variables() const {
        if (category.has_variables()) return true;
        for (const auto& e : nested)
            if (e.has_variables()) return true;
        return false;
    }
};

using Stack = std::vector<StackEntry>;

inline std::size_t depth(const Stack& stack) {
    std::size_t d = 0;
    for (const auto& e : stack) d += 1 + depth(e.nested);
    return d;
}

/// A concrete parser state `A [B, ...]`, or the accepting Terminal state.
struct State {
    bool terminal = false;
    Category category;
    Stack stack;

    State() = default;
    State(Category c, Stack s = {}) : category(std::move(c)), stack(std::move(s)) {}  // NOLINT

    static State end() {
        State s;
        s.terminal = true;
        return s;
    }

    bool operator==(const State&) const = default;

    bool has_variables() const {
        if (terminal) return false;
        if (category.has_variables()) return true;
        for (const auto& e : stack)
            if (e.has_variables()) return true;
        return false;
    }
};

/// Number of stack entries in a state, nested entries included.
inline std::size_t depth(const State& s) { return s.terminal ? 0 : depth(s.stack); }

/// Either side of a transition. `Category` form is `X [prefix..., *]`
/// (the `*` tail present when `open_tail`); `Pop` form is `* [prefix...]`
/// and is only meaningful on the to-side.
struct StatePattern {
    enum class Form { Terminal, Category, Pop };

    Form form = Form::Category;
    Category category;
    Stack prefix;
    bool open_tail = false;

    static StatePattern terminal() {
        StatePattern p;
        p.form = Form::Terminal;
        return p;
    }
    static StatePattern pop(Stack introduced) {
        StatePattern p;
        p.form = Form::Pop;
        p.prefix = std::move(introduced);
        return p;
    }
    static StatePattern open(Category c, Stack prefix = {}) {
        StatePattern p;
        p.category = std::move(c);
        p.prefix = std::move(prefix);
        p.open_tail = true;
        return p;
    }
    static StatePattern exact(const State& s) {
        if (s.terminal) return terminal();
        StatePattern p;
        p.category = s.category;
        p.prefix = s.stack;
        return p;
    }

    bool operator==(const StatePattern&) const = default;

    bool is_concrete() const {
        if (form == Form::Pop || open_tail) return false;
        if (form == Form::Terminal) return true;
        if (category.has_variables()) return false;
        for (const auto& e : prefix)
            if (e.has_variables()) return false;
        return true;
    }

    /// The concrete state this pattern denotes; only valid when is_concrete().
    State as_state() const {
        if (form == Form::Terminal) return State::end();
        return State(category, prefix);
    }
};

struct Transition {
    StatePattern from;
    StatePattern to;

    bool operator==(const Transition&) const = default;

    bool is_concrete() const { return from.is_concrete() && to.is_concrete(); }

    static Transition concrete(const State& from, const State& to) {
        return Transition{StatePattern::exact(from), StatePattern::exact(to)};
    }
};

}  // namespace stg
