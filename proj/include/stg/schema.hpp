#pragma once

// Matching and instantiation of transition schemas against concrete states.
//
// A from-pattern `X [p1, ..., pk, *]` matches a state whose category unifies
// with X and whose stack starts with p1..pk; `*` (alpha) binds the rest.
// To-patterns come in two forms:
//   push  `Y [d1, ..., dm, *]`  ->  Y [d1..dm, alpha...]
//   pop   `* [d1, ..., dm]`     ->  with alpha = (C, sigma) : rest,
//                                   C [d1..dm, sigma..., rest...]
// A pop on an empty alpha with no introduced material yields Terminal.

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "stg/category.hpp"
#include "stg/notation.hpp"

namespace stg {

class SchemaError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Bindings = std::map<std::string, std::vector<FeatureTerm>>;

namespace detail {

// Unify a pattern term list against a concrete one. A trailing variable
// binds the whole remainder of the concrete list.
inline bool unify_terms(const std::vector<FeatureTerm>& pattern,
                        const std::vector<FeatureTerm>& concrete, Bindings& b);

inline bool unify_term(const FeatureTerm& pattern, const FeatureTerm& concrete, Bindings& b) {
    if (pattern.name != concrete.name) return false;
    return unify_terms(pattern.args, concrete.args, b);
}

inline bool unify_terms(const std::vector<FeatureTerm>& pattern,
                        const std::vector<FeatureTerm>& concrete, Bindings& b) {
    std::size_t fixed = pattern.size();
    const FeatureTerm* var = nullptr;
    if (!pattern.empty() && pattern.back().variable) {
        var = &pattern.back();
        --fixed;
    }
    if (concrete.size() < fixed) return false;
    if (!var && concrete.size() != fixed) return false;
    for (std::size_t i = 0; i < fixed; ++i)
        if (!unify_term(pattern[i], concrete[i], b)) return false;
    if (var) {
        std::vector<FeatureTerm> rest(concrete.begin() + static_cast<std::ptrdiff_t>(fixed),
                                      concrete.end());
        auto [it, fresh] = b.emplace(var->name, rest);
        if (!fresh && it->second != rest) return false;
    }
    return true;
}

inline bool unify_category(const Category& pattern, const Category& concrete, Bindings& b) {
    return pattern.base == concrete.base && unify_terms(pattern.features, concrete.features, b);
}

inline bool unify_entry(const StackEntry& pattern, const StackEntry& concrete, Bindings& b) {
    if (!unify_category(pattern.category, concrete.category, b)) return false;
    if (pattern.nested.size() != concrete.nested.size()) return false;
    for (std::size_t i = 0; i < pattern.nested.size(); ++i)
        if (!unify_entry(pattern.nested[i], concrete.nested[i], b)) return false;
    return true;
}

inline std::vector<FeatureTerm> substitute(const std::vector<FeatureTerm>& terms,
                                           const Bindings& b) {
    std::vector<FeatureTerm> out;
    out.reserve(terms.size());
    for (const auto& t : terms) {
        if (t.variable) {
            auto it = b.find(t.name);
            if (it == b.end()) throw SchemaError("unbound feature variable ?" + t.name);
            out.insert(out.end(), it->second.begin(), it->second.end());
        } else {
            out.push_back(FeatureTerm::atom(t.name, substitute(t.args, b)));
        }
    }
    return out;
}

inline Category substitute(const Category& c, const Bindings& b) {
    return Category(c.base, substitute(c.features, b));
}

inline Stack substitute(const Stack& s, const Bindings& b) {
    Stack out;
    out.reserve(s.size());
    for (const auto& e : s) out.emplace_back(substitute(e.category, b), substitute(e.nested, b));
    return out;
}

inline bool ends_with(const Stack& whole, std::span<const StackEntry> suffix) {
    if (suffix.size() > whole.size()) return false;
    return std::equal(suffix.begin(), suffix.end(), whole.end() - static_cast<std::ptrdiff_t>(suffix.size()));
}

}  // namespace detail

/// Throws SchemaError when a transition cannot be a well-formed schema.
inline void check_schema(const Transition& t) {
    if (t.from.form != StatePattern::Form::Category)
        throw SchemaError("from-side must be a category pattern: " + format(t));
    if (t.to.form == StatePattern::Form::Pop && !t.from.open_tail)
        throw SchemaError("pop form requires a '*' tail on the from-side: " + format(t));
    if (t.to.form == StatePattern::Form::Category && t.from.open_tail != t.to.open_tail)
        throw SchemaError("'*' must appear on both sides of a push schema: " + format(t));
}

/// Applies `schema` to `current`; std::nullopt when it does not apply.
inline std::optional<State> match_and_apply(const Transition& schema, const State& current) {
    check_schema(schema);
    if (current.terminal) return std::nullopt;
    const StatePattern& from = schema.from;
    Bindings b;
    if (!detail::unify_category(from.category, current.category, b)) return std::nullopt;
    const Stack& stack = current.stack;
    if (stack.size() < from.prefix.size()) return std::nullopt;
    if (!from.open_tail && stack.size() != from.prefix.size()) return std::nullopt;
    for (std::size_t i = 0; i < from.prefix.size(); ++i)
        if (!detail::unify_entry(from.prefix[i], stack[i], b)) return std::nullopt;
    std::span<const StackEntry> alpha(stack.begin() + static_cast<std::ptrdiff_t>(from.prefix.size()),
                                      stack.end());

    const StatePattern& to = schema.to;
    switch (to.form) {
    case StatePattern::Form::Terminal:
        if (!alpha.empty()) return std::nullopt;
        return State::end();
    case StatePattern::Form::Category: {
        State next(detail::substitute(to.category, b), detail::substitute(to.prefix, b));
        next.stack.insert(next.stack.end(), alpha.begin(), alpha.end());
        return next;
    }
    case StatePattern::Form::Pop: {
        Stack introduced = detail::substitute(to.prefix, b);
        if (alpha.empty()) {
            if (introduced.empty()) return State::end();
            return std::nullopt;
        }
        const StackEntry& top = alpha.front();
        State next(top.category, std::move(introduced));
        next.stack.insert(next.stack.end(), top.nested.begin(), top.nested.end());
        next.stack.insert(next.stack.end(), alpha.begin() + 1, alpha.end());
        return next;
    }
    }
    return std::nullopt;
}

/// How a concrete state pair fits the formalism.
enum class TransitionShape {
    Push,        ///< from-stack carried intact below new material
    Pop,         ///< top entry becomes the category, its nested stack is unpacked
    Terminal,    ///< empty stack, sentence end
    Unlicensed,  ///< neither; not expressible by an alpha-schema
};

inline TransitionShape classify_transition(const State& from, const State& to) {
    if (from.terminal) return TransitionShape::Unlicensed;
    if (to.terminal)
        return from.stack.empty() ? TransitionShape::Terminal : TransitionShape::Unlicensed;
    if (detail::ends_with(to.stack, from.stack)) return TransitionShape::Push;
    if (!from.stack.empty() && to.category == from.stack.front().category) {
        Stack kept = from.stack.front().nested;
        kept.insert(kept.end(), from.stack.begin() + 1, from.stack.end());
        if (detail::ends_with(to.stack, kept)) return TransitionShape::Pop;
    }
    return TransitionShape::Unlicensed;
}

/// Factors the carried stack material out of a concrete transition:
/// push instances become `X [*] -> Y [d..., *]`, pop instances `X [*] -> * [d...]`.
/// Unlicensed pairs keep their differing prefixes: `X [p..., *] -> Y [q..., *]`.
inline Transition alpha_generalize(const State& from, const State& to) {
    Transition t;
    switch (classify_transition(from, to)) {
    case TransitionShape::Terminal:
        t.from = StatePattern::open(from.category);
        t.to = StatePattern::pop({});
        return t;
    case TransitionShape::Push: {
        auto cut = to.stack.end() - static_cast<std::ptrdiff_t>(from.stack.size());
        t.from = StatePattern::open(from.category);
        t.to = StatePattern::open(to.category, Stack(to.stack.begin(), cut));
        return t;
    }
    case TransitionShape::Pop: {
        std::size_t kept = from.stack.front().nested.size() + from.stack.size() - 1;
        auto cut = to.stack.end() - static_cast<std::ptrdiff_t>(kept);
        t.from = StatePattern::open(from.category);
        t.to = StatePattern::pop(Stack(to.stack.begin(), cut));
        return t;
    }
    case TransitionShape::Unlicensed:
        break;
    }
    std::size_t common = 0;
    if (!to.terminal) {
        while (common < from.stack.size() && common < to.stack.size() &&
               from.stack[from.stack.size() - 1 - common] == to.stack[to.stack.size() - 1 - common])
            ++common;
    }
    auto from_cut = from.stack.end() - static_cast<std::ptrdiff_t>(common);
    t.from = StatePattern::open(from.category, Stack(from.stack.begin(), from_cut));
    if (to.terminal) {
        t.from.open_tail = false;
        t.to = StatePattern::terminal();
    } else {
        auto to_cut = to.stack.end() - static_cast<std::ptrdiff_t>(common);
        t.to = StatePattern::open(to.category, Stack(to.stack.begin(), to_cut));
    }
    return t;
}

/// The conjunct marker `X(+)` for a from-category X.
inline Category coordinated(const Category& c) {
    return Category(c.base, {FeatureTerm::atom("+")});
}

/// Derives the coordination-introducing variant of a schema (X -> Y [X(+)]).
///
/// Push form `X [p..., *] -> Y [d..., *]` becomes `X [p..., *] -> Y [d..., X(+), *]`.
/// Pop form `X [*] -> * [d...]` becomes `X [*] -> * [d..., X(+)]` when the
/// coordinated segment is the single category X. When `discharged` names the
/// popped category C the segment is the list [X, C], packaged as one entry:
/// `X [C, *] -> C [d..., X(+) [C], *]`. Longer segments are rejected.
inline Transition derive_coordination(const Transition& t,
                                      std::span<const Category> discharged = {}) {
    check_schema(t);
    if (!t.from.open_tail || t.to.form == StatePattern::Form::Terminal)
        throw SchemaError("to-pattern binds nothing to '*': " + format(t));
    if (discharged.size() > 1)
        throw SchemaError("coordination of segments longer than two categories is not supported");
    StackEntry conjunct(coordinated(t.from.category));
    Transition out = t;
    if (t.to.form == StatePattern::Form::Category) {
        if (!discharged.empty())
            throw SchemaError("a discharged segment only applies to pop-form schemas: " + format(t));
        out.to.prefix.push_back(conjunct);
        return out;
    }
    if (discharged.empty()) {
        out.to.prefix.push_back(conjunct);
        return out;
    }
    if (!t.from.prefix.empty())
        throw SchemaError("list coordination needs an unprefixed pop schema: " + format(t));
    const Category& popped = discharged.front();
    conjunct.nested.emplace_back(popped);
    out.from = StatePattern::open(t.from.category, {StackEntry(popped)});
    Stack introduced = t.to.prefix;
    introduced.push_back(conjunct);
    out.to = StatePattern::open(popped, std::move(introduced));
    return out;
}

}  // namespace stg
