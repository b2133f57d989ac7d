#pragma once

// Text notation for states and patterns.
//
//   state    := category '[' entries? ']' | '<end>'
//   entries  := entry (',' entry)*
//   entry    := category ('[' entries? ']')?
//   category := IDENT ('(' feat (',' feat)* ')')?
//   feat     := IDENT ('(' feat (',' feat)* ')')? | '?' IDENT
//
// In patterns `*` may close the top-level entry list (the carried tail),
// and a pop-form to-side is written `* [entries]`. The canonical writer
// emits one space before '[' and ", " between entries; "[ ]" when empty.

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>

#include "stg/category.hpp"

namespace stg {

class NotationError : public std::runtime_error {
public:
    NotationError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at column " + std::to_string(position + 1)),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// ---------------------------------------------------------------- writer

namespace detail {

inline void append_terms(std::string& out, const std::vector<FeatureTerm>& terms);

inline void append_term(std::string& out, const FeatureTerm& t) {
    if (t.variable) {
        out += '?';
        out += t.name;
        return;
    }
    out += t.name;
    if (!t.args.empty()) append_terms(out, t.args);
}

inline void append_terms(std::string& out, const std::vector<FeatureTerm>& terms) {
    out += '(';
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out += ',';
        append_term(out, terms[i]);
    }
    out += ')';
}

inline void append_category(std::string& out, const Category& c) {
    out += c.base;
    if (!c.features.empty()) append_terms(out, c.features);
}

inline void append_entries(std::string& out, const Stack& entries, bool tail);

inline void append_entry(std::string& out, const StackEntry& e) {
    append_category(out, e.category);
    if (!e.nested.empty()) {
        out += ' ';
        append_entries(out, e.nested, false);
    }
}

inline void append_entries(std::string& out, const Stack& entries, bool tail) {
    if (entries.empty() && !tail) {
        out += "[ ]";
        return;
    }
    out += '[';
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) out += ", ";
        append_entry(out, entries[i]);
    }
    if (tail) {
        if (!entries.empty()) out += ", ";
        out += '*';
    }
    out += ']';
}

}  // namespace detail

inline std::string format(const Category& c) {
    std::string out;
    detail::append_category(out, c);
    return out;
}

inline std::string format(const StackEntry& e) {
    std::string out;
    detail::append_entry(out, e);
    return out;
}

inline std::string format(const State& s) {
    if (s.terminal) return "<end>";
    std::string out;
    detail::append_category(out, s.category);
    out += ' ';
    detail::append_entries(out, s.stack, false);
    return out;
}

inline std::string format(const StatePattern& p) {
    std::string out;
    switch (p.form) {
    case StatePattern::Form::Terminal:
        return "<end>";
    case StatePattern::Form::Pop:
        out += "* ";
        detail::append_entries(out, p.prefix, false);
        return out;
    case StatePattern::Form::Category:
        detail::append_category(out, p.category);
        out += ' ';
        detail::append_entries(out, p.prefix, p.open_tail);
        return out;
    }
    return out;
}

inline std::string format(const Transition& t) { return format(t.from) + " -> " + format(t.to); }

// ---------------------------------------------------------------- reader

namespace detail {

inline bool ident_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '+' || c == '-' || c == '_' || c == '\'' || c == '.' ||
           c == '$' || c == '&' || c == '%' || u >= 0x80;
}

class NotationReader {
public:
    NotationReader(std::string_view text, bool allow_patterns)
        : text_(text), patterns_(allow_patterns) {}

    StatePattern read_pattern() {
        skip_ws();
        if (at_end()) fail("empty state notation");
        StatePattern p;
        if (text_.substr(pos_, 5) == "<end>") {
            pos_ += 5;
            p = StatePattern::terminal();
        } else if (peek() == '*') {
            if (!patterns_) fail("'*' is only allowed in schema patterns");
            ++pos_;
            skip_ws();
            p.form = StatePattern::Form::Pop;
            p.prefix = read_entries(false, nullptr);
        } else {
            p.category = read_category();
            skip_ws();
            p.prefix = read_entries(true, &p.open_tail);
        }
        skip_ws();
        if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw NotationError(msg, pos_); }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c) {
            if (at_end()) fail(std::string("expected '") + c + "' but input ended");
            fail(std::string("expected '") + c + "' but found '" + peek() + "'");
        }
        ++pos_;
    }

    std::string read_ident() {
        std::size_t start = pos_;
        while (!at_end() && ident_char(text_[pos_])) ++pos_;
        if (pos_ == start) {
            if (at_end()) fail("expected identifier but input ended");
            fail(std::string("expected identifier but found '") + peek() + "'");
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    std::vector<FeatureTerm> read_terms() {
        std::vector<FeatureTerm> terms;
        expect('(');
        std::unordered_set<std::string> functors;
        for (;;) {
            skip_ws();
            std::size_t at = pos_;
            FeatureTerm t;
            if (peek() == '?') {
                if (!patterns_) fail("feature variable in a concrete state");
                ++pos_;
                t = FeatureTerm::var(read_ident());
            } else {
                t.name = read_ident();
                skip_ws();
                if (peek() == '(') t.args = read_terms();
                if (!functors.insert(t.name).second) {
                    pos_ = at;
                    fail("duplicate feature '" + t.name + "'");
                }
            }
            if (!terms.empty() && terms.back().variable) {
                pos_ = at;
                fail("a feature variable must be the last feature of its list");
            }
            terms.push_back(std::move(t));
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            expect(')');
            return terms;
        }
    }

    Category read_category() {
        skip_ws();
        Category c;
        c.base = read_ident();
        skip_ws();
        if (peek() == '(') c.features = read_terms();
        return c;
    }

    StackEntry read_entry() {
        StackEntry e;
        e.category = read_category();
        skip_ws();
        if (peek() == '[') e.nested = read_entries(false, nullptr);
        return e;
    }

    // `tail` receives whether a trailing `*` closed the list (top level only).
    Stack read_entries(bool top_level, bool* tail) {
        Stack entries;
        expect('[');
        skip_ws();
        if (peek() == ']') {
            ++pos_;
            return entries;
        }
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                if (!patterns_) fail("'*' is only allowed in schema patterns");
                if (!top_level || tail == nullptr) fail("'*' is not allowed here");
                ++pos_;
                *tail = true;
                expect(']');
                return entries;
            }
            entries.push_back(read_entry());
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            expect(']');
            return entries;
        }
    }

    std::string_view text_;
    bool patterns_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a schema pattern side (may contain `*`, `?x`, pop form).
inline StatePattern parse_pattern(std::string_view text) {
    return detail::NotationReader(text, true).read_pattern();
}

/// Parses a concrete state; rejects variables and `*`.
inline State parse_state(std::string_view text) {
    return detail::NotationReader(text, false).read_pattern().as_state();
}

inline Category parse_category(std::string_view text) {
    State s = parse_state(std::string(text) + " [ ]");
    if (s.terminal) throw NotationError("expected a category", 0);
    return s.category;
}

}  // namespace stg
