#pragma once

// Vertical treebank files: one `surface<TAB>state` line per token, a blank
// line after each sentence, `#` comment lines. `# id: X` names the next
// sentence and `# source: X` records provenance. Terminal is never written.

#include <cctype>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stg/category.hpp"
#include "stg/notation.hpp"
#include "stg/parse.hpp"

namespace stg {

struct AnnotatedSentence {
    std::string id;
    std::vector<Token> tokens;

    bool operator==(const AnnotatedSentence&) const = default;
};

struct Corpus {
    std::vector<AnnotatedSentence> sentences;
    std::string source;

    std::size_t token_count() const {
        std::size_t n = 0;
        for (const auto& s : sentences) n += s.tokens.size();
        return n;
    }
};

struct TransitionEvent {
    std::string lexeme;
    std::string surface;
    State from;
    State to;
};

class CorpusError : public std::runtime_error {
public:
    CorpusError(const std::string& what, std::size_t line, std::size_t column = 0)
        : std::runtime_error(describe(what, line, column)), line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    static std::string describe(const std::string& what, std::size_t line, std::size_t column) {
        std::string s = "line " + std::to_string(line);
        if (column) s += ", column " + std::to_string(column);
        return s + ": " + what;
    }
    std::size_t line_;
    std::size_t column_;
};

struct LoadOptions {
    bool strict = true;
    Category root = Category("S");
};

struct Diagnostic {
    std::size_t line;
    std::string message;
};

/// Lowercases ASCII letters; other bytes (punctuation, UTF-8) are kept.
inline std::string normalize_lexeme(std::string_view surface) {
    std::string out(surface);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline bool comment_field(std::string_view body, std::string_view key, std::string& value) {
    if (body.substr(0, key.size()) != key) return false;
    value = std::string(trim(body.substr(key.size())));
    return true;
}

}  // namespace detail

/// Reads a treebank. Every sentence is validated; in strict mode the first
/// format or validation problem throws CorpusError, otherwise the
/// offending sentence is skipped and reported through `diagnostics`.
inline Corpus load_corpus(std::istream& in, const LoadOptions& options = {},
                          std::vector<Diagnostic>* diagnostics = nullptr) {
    Corpus corpus;
    AnnotatedSentence current;
    std::vector<std::size_t> token_lines;
    std::string pending_id;
    std::size_t ordinal = 0;
    bool broken = false;

    auto report = [&](std::size_t line, const std::string& msg, std::size_t column = 0) {
        if (options.strict) throw CorpusError(msg, line, column);
        if (diagnostics) diagnostics->push_back({line, msg});
    };

    auto finish = [&]() {
        if (current.tokens.empty() && !broken) return;
        ++ordinal;
        if (!broken) {
            auto violations = validate_parse(current.tokens, options.root);
            if (!violations.empty()) {
                const auto& v = violations.front();
                std::size_t line = v.position ? token_lines[v.position - 1] : token_lines.front();
                report(line, "invalid analysis: " + v.message);
            } else {
                if (current.id.empty()) current.id = pending_id.empty() ? std::to_string(ordinal) : pending_id;
                corpus.sentences.push_back(std::move(current));
            }
        }
        current = AnnotatedSentence{};
        token_lines.clear();
        pending_id.clear();
        broken = false;
    };

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string_view line = raw;
        if (detail::trim(line).empty()) {
            finish();
            continue;
        }
        if (detail::trim(line).front() == '#') {
            std::string_view body = detail::trim(detail::trim(line).substr(1));
            std::string value;
            if (detail::comment_field(body, "id:", value)) {
                if (!current.tokens.empty()) finish();
                pending_id = value;
            } else if (detail::comment_field(body, "source:", value)) {
                corpus.source = value;
            }
            continue;
        }
        if (broken) continue;
        auto tab = line.find('\t');
        if (tab == std::string_view::npos) {
            report(line_no, "expected 'surface<TAB>state'", 1);
            broken = true;
            continue;
        }
        std::string_view surface = detail::trim(line.substr(0, tab));
        std::string_view notation = line.substr(tab + 1);
        if (surface.empty()) {
            report(line_no, "empty surface form", 1);
            broken = true;
            continue;
        }
        try {
            State s = parse_state(notation);
            if (s.terminal) throw NotationError("the end state is implicit and must not be written", 0);
            current.tokens.push_back({std::string(surface), std::move(s)});
            token_lines.push_back(line_no);
        } catch (const NotationError& e) {
            report(line_no, e.what(), tab + 2 + e.position());
            broken = true;
        }
    }
    finish();
    return corpus;
}

inline Corpus load_corpus(std::string_view text, const LoadOptions& options = {},
                          std::vector<Diagnostic>* diagnostics = nullptr) {
    std::istringstream in{std::string(text)};
    return load_corpus(in, options, diagnostics);
}

inline void write_sentence(std::ostream& out, const std::vector<Token>& tokens) {
    for (const auto& t : tokens) out << t.surface << '\t' << format(t.state) << '\n';
}

/// Canonical rendering; load_corpus(write_corpus(c)) reproduces c.
inline void write_corpus(std::ostream& out, const Corpus& c) {
    if (!c.source.empty()) out << "# source: " << c.source << '\n';
    out << "# sentences: " << c.sentences.size() << '\n';
    out << "# tokens: " << c.token_count() << '\n';
    for (const auto& s : c.sentences) {
        out << '\n' << "# id: " << s.id << '\n';
        write_sentence(out, s.tokens);
    }
}

inline std::string write_corpus(const Corpus& c) {
    std::ostringstream out;
    write_corpus(out, c);
    return out.str();
}

/// One event per token: the token's lexeme with its state and the next
/// token's state (Terminal after the last token).
inline std::vector<TransitionEvent> extract_events(const Corpus& c) {
    std::vector<TransitionEvent> events;
    events.reserve(c.token_count());
    for (const auto& s : c.sentences) {
        for (std::size_t i = 0; i < s.tokens.size(); ++i) {
            const Token& t = s.tokens[i];
            State next = i + 1 < s.tokens.size() ? s.tokens[i + 1].state : State::end();
            events.push_back({normalize_lexeme(t.surface), t.surface, t.state, std::move(next)});
        }
    }
    return events;
}

}  // namespace stg
