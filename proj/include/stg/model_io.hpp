#pragma once

// Model files: UTF-8 text in sections.
//
//   [config]    key<TAB>value          (lambda, k, tau, root, penalty_slack, penalty_tail)
//   [lexeme]    lexeme<TAB>count<TAB>paradigm-id
//   [word] [alpha] [beta]
//               lexeme<TAB>from<TAB>to<TAB>probability
//   [paradigm]  paradigm-id<TAB>from<TAB>to<TAB>probability
//   [unknown]   CLASS<TAB>from<TAB>to<TAB>probability
//   [penalty]   depth<TAB>factor
//
// Numbers are written in shortest round-trip form, so a reloaded model
// reproduces every probability exactly.

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "stg/estimation.hpp"
#include "stg/notation.hpp"

namespace stg {

class ModelFormatError : public std::runtime_error {
public:
    ModelFormatError(const std::string& what, std::size_t line)
        : std::runtime_error("model line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::string format_number(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline bool parse_number(std::string_view s, double& out) {
    auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

inline void write_table(std::ostream& out, const std::string& label, const Distribution& d) {
    for (const auto& [_, e] : d)
        out << label << '\t' << format(e.transition.from) << '\t' << format(e.transition.to) << '\t'
            << format_number(e.weight) << '\n';
}

}  // namespace detail

inline void write_model(std::ostream& out, const TransitionModel& m) {
    const auto& c = m.config;
    out << "# stg transition model\n";
    out << "[config]\n";
    out << "lambda\t" << detail::format_number(c.weights.word) << ',' << detail::format_number(c.weights.alpha)
        << ',' << detail::format_number(c.weights.beta) << ',' << detail::format_number(c.weights.paradigm)
        << '\n';
    out << "k\t" << detail::format_number(c.k) << '\n';
    out << "tau\t" << detail::format_number(c.tau) << '\n';
    out << "root\t" << format(c.root) << '\n';
    out << "penalty_slack\t" << c.penalty_slack << '\n';
    out << "penalty_tail\t" << detail::format_number(m.penalty.tail_ratio()) << '\n';

    out << "[lexeme]\n";
    for (const auto& [w, n] : m.frequency) {
        out << w << '\t' << n << '\t';
        auto p = m.paradigm_of.find(w);
        out << (p == m.paradigm_of.end() ? std::string("-") : m.paradigms[p->second].id) << '\n';
    }
    auto lexicon = [&](const char* name, const Lexicon& table) {
        out << '[' << name << "]\n";
        for (const auto& [w, d] : table) detail::write_table(out, w, d);
    };
    lexicon("word", m.word);
    lexicon("alpha", m.alpha);
    lexicon("beta", m.beta);
    out << "[paradigm]\n";
    for (const auto& p : m.paradigms) detail::write_table(out, p.id, p.distribution);
    out << "[unknown]\n";
    for (const auto& [cls, d] : m.unknown) detail::write_table(out, std::string(to_string(cls)), d);
    out << "[penalty]\n";
    for (std::size_t d = 0; d < m.penalty.table().size(); ++d)
        out << d << '\t' << detail::format_number(m.penalty.table()[d]) << '\n';
}

inline std::string write_model(const TransitionModel& m) {
    std::ostringstream out;
    write_model(out, m);
    return out.str();
}

inline TransitionModel load_model(std::istream& in) {
    TransitionModel m;
    std::string section;
    std::string raw;
    std::size_t line_no = 0;
    std::vector<double> penalty;
    double tail = 1.0;
    std::map<std::string, std::string> paradigm_id_of;
    std::map<std::string, std::size_t> paradigm_index;

    auto fail = [&](const std::string& msg) -> void { throw ModelFormatError(msg, line_no); };
    auto number = [&](std::string_view s) {
        double x = 0;
        if (!detail::parse_number(s, x)) fail("bad number '" + std::string(s) + "'");
        return x;
    };
    auto paradigm = [&](const std::string& id) -> ParadigmDistribution& {
        auto it = paradigm_index.find(id);
        if (it == paradigm_index.end()) {
            it = paradigm_index.emplace(id, m.paradigms.size()).first;
            m.paradigms.push_back({id, {}, {}});
        }
        return m.paradigms[it->second];
    };

    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty() || raw.front() == '#') continue;
        if (raw.front() == '[') {
            if (raw.back() != ']') fail("malformed section header");
            section = raw.substr(1, raw.size() - 2);
            continue;
        }
        auto f = detail::split(raw, '\t');
        try {
            if (section == "config") {
                if (f.size() != 2) fail("expected key<TAB>value");
                std::string_view key = f[0], value = f[1];
                if (key == "lambda") {
                    auto parts = detail::split(value, ',');
                    if (parts.size() != 4) fail("lambda needs four weights");
                    m.config.weights = {number(parts[0]), number(parts[1]), number(parts[2]), number(parts[3])};
                } else if (key == "k") {
                    m.config.k = number(value);
                } else if (key == "tau") {
                    m.config.tau = number(value);
                } else if (key == "root") {
                    m.config.root = parse_category(value);
                } else if (key == "penalty_slack") {
                    m.config.penalty_slack = static_cast<std::size_t>(number(value));
                } else if (key == "penalty_tail") {
                    tail = number(value);
                } else {
                    fail("unknown config key '" + std::string(key) + "'");
                }
            } else if (section == "lexeme") {
                if (f.size() != 3) fail("expected lexeme<TAB>count<TAB>paradigm");
                std::string w(f[0]);
                m.frequency[w] = static_cast<std::size_t>(number(f[1]));
                if (f[2] != "-") paradigm_id_of[w] = std::string(f[2]);
            } else if (section == "word" || section == "alpha" || section == "beta" || section == "paradigm" ||
                       section == "unknown") {
                if (f.size() != 4) fail("expected label<TAB>from<TAB>to<TAB>probability");
                Transition t{parse_pattern(f[1]), parse_pattern(f[2])};
                double p = number(f[3]);
                std::string label(f[0]);
                if (section == "word")
                    m.word[label].add(t, p);
                else if (section == "alpha")
                    m.alpha[label].add(t, p);
                else if (section == "beta")
                    m.beta[label].add(t, p);
                else if (section == "paradigm")
                    paradigm(label).distribution.add(t, p);
                else {
                    auto cls = ortho_class_from_string(label);
                    if (!cls) fail("unknown orthographic class '" + label + "'");
                    m.unknown[*cls].add(t, p);
                }
            } else if (section == "penalty") {
                if (f.size() != 2) fail("expected depth<TAB>factor");
                if (static_cast<std::size_t>(number(f[0])) != penalty.size()) fail("penalty depths must be consecutive");
                penalty.push_back(number(f[1]));
            } else {
                fail("record outside a known section");
            }
        } catch (const NotationError& e) {
            fail(e.what());
        }
    }
    for (const auto& [w, id] : paradigm_id_of) {
        auto& p = paradigm(id);
        p.members.push_back(w);
        m.paradigm_of[w] = paradigm_index.at(id);
    }
    try {
        m.config.validate();
        if (!penalty.empty()) m.penalty = LengthPenalty(std::move(penalty), tail);
    } catch (const std::invalid_argument& e) {
        throw ModelFormatError(e.what(), line_no);
    }
    return m;
}

inline TransitionModel load_model(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load_model(in);
}

}  // namespace stg
