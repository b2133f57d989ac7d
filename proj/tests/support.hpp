#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stg/stg.hpp"

namespace test {

inline std::string fixture_path(std::string_view name) { return std::string(STG_FIXTURES) + "/" + std::string(name); }

inline std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

inline const stg::Corpus& fixture_corpus() {
    static const stg::Corpus c = stg::load_corpus(read_text(fixture_path("analyses.tb")));
    return c;
}

inline const stg::TransitionModel& fixture_model() {
    static const stg::TransitionModel m = stg::train(fixture_corpus());
    return m;
}

inline const stg::AnnotatedSentence& sentence(std::string_view id) {
    for (const auto& s : fixture_corpus().sentences)
        if (s.id == id) return s;
    throw std::out_of_range("no fixture sentence " + std::string(id));
}

inline std::vector<std::string> words(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

inline stg::Transition schema(std::string_view from, std::string_view to) {
    return {stg::parse_pattern(from), stg::parse_pattern(to)};
}

inline stg::State state(std::string_view text) { return stg::parse_state(text); }

inline std::vector<std::string> path_of(const std::vector<stg::Token>& tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens) out.push_back(stg::format(t.state));
    return out;
}

}  // namespace test
