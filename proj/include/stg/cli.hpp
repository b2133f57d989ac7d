#pragma once

// Command-line front end:
//
//   stg train   --corpus FILE --out FILE [estimation flags]
//   stg parse   --model FILE [--input FILE] [--out FILE] [decoder flags]
//   stg eval    --model FILE --corpus FILE [--out FILE] [--machine] [decoder flags]
//   stg inspect --model FILE --word WORD
//
// Exit status: 0 on success (including sentences without a parse), 1 for
// usage errors, 2 for unreadable or malformed data.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stg/corpus.hpp"
#include "stg/decoder.hpp"
#include "stg/estimation.hpp"
#include "stg/evaluation.hpp"
#include "stg/model_io.hpp"
#include "stg/notation.hpp"

namespace stg::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string corpus;
    std::string model;
    std::string input;
    std::string out;
    std::string word;
    std::string lambda;
    std::string root;
    double k = 1.0;
    double tau = 0.25;
    bool strict = true;
    bool no_penalty = false;
    bool machine = false;
    unsigned threads = 1;
    DecoderConfig decoder;
};

inline BlendWeights parse_lambda(const std::string& text) {
    auto parts = detail::split(text, ',');
    if (parts.size() != 4) throw UsageError("--lambda expects four comma-separated weights");
    double v[4];
    for (std::size_t i = 0; i < 4; ++i)
        if (!detail::parse_number(detail::trim(parts[i]), v[i]))
            throw UsageError("--lambda: bad number '" + std::string(parts[i]) + "'");
    return {v[0], v[1], v[2], v[3]};
}

inline EstimationConfig estimation_config(const Options& o) {
    EstimationConfig c;
    if (!o.lambda.empty()) c.weights = parse_lambda(o.lambda);
    c.k = o.k;
    c.tau = o.tau;
    if (!o.root.empty()) {
        try {
            c.root = parse_category(o.root);
        } catch (const NotationError& e) {
            throw UsageError(std::string("--root: ") + e.what());
        }
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return c;
}

inline DecoderConfig decoder_config(const Options& o) {
    DecoderConfig c = o.decoder;
    c.use_penalty = !o.no_penalty;
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return c;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

// Writes to `path`, or to `fallback` when the path is empty or "-".
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw DataError("cannot write '" + path + "'");
        stream_ = file_.get();
    }
    std::ostream& operator*() { return *stream_; }
    void close() {
        stream_->flush();
        if (file_) {
            file_->close();
            if (file_->fail()) throw DataError("write failed");
        }
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

inline Corpus read_corpus(const Options& o, const Category& root, std::ostream& err) {
    LoadOptions lo;
    lo.strict = o.strict;
    lo.root = root;
    std::vector<Diagnostic> diagnostics;
    Corpus c;
    try {
        c = load_corpus(read_file(o.corpus), lo, &diagnostics);
    } catch (const CorpusError& e) {
        throw DataError(o.corpus + ": " + e.what());
    }
    for (const auto& d : diagnostics)
        err << o.corpus << ": line " << d.line << ": skipped sentence: " << d.message << '\n';
    return c;
}

inline TransitionModel read_model(const std::string& path) {
    try {
        return load_model(read_file(path));
    } catch (const ModelFormatError& e) {
        throw DataError(path + ": " + e.what());
    }
}

inline std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    return words;
}

inline int do_train(const Options& o, std::ostream& out, std::ostream& err) {
    EstimationConfig config = estimation_config(o);
    Corpus c = read_corpus(o, config.root, err);
    TransitionModel m = train(c, config);
    Output dest(o.out, out);
    write_model(*dest, m);
    dest.close();
    return kOk;
}

inline int do_parse(const Options& o, std::istream& in, std::ostream& out) {
    DecoderConfig config = decoder_config(o);
    TransitionModel m = read_model(o.model);
    std::string text;
    if (o.input.empty() || o.input == "-") {
        std::ostringstream s;
        s << in.rdbuf();
        text = s.str();
    } else {
        text = read_file(o.input);
    }
    std::vector<std::vector<std::string>> sentences;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
        auto words = tokenize(line);
        if (!words.empty()) sentences.push_back(std::move(words));
    }
    std::vector<std::vector<Parse>> results(sentences.size());
    parallel_for(sentences.size(), o.threads, [&](std::size_t i) { results[i] = n_best(m, sentences[i], config); });

    Output dest(o.out, out);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (i) *dest << '\n';
        *dest << "# id: " << i + 1 << '\n';
        if (results[i].empty()) write_parse(*dest, std::nullopt);
        for (std::size_t r = 0; r < results[i].size(); ++r) {
            if (config.n_best > 1) *dest << "# rank: " << r + 1 << '\n';
            write_parse(*dest, results[i][r]);
        }
    }
    dest.close();
    return kOk;
}

inline int do_eval(const Options& o, std::ostream& out, std::ostream& err) {
    DecoderConfig config = decoder_config(o);
    TransitionModel m = read_model(o.model);
    Category root = m.config.root;
    if (!o.root.empty()) root = estimation_config(o).root;
    Corpus test = read_corpus(o, root, err);
    EvalResult r = evaluate(m, test, config, o.threads);
    Output dest(o.out, out);
    if (o.machine)
        write_verdicts(*dest, r);
    else
        write_report(*dest, r);
    dest.close();
    return kOk;
}

inline int do_inspect(const Options& o, std::ostream& out) {
    TransitionModel m = read_model(o.model);
    const std::string lexeme = normalize_lexeme(o.word);
    Distribution d;
    try {
        d = blended_distribution(m, o.word);
    } catch (const NoTransitionData& e) {
        throw DataError(e.what());
    }
    out << "# word: " << o.word << '\n';
    if (m.knows(lexeme)) {
        const auto count = m.frequency.at(lexeme);
        const BlendWeights w = effective_weights(m.config.weights, static_cast<double>(count), m.config.k);
        out << "# count: " << count << '\n';
        auto p = m.paradigm_of.find(lexeme);
        if (p != m.paradigm_of.end()) out << "# paradigm: " << m.paradigms[p->second].id << '\n';
        out << "# weights: word=" << detail::format_number(w.word) << " alpha=" << detail::format_number(w.alpha)
            << " beta=" << detail::format_number(w.beta) << " paradigm=" << detail::format_number(w.paradigm)
            << '\n';
    } else {
        out << "# unknown word, class " << to_string(classify_unknown(o.word)) << '\n';
    }
    std::vector<const Distribution::Entry*> rows;
    for (const auto& [_, e] : d) rows.push_back(&e);
    std::stable_sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->weight > b->weight; });
    for (const auto* e : rows)
        out << detail::format_number(e->weight) << '\t' << format(e->transition) << '\n';
    return kOk;
}

inline void add_estimation_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--lambda", o.lambda, "blend weights word,alpha,beta,paradigm (sum 1)");
    cmd->add_option("--k", o.k, "count constant for the word-level weight")->check(CLI::NonNegativeNumber);
    cmd->add_option("--tau", o.tau, "paradigm merge threshold in bits")->check(CLI::NonNegativeNumber);
}

inline void add_decoder_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--beam", o.decoder.beam_width, "states kept per position")->check(CLI::PositiveNumber);
    cmd->add_option("--max-depth", o.decoder.max_depth, "deepest state considered")->check(CLI::PositiveNumber);
    cmd->add_option("--n-best", o.decoder.n_best, "parses per sentence")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-penalty", o.no_penalty, "ignore the state-length penalty");
    cmd->add_option("--threads", o.threads, "sentences decoded in parallel")->check(CLI::PositiveNumber);
}

inline void add_strictness_flags(CLI::App* cmd, Options& o) {
    auto* strict = cmd->add_flag("--strict", o.strict, "abort on the first invalid sentence (default)");
    auto* lenient = cmd->add_flag("--lenient{false}", o.strict, "skip invalid sentences and report them");
    strict->excludes(lenient);
}

inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"State-transition grammar parser", "stg"};
    app.require_subcommand(1);
    Options o;

    auto* train_cmd = app.add_subcommand("train", "estimate a model from an annotated corpus");
    train_cmd->add_option("--corpus", o.corpus, "annotated treebank")->required();
    train_cmd->add_option("--out", o.out, "model file to write ('-' for standard output)")->required();
    train_cmd->add_option("--root", o.root, "root category");
    add_estimation_flags(train_cmd, o);
    add_strictness_flags(train_cmd, o);

    auto* parse_cmd = app.add_subcommand("parse", "decode raw sentences, one per line");
    parse_cmd->add_option("--model", o.model, "model file")->required();
    parse_cmd->add_option("--input", o.input, "sentences (default standard input)");
    parse_cmd->add_option("--out", o.out, "output file (default standard output)");
    add_decoder_flags(parse_cmd, o);

    auto* eval_cmd = app.add_subcommand("eval", "score the decoder against an annotated corpus");
    eval_cmd->add_option("--model", o.model, "model file")->required();
    eval_cmd->add_option("--corpus", o.corpus, "annotated test treebank")->required();
    eval_cmd->add_option("--out", o.out, "report file (default standard output)");
    eval_cmd->add_option("--root", o.root, "root category for validating the test corpus");
    eval_cmd->add_flag("--machine", o.machine, "print id<TAB>verdict lines only");
    add_decoder_flags(eval_cmd, o);
    add_strictness_flags(eval_cmd, o);

    auto* inspect_cmd = app.add_subcommand("inspect", "print a word's blended distribution");
    inspect_cmd->add_option("--model", o.model, "model file")->required();
    inspect_cmd->add_option("--word", o.word, "word to look up")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "stg: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (train_cmd->parsed()) return do_train(o, out, err);
        if (parse_cmd->parsed()) return do_parse(o, in, out);
        if (eval_cmd->parsed()) return do_eval(o, out, err);
        return do_inspect(o, out);
    } catch (const UsageError& e) {
        err << "stg: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "stg: " << e.what() << '\n';
        return kData;
    }
}

}  // namespace stg::cli
