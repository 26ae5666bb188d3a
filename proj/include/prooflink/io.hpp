#pragma once

#include "prooflink/filter.hpp"
#include "prooflink/formula.hpp"
#include "prooflink/frame.hpp"
#include "prooflink/kbest.hpp"
#include "prooflink/prover.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace prooflink::io {

/// Malformed input file; `line` is 1-based, 0 when unknown.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& message, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

namespace detail {
inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}
inline std::string strip_comment(const std::string& line) { return line.substr(0, line.find('#')); }

inline std::ifstream open(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return in;
}
} // namespace detail

// ---------------------------------------------------------------------------
// Lexicon

using Lexicon = std::map<std::string, std::vector<Formula>>;

/// `word: formula` per line; `#` starts a comment; repeated words add alternatives.
[[nodiscard]] inline Lexicon parse_lexicon(std::istream& in) {
    Lexicon lex;
    std::string raw;
    for (std::size_t lineno = 1; std::getline(in, raw); ++lineno) {
        auto line = detail::trim(detail::strip_comment(raw));
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos) throw InputError("expected 'word: formula'", lineno);
        auto word = detail::trim(line.substr(0, colon));
        if (word.empty() || word.find_first_of(" \t") != std::string::npos)
            throw InputError("bad word '" + word + "'", lineno);
        try {
            lex[word].push_back(parse_formula(line.substr(colon + 1)));
        } catch (const ParseError& e) {
            throw InputError(e.what(), lineno);
        }
    }
    return lex;
}

[[nodiscard]] inline Lexicon load_lexicon(const std::string& path) {
    auto in = detail::open(path);
    return parse_lexicon(in);
}

class UnknownWord : public std::invalid_argument {
public:
    explicit UnknownWord(const std::string& word)
        : std::invalid_argument("word '" + word + "' is not in the lexicon"), word_(word) {}
    [[nodiscard]] const std::string& word() const noexcept { return word_; }

private:
    std::string word_;
};

/// One sequent per combination of lexical assignments, in lexicon order.
[[nodiscard]] inline std::vector<Sequent> sentence_sequents(const Lexicon& lex, const std::vector<std::string>& words,
                                                            const Formula& goal) {
    std::vector<const std::vector<Formula>*> choices;
    for (const auto& w : words) {
        auto it = lex.find(w);
        if (it == lex.end() || it->second.empty()) throw UnknownWord(w);
        choices.push_back(&it->second);
    }
    std::vector<Sequent> out;
    std::vector<std::size_t> pick(words.size(), 0);
    for (;;) {
        Sequent s{{}, goal};
        for (std::size_t i = 0; i < words.size(); ++i) s.antecedent.push_back((*choices[i])[pick[i]]);
        out.push_back(std::move(s));
        std::size_t i = words.size();
        while (i > 0 && ++pick[i - 1] == choices[i - 1]->size()) pick[--i] = 0;
        if (i == 0) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cost files

/// Whitespace-separated rows of non-negative integers or `inf`; `#` comments.
[[nodiscard]] inline CostMatrix parse_cost_matrix(std::istream& in) {
    std::vector<std::vector<Weight>> rows;
    std::string raw;
    for (std::size_t lineno = 1; std::getline(in, raw); ++lineno) {
        std::istringstream cells(detail::strip_comment(raw));
        std::vector<Weight> row;
        for (std::string tok; cells >> tok;) {
            if (tok == "inf" || tok == "∞") {
                row.push_back(Weight::infinity());
                continue;
            }
            std::size_t used = 0;
            long long v = -1;
            try {
                v = std::stoll(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size() || v < 0) throw InputError("bad cost '" + tok + "'", lineno);
            row.push_back(Weight(v));
        }
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size()) throw InputError("ragged cost matrix", lineno);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError("empty cost matrix");
    CostMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
    return m;
}

[[nodiscard]] inline CostMatrix load_cost_matrix(const std::string& path) {
    auto in = detail::open(path);
    return parse_cost_matrix(in);
}

// ---------------------------------------------------------------------------
// Output records

struct SolutionRecord {
    std::vector<std::pair<std::string, std::string>> linking;  ///< (negative tag, positive tag)
    std::optional<std::int64_t> weight;
    bool valid = false;

    friend bool operator==(const SolutionRecord&, const SolutionRecord&) = default;
};

struct OutputRecord {
    std::string sequent;
    std::vector<SolutionRecord> proofs;
    std::size_t count = 0;  ///< entries with valid == true
    std::map<std::string, std::string> matrices;  ///< optional rendered matrices by name

    friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

[[nodiscard]] inline SolutionRecord solution_record(const ProofFrame& frame, const Linking& linking,
                                                    std::optional<std::int64_t> weight, bool valid) {
    SolutionRecord r{{}, weight, valid};
    for (const auto& l : linking) r.linking.emplace_back(frame.tag(l.negative), frame.tag(l.positive));
    return r;
}

inline void to_json(nlohmann::json& j, const SolutionRecord& r) {
    auto pairs = nlohmann::json::array();
    for (const auto& [n, p] : r.linking) pairs.push_back({n, p});
    j = {{"linking", pairs}, {"weight", r.weight ? nlohmann::json(*r.weight) : nlohmann::json(nullptr)},
         {"valid", r.valid}};
}

inline void from_json(const nlohmann::json& j, SolutionRecord& r) {
    r.linking.clear();
    for (const auto& pair : j.at("linking"))
        r.linking.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
    const auto& w = j.at("weight");
    r.weight = w.is_null() ? std::nullopt : std::optional<std::int64_t>(w.get<std::int64_t>());
    r.valid = j.at("valid").get<bool>();
}

inline void to_json(nlohmann::json& j, const OutputRecord& r) {
    j = {{"sequent", r.sequent}, {"proofs", r.proofs}, {"count", r.count}};
    if (!r.matrices.empty()) j["matrices"] = r.matrices;
}

inline void from_json(const nlohmann::json& j, OutputRecord& r) {
    r.sequent = j.at("sequent").get<std::string>();
    r.proofs = j.at("proofs").get<std::vector<SolutionRecord>>();
    r.count = j.at("count").get<std::size_t>();
    r.matrices.clear();
    if (j.contains("matrices")) r.matrices = j.at("matrices").get<std::map<std::string, std::string>>();
}

[[nodiscard]] inline std::string render_linking(const SolutionRecord& r) {
    std::string s;
    for (const auto& [n, p] : r.linking) s += (s.empty() ? "" : " ") + n + "-" + p;
    return s;
}

enum class Listing { Proofs, Ranked, Unchecked };

/// Human-readable listing. `Ranked` prints weights and validity flags;
/// `Unchecked` prints weights for linkings that have no frame to check against.
[[nodiscard]] inline std::string render_text(const OutputRecord& r, Listing style) {
    std::ostringstream os;
    if (!r.sequent.empty()) os << "sequent: " << r.sequent << '\n';
    for (const auto& [name, text] : r.matrices) os << name << ":\n" << text;
    for (std::size_t i = 0; i < r.proofs.size(); ++i) {
        const auto& p = r.proofs[i];
        if (style == Listing::Proofs) {
            os << "proof " << i + 1 << ": " << render_linking(p);
            if (p.weight) os << "  (weight " << *p.weight << ')';
        } else {
            os << i + 1 << ". weight " << (p.weight ? std::to_string(*p.weight) : "-") << "  " << render_linking(p);
            if (style == Listing::Ranked) os << (p.valid ? "  valid" : "  invalid");
        }
        os << '\n';
    }
    if (style == Listing::Unchecked)
        os << r.proofs.size() << " ranked " << (r.proofs.size() == 1 ? "linking" : "linkings") << '\n';
    else
        os << r.count << (r.count == 1 ? " proof" : " proofs") << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Matrix rendering

/// One table per atom name; rows are negative occurrences, columns positive ones.
/// `x` marks an open candidate, `*` a committed link, `.` a removed cell.
[[nodiscard]] inline std::string render_candidates(const ProofFrame& frame, const CandidateMatrix& cands) {
    std::ostringstream os;
    for (const auto& blk : cands.blocks()) {
        std::size_t width = 1;
        for (Vertex v : blk.negatives) width = std::max(width, frame.tag(v).size());
        for (Vertex v : blk.positives) width = std::max(width, frame.tag(v).size());
        auto pad = [&](const std::string& s) { return s + std::string(width - s.size() + 1, ' '); };
        os << pad("");
        for (Vertex p : blk.positives) os << pad(frame.tag(p));
        os << '\n';
        for (std::size_t i = 0; i < blk.negatives.size(); ++i) {
            os << pad(frame.tag(blk.negatives[i]));
            for (std::size_t j = 0; j < blk.positives.size(); ++j) {
                Cell c = blk.at(i, j);
                os << pad(c == Cell::Open ? "x" : c == Cell::Committed ? "*" : ".");
            }
            os << '\n';
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// DOT export

namespace detail {
inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '\\' || c == '"') out += '\\';
        out += c;
    }
    return out;
}
} // namespace detail

/// Essential net of `net` as a Graphviz digraph.
[[nodiscard]] inline std::string export_dot(const ProofNet& net, const std::string& name = "proof") {
    const auto& f = *net.frame;
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (Vertex v = 1; v <= f.vertex_count(); ++v) {
        os << "  v" << v << " [label=\"" << detail::dot_escape(to_string(f.vertex(v).formula)) << " " << v << "\"";
        if (v == f.output) os << ", shape=doublecircle";
        os << "];\n";
    }
    for (const auto& e : f.ess_edges) os << "  v" << e.from << " -> v" << e.to << ";\n";
    for (const auto& l : net.linking) os << "  v" << l.negative << " -> v" << l.positive << " [style=dashed];\n";
    os << "}\n";
    return os.str();
}

} // namespace prooflink::io
