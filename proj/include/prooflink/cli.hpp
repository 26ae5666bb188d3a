#pragma once

#include "prooflink/filter.hpp"
#include "prooflink/formula.hpp"
#include "prooflink/frame.hpp"
#include "prooflink/io.hpp"
#include "prooflink/kbest.hpp"
#include "prooflink/prover.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace prooflink::cli {

enum ExitCode : int { Proved = 0, NoProof = 1, BadInput = 2, InternalError = 3 };

/// Invalid command-line value or environment setting.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::size_t oracle_bound_from_env() {
    const char* raw = std::getenv("PROOFLINK_ORACLE_BOUND");
    if (!raw || !*raw) return SearchOptions{}.oracle_bound;
    std::string s(raw);
    if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 6)
        throw UsageError("PROOFLINK_ORACLE_BOUND must be a small non-negative integer, got '" + s + "'");
    return static_cast<std::size_t>(std::stoul(s));
}

inline std::vector<std::string> split_words(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    return words;
}

inline void report_parse_error(std::ostream& err, const std::string& text, const ParseError& e) {
    err << "error: " << e.message() << " at position " << e.position() << '\n'
        << "  " << text << '\n'
        << "  " << std::string(std::min(e.position(), text.size()), ' ') << "^\n";
}

struct Common {
    std::string format = "text";
    bool planar = false;
    std::optional<std::size_t> max;
};

inline SearchOptions search_options(const Common& c, std::ostream& err, bool trace) {
    SearchOptions opts;
    opts.planar = c.planar;
    opts.max_solutions = c.max;
    opts.oracle_bound = oracle_bound_from_env();
    if (trace) opts.trace = [&err](const std::string& line) { err << line << '\n'; };
    return opts;
}

inline io::OutputRecord proof_record(const ProofFrame& frame, const std::vector<ProofNet>& nets) {
    io::OutputRecord rec{to_string(frame.sequent), {}, nets.size(), {}};
    for (const auto& n : nets) rec.proofs.push_back(io::solution_record(frame, n.linking, n.weight, true));
    return rec;
}

inline int prove_command(const std::string& text, const Common& c, bool show_matrix, bool trace, bool rank,
                         std::ostream& out, std::ostream& err) {
    Sequent seq = parse_sequent(text);
    auto opts = search_options(c, err, trace);
    auto nets = prove(seq, opts);
    if (rank)
        rank_nets(nets);
    else
        for (auto& n : nets) n.weight = linking_weight(*n.frame, n.linking);

    auto frame = nets.empty() ? std::make_shared<const ProofFrame>(unfold(seq)) : nets.front().frame;
    auto rec = proof_record(*frame, nets);
    if (show_matrix) {
        auto before = candidate_links(*frame);
        rec.matrices["candidates"] = io::render_candidates(*frame, before);
        rec.matrices["pruned"] = io::render_candidates(*frame, prune(*frame, before, required_pairs(*frame)).pruned);
    }

    if (c.format == "json") {
        out << nlohmann::json(rec).dump(2) << '\n';
    } else if (c.format == "dot") {
        if (show_matrix)
            for (const auto& [name, m] : rec.matrices) {
                std::istringstream lines(m);
                out << "// " << name << '\n';
                for (std::string l; std::getline(lines, l);) out << "// " << l << '\n';
            }
        for (std::size_t i = 0; i < nets.size(); ++i) out << io::export_dot(nets[i], "proof" + std::to_string(i + 1));
    } else {
        out << io::render_text(rec, io::Listing::Proofs);
    }
    return nets.empty() ? NoProof : Proved;
}

inline int kbest_command(const std::optional<std::string>& text, std::size_t k, const std::optional<std::string>& cost_file,
                         bool no_prune, const Common& c, std::ostream& out, std::ostream& err) {
    if (k == 0) throw UsageError("-k must be at least 1");
    if (!text && !cost_file) throw UsageError("kbest needs a sequent, a --cost-file, or both");
    auto opts = search_options(c, err, false);

    io::OutputRecord rec;
    io::Listing style = io::Listing::Ranked;
    bool any = false;
    if (text) {
        Sequent seq = parse_sequent(*text);
        auto frame = unfold(seq);
        rec.sequent = to_string(seq);
        if (cost_file) {
            auto cost = io::load_cost_matrix(*cost_file);
            auto shape = cost_matrix(frame, candidate_links(frame));
            if (cost.rows() != shape.rows() || cost.cols() != shape.cols())
                throw UsageError("cost matrix is " + std::to_string(cost.rows()) + "x" + std::to_string(cost.cols()) +
                                 ", sequent needs " + std::to_string(shape.rows()) + "x" +
                                 std::to_string(shape.cols()));
            if (!cost.square()) throw UsageError("cost matrix must be square");
            cost.row_labels() = shape.row_labels();
            cost.col_labels() = shape.col_labels();
            for (const auto& a : murty_kbest(cost, k)) {
                auto l = to_linking(cost, a);
                bool ok = is_complete(frame, l) && accepts(frame, l, opts);
                rec.proofs.push_back(io::solution_record(frame, l, a.weight, ok));
            }
        } else {
            for (const auto& r : kbest_linkings(frame, k, !no_prune, opts))
                rec.proofs.push_back(io::solution_record(frame, r.linking, r.weight, r.valid));
        }
        rec.count = static_cast<std::size_t>(
            std::count_if(rec.proofs.begin(), rec.proofs.end(), [](const auto& p) { return p.valid; }));
        any = rec.count > 0;
    } else {
        auto cost = io::load_cost_matrix(*cost_file);
        if (!cost.square()) throw UsageError("cost matrix must be square");
        style = io::Listing::Unchecked;
        for (const auto& a : murty_kbest(cost, k)) {
            io::SolutionRecord r{{}, a.weight, false};
            for (std::size_t i = 0; i < a.columns.size(); ++i)
                r.linking.emplace_back("r" + std::to_string(i + 1), "c" + std::to_string(a.columns[i] + 1));
            rec.proofs.push_back(std::move(r));
        }
        any = !rec.proofs.empty();
    }

    if (c.format == "json")
        out << nlohmann::json(rec).dump(2) << '\n';
    else
        out << io::render_text(rec, style);
    return any ? Proved : NoProof;
}

inline int parse_command(const std::string& sentence, const std::string& lexicon_path, const std::string& goal_text,
                         const Common& c, std::ostream& out, std::ostream& err) {
    auto lex = io::load_lexicon(lexicon_path);
    Formula goal = parse_formula(goal_text);
    auto opts = search_options(c, err, false);

    std::vector<io::OutputRecord> results;
    std::size_t total = 0;
    for (const auto& seq : io::sentence_sequents(lex, split_words(sentence), goal)) {
        auto nets = prove(seq, opts);
        for (auto& n : nets) n.weight = linking_weight(*n.frame, n.linking);
        auto frame = nets.empty() ? std::make_shared<const ProofFrame>(unfold(seq)) : nets.front().frame;
        results.push_back(proof_record(*frame, nets));
        total += nets.size();
    }

    if (c.format == "json") {
        nlohmann::json j = {{"sentence", sentence}, {"goal", to_string(goal)}, {"results", results}, {"count", total}};
        out << j.dump(2) << '\n';
    } else {
        for (const auto& r : results) out << io::render_text(r, io::Listing::Proofs);
        if (results.size() > 1) out << "total: " << total << (total == 1 ? " proof" : " proofs") << '\n';
    }
    return total ? Proved : NoProof;
}

} // namespace detail

/// Runs the command line `args` (without the program name).
/// Returns 0 when a proof was found, 1 when none exists, 2 on bad input, 3 on an internal error.
[[nodiscard]] inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Proof-net search for the Lambek calculus and MILL", "prooflink"};
    app.require_subcommand(1);

    detail::Common common;
    auto add_common = [&common](CLI::App* sub, bool dot) {
        sub->add_option("--format", common.format, "Output format")
            ->check(dot ? CLI::IsMember({"text", "json", "dot"}) : CLI::IsMember({"text", "json"}));
        sub->add_flag("--planar", common.planar, "Reject crossing axiom links");
        sub->add_option("--max", common.max, "Stop after N proofs")->check(CLI::PositiveNumber);
    };

    std::string text, lexicon, goal;
    bool show_matrix = false, trace = false, rank = false, no_prune = false;
    std::size_t k = 0;
    std::optional<std::string> kbest_text, cost_file;

    auto* prove = app.add_subcommand("prove", "Enumerate proof nets of a sequent");
    prove->add_option("sequent", text, "Sequent, e.g. \"np, np\\s |- s\"")->required();
    prove->add_flag("--show-matrix", show_matrix, "Print the candidate matrix before and after pruning");
    prove->add_flag("--trace", trace, "Log search decisions to stderr");
    prove->add_flag("--rank", rank, "Order proofs by total axiom-link distance");
    add_common(prove, true);

    auto* kbest = app.add_subcommand("kbest", "Rank complete linkings by total distance");
    kbest->add_option("sequent", kbest_text, "Sequent to rank");
    kbest->add_option("-k", k, "Number of linkings")->required()->check(CLI::PositiveNumber);
    kbest->add_option("--cost-file", cost_file, "Explicit cost matrix (integers or inf)");
    kbest->add_flag("--no-prune", no_prune, "Rank all linkings instead of the pruned candidates");
    add_common(kbest, false);

    auto* parse = app.add_subcommand("parse", "Prove a sentence from a lexicon");
    parse->add_option("words", text, "Space-separated words")->required();
    parse->add_option("--lexicon", lexicon, "Lexicon file (word: formula per line)")->required();
    parse->add_option("--goal", goal, "Goal formula")->required();
    add_common(parse, false);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Proved;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return BadInput;
    }

    try {
        if (prove->parsed()) return detail::prove_command(text, common, show_matrix, trace, rank, out, err);
        if (kbest->parsed()) return detail::kbest_command(kbest_text, k, cost_file, no_prune, common, out, err);
        return detail::parse_command(text, lexicon, goal, common, out, err);
    } catch (const ParseError& e) {
        detail::report_parse_error(err, parse->parsed() ? goal : (kbest->parsed() ? kbest_text.value_or("") : text), e);
        return BadInput;
    } catch (const io::InputError& e) {
        err << "error: " << e.what() << '\n';
        return BadInput;
    } catch (const io::UnknownWord& e) {
        err << "error: " << e.what() << '\n';
        return BadInput;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return BadInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return InternalError;
    }
}

} // namespace prooflink::cli
