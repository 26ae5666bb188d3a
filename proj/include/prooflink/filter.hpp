#pragma once

#include "prooflink/closure.hpp"
#include "prooflink/frame.hpp"

#include <algorithm>
#include <optional>
#include <tuple>
#include <vector>

namespace prooflink {

enum class RequirementOrigin { InputToOutput, NegProdBranch, PosParPremiss };

/// A path source -> target that every proof net over the frame must contain.
struct RequiredPair {
    Vertex source = 0;
    Vertex target = 0;
    RequirementOrigin origin = RequirementOrigin::InputToOutput;

    friend bool operator==(const RequiredPair&, const RequiredPair&) = default;
};

[[nodiscard]] inline std::vector<RequiredPair> required_pairs(const ProofFrame& frame) {
    std::vector<RequiredPair> out;
    for (Vertex in : frame.inputs) out.push_back({in, frame.output, RequirementOrigin::InputToOutput});
    for (const auto& link : frame.links) {
        if (link.kind != LinkKind::Par) continue;
        if (link.polarity == Polarity::Negative) {
            out.push_back({link.left, frame.output, RequirementOrigin::NegProdBranch});
            out.push_back({link.right, frame.output, RequirementOrigin::NegProdBranch});
        } else {
            Vertex premiss = link.connective == Connective::Over ? link.right : link.left;
            out.push_back({premiss, link.conclusion, RequirementOrigin::PosParPremiss});
            if (link.conclusion != frame.output)
                out.push_back({link.conclusion, frame.output, RequirementOrigin::InputToOutput});
        }
    }
    return out;
}

struct PruneResult {
    CandidateMatrix pruned;
    std::vector<AxiomLink> forced;  ///< open cells alone in their row or column
    bool failed = false;
};

/// Removes every candidate n -> p with a path p -> n in `closure`. The closure
/// must cover structural edges and committed links only.
[[nodiscard]] inline CandidateMatrix prune_cycles(const CandidateMatrix& cands, const BoolMatrix& closure) {
    CandidateMatrix out = cands;
    for (const auto& c : cands.surviving())
        if (closure(c.positive, c.negative)) out.remove(c);
    return out;
}

/// Structural edges with empty exclusion sets plus one edge per surviving
/// candidate, excluded by every other surviving cell in its row and column.
[[nodiscard]] inline AnnotatedGraph annotated_graph(const ProofFrame& frame, const CandidateMatrix& cands) {
    AnnotatedGraph g{frame.vertex_count(), {}};
    for (const auto& e : frame.ess_edges) g.edges.push_back({e.from, e.to, {}});
    for (const auto& c : cands.surviving()) {
        std::vector<AxiomLink> rivals;
        for (Vertex p : cands.row(c.negative))
            if (p != c.positive) rivals.push_back({c.negative, p});
        for (Vertex n : cands.column(c.positive))
            if (n != c.negative) rivals.push_back({n, c.positive});
        g.edges.push_back({c.negative, c.positive, ExclusionSet(rivals)});
    }
    return g;
}

namespace detail {

inline void summarize(PruneResult& r) {
    for (const auto& blk : r.pruned.blocks()) {
        for (Vertex n : blk.negatives) {
            auto row = r.pruned.row(n);
            if (row.empty()) r.failed = true;
            if (row.size() == 1 && r.pruned.state(n, row.front()) == Cell::Open) r.forced.push_back({n, row.front()});
        }
        for (Vertex p : blk.positives) {
            auto col = r.pruned.column(p);
            if (col.empty()) r.failed = true;
            if (col.size() == 1 && r.pruned.state(col.front(), p) == Cell::Open) r.forced.push_back({col.front(), p});
        }
    }
    std::sort(r.forced.begin(), r.forced.end());
    r.forced.erase(std::unique(r.forced.begin(), r.forced.end()), r.forced.end());
}

} // namespace detail

/// Removes open candidates whose selection would cut a required path.
/// `aclosure` is the exclusion closure of annotated_graph(frame, cands).
[[nodiscard]] inline PruneResult prune_connectedness(const CandidateMatrix& cands, const ClosureMatrix& aclosure,
                                                     const std::vector<RequiredPair>& reqs) {
    PruneResult r{cands, {}, false};
    for (const auto& req : reqs)
        if (!aclosure(req.source, req.target)) r.failed = true;
    for (const auto& c : cands.open()) {
        for (const auto& req : reqs) {
            const auto& entry = aclosure(req.source, req.target);
            if (entry && entry->contains(c)) {
                r.pruned.remove(c);
                break;
            }
        }
    }
    detail::summarize(r);
    return r;
}

/// One acyclicity pass followed by one connectedness pass.
[[nodiscard]] inline PruneResult prune(const ProofFrame& frame, const CandidateMatrix& cands,
                                       const std::vector<RequiredPair>& reqs) {
    auto acyclic = prune_cycles(cands, bool_closure(essential_graph(frame, cands.committed())));
    return prune_connectedness(acyclic, excl_closure(annotated_graph(frame, acyclic)), reqs);
}

/// Open cells of the most constrained row or column, in ascending partner id.
/// Ties between lines go to the lowest occurrence id. Empty when nothing is open.
[[nodiscard]] inline std::vector<AxiomLink> select_line(const CandidateMatrix& cands) {
    std::optional<std::tuple<std::size_t, Vertex, bool>> best;  // (count, id, is_row)
    auto consider = [&](std::size_t count, Vertex id, bool is_row) {
        auto key = std::make_tuple(count, id, is_row);
        if (!best || key < *best) best = key;
    };
    for (const auto& blk : cands.blocks()) {
        for (Vertex n : blk.negatives) {
            auto row = cands.row(n);
            if (!row.empty() && cands.state(n, row.front()) == Cell::Open) consider(row.size(), n, true);
        }
        for (Vertex p : blk.positives) {
            auto col = cands.column(p);
            if (!col.empty() && cands.state(col.front(), p) == Cell::Open) consider(col.size(), p, false);
        }
    }
    std::vector<AxiomLink> out;
    if (!best) return out;
    auto [count, id, is_row] = *best;
    if (is_row) {
        for (Vertex p : cands.row(id)) out.push_back({id, p});
    } else {
        for (Vertex n : cands.column(id)) out.push_back({n, id});
    }
    return out;
}

/// First candidate of select_line; std::nullopt means the linking is complete.
[[nodiscard]] inline std::optional<AxiomLink> select_link(const PruneResult& result) {
    auto line = select_line(result.pruned);
    if (line.empty()) return std::nullopt;
    return line.front();
}

} // namespace prooflink
