#pragma once

#include "prooflink/filter.hpp"
#include "prooflink/frame.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace prooflink {

struct ProofNet {
    std::shared_ptr<const ProofFrame> frame;
    Linking linking;
    std::optional<std::int64_t> weight;
};

struct SearchOptions {
    bool planar = false;
    std::optional<std::size_t> max_solutions;  ///< unlimited when empty
    bool validate_both = true;                 ///< also run the switching oracle on each solution
    std::size_t oracle_bound = 16;             ///< par-link limit for the switching oracle
    std::function<void(const std::string&)> trace;
};

class OracleBoundExceeded : public std::runtime_error {
public:
    OracleBoundExceeded(std::size_t pars, std::size_t bound)
        : std::runtime_error("switching oracle refuses " + std::to_string(pars) + " par links (bound " +
                             std::to_string(bound) + ")") {}
};

namespace detail {

inline void require_complete(const ProofFrame& frame, const Linking& linking) {
    if (!is_complete(frame, linking)) throw std::invalid_argument("linking is not a complete axiom linking");
}

inline bool acyclic(const std::vector<std::vector<Vertex>>& succ) {
    const std::size_t n = succ.size();
    std::vector<std::size_t> indeg(n, 0);
    for (const auto& out : succ)
        for (Vertex w : out) ++indeg[w];
    std::vector<Vertex> stack;
    for (Vertex v = 1; v < n; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    std::size_t seen = 0;
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        ++seen;
        for (Vertex w : succ[v])
            if (--indeg[w] == 0) stack.push_back(w);
    }
    return seen + 1 == n;
}

inline std::vector<bool> reachable(const std::vector<std::vector<Vertex>>& succ, const std::vector<Vertex>& from,
                                   Vertex blocked = 0) {
    std::vector<bool> seen(succ.size(), false);
    std::vector<Vertex> stack;
    for (Vertex v : from)
        if (v != blocked && !seen[v]) {
            seen[v] = true;
            stack.push_back(v);
        }
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (Vertex w : succ[v])
            if (w != blocked && !seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    return seen;
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[a] = b;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace detail

/// Essential-net correctness of a complete linking: the graph is acyclic, every
/// path from the negative premiss of a positive / or \ link runs through the
/// link's conclusion, and every path from an input ends at the output.
[[nodiscard]] inline bool validate_essential(const ProofFrame& frame, const Linking& linking) {
    detail::require_complete(frame, linking);
    auto succ = essential_graph(frame, linking).successors();
    if (!detail::acyclic(succ)) return false;

    for (const auto& link : frame.links) {
        if (link.kind != LinkKind::Par || link.polarity != Polarity::Positive) continue;
        Vertex premiss = link.connective == Connective::Over ? link.right : link.left;
        if (detail::reachable(succ, {premiss}, link.conclusion)[frame.output]) return false;
    }

    auto seen = detail::reachable(succ, frame.inputs);
    for (Vertex v = 1; v <= frame.vertex_count(); ++v)
        if (seen[v] && succ[v].empty() && v != frame.output) return false;
    return true;
}

/// Danos-Regnier check: every switching yields an acyclic, connected
/// undirected correction graph. Exponential in the number of par links.
[[nodiscard]] inline bool dr_oracle(const ProofFrame& frame, const Linking& linking, std::size_t bound = 16) {
    detail::require_complete(frame, linking);
    std::vector<const FrameLink*> pars;
    for (const auto& link : frame.links)
        if (link.kind == LinkKind::Par) pars.push_back(&link);
    if (pars.size() > bound || pars.size() >= 63) throw OracleBoundExceeded(pars.size(), bound);

    const std::size_t v = frame.vertex_count();
    const std::uint64_t switchings = std::uint64_t{1} << pars.size();
    for (std::uint64_t mask = 0; mask < switchings; ++mask) {
        detail::UnionFind uf(v + 1);
        std::size_t edges = 0;
        auto add = [&](Vertex a, Vertex b) {
            ++edges;
            return uf.unite(a, b);
        };
        bool ok = true;
        for (const auto& l : linking) ok = ok && add(l.negative, l.positive);
        std::size_t k = 0;
        for (const auto& link : frame.links) {
            if (!ok) break;
            if (link.kind == LinkKind::Tensor) {
                ok = add(link.conclusion, link.left) && add(link.conclusion, link.right);
            } else {
                bool right = (mask >> k++) & 1;
                ok = add(link.conclusion, right ? link.right : link.left);
            }
        }
        // acyclic with v - 1 edges on v vertices means connected
        if (!ok || edges + 1 != v) return false;
    }
    return true;
}

namespace detail {
inline bool crossing(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    auto [a, b] = std::minmax(i, j);
    auto [c, d] = std::minmax(k, l);
    return (a < c && c < b && b < d) || (c < a && a < d && d < b);
}
} // namespace detail

/// False iff `link` crosses a committed link under atom positions.
[[nodiscard]] inline bool planar_ok(const ProofFrame& frame, const AxiomLink& link, const Linking& committed) {
    std::size_t i = frame.atom(link.negative).position, j = frame.atom(link.positive).position;
    for (const auto& c : committed)
        if (detail::crossing(i, j, frame.atom(c.negative).position, frame.atom(c.positive).position)) return false;
    return true;
}

[[nodiscard]] inline bool is_planar(const ProofFrame& frame, const Linking& linking) {
    for (std::size_t k = 0; k < linking.size(); ++k)
        if (!planar_ok(frame, linking[k], Linking(linking.begin() + static_cast<std::ptrdiff_t>(k) + 1, linking.end())))
            return false;
    return true;
}

enum class Validator { Essential, SwitchingOracle };

class EnumerationBoundExceeded : public std::runtime_error {
public:
    EnumerationBoundExceeded(std::uint64_t count, std::uint64_t bound)
        : std::runtime_error(std::to_string(count) + " linkings exceed the enumeration bound " +
                             std::to_string(bound)) {}
};

/// Every complete matching, filtered by `validator`, in lexicographic order.
[[nodiscard]] inline std::vector<Linking> enumerate_bruteforce(const ProofFrame& frame, Validator validator,
                                                              std::uint64_t bound = 10'000,
                                                              std::size_t oracle_bound = 16) {
    auto count = count_linkings(frame);
    if (count > bound) throw EnumerationBoundExceeded(count, bound);

    auto cands = candidate_links(frame);
    const auto& blocks = cands.blocks();
    std::vector<std::vector<std::size_t>> perms;
    for (const auto& b : blocks) {
        perms.emplace_back(b.positives.size());
        std::iota(perms.back().begin(), perms.back().end(), 0);
    }
    std::vector<Linking> out;
    for (;;) {
        Linking l;
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (std::size_t i = 0; i < blocks[b].negatives.size(); ++i)
                l.push_back({blocks[b].negatives[i], blocks[b].positives[perms[b][i]]});
        std::sort(l.begin(), l.end());
        bool ok = validator == Validator::Essential ? validate_essential(frame, l) : dr_oracle(frame, l, oracle_bound);
        if (ok) out.push_back(std::move(l));

        std::size_t b = 0;
        while (b < perms.size() && !std::next_permutation(perms[b].begin(), perms[b].end())) ++b;
        if (b == perms.size()) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Final check on a complete linking: the essential-net criterion, planarity
/// when requested, and the switching oracle while the frame is within its bound.
[[nodiscard]] inline bool accepts(const ProofFrame& frame, const Linking& linking, const SearchOptions& opts) {
    if (!validate_essential(frame, linking)) return false;
    if (opts.planar && !is_planar(frame, linking)) return false;
    if (opts.validate_both && frame.stats.p <= opts.oracle_bound) return dr_oracle(frame, linking, opts.oracle_bound);
    return true;
}

namespace detail {

class Search {
public:
    Search(const ProofFrame& frame, const SearchOptions& opts)
        : frame_(frame), opts_(opts), reqs_(required_pairs(frame)) {}

    std::vector<Linking> run() {
        if (!balanced(atom_multiset(frame_.sequent))) {
            log("unbalanced atoms; no linking exists");
            return {};
        }
        explore(candidate_links(frame_), 0);
        return std::move(solutions_);
    }

    /// Prunes to a fixpoint, committing forced links one at a time.
    PruneResult propagate(CandidateMatrix cands, std::size_t depth) {
        for (;;) {
            if (opts_.planar) {
                auto committed = cands.committed();
                for (const auto& c : cands.open())
                    if (!planar_ok(frame_, c, committed)) cands.remove(c);
            }
            auto r = prune(frame_, cands, reqs_);
            if (r.failed || r.forced.empty()) return r;
            log(depth, "forced " + describe(r.forced.front()));
            cands = std::move(r.pruned);
            cands.commit(r.forced.front());
        }
    }

private:
    bool done() const { return opts_.max_solutions && solutions_.size() >= *opts_.max_solutions; }

    void explore(CandidateMatrix cands, std::size_t depth) {
        if (done()) return;
        auto r = propagate(std::move(cands), depth);
        if (r.failed) {
            log(depth, "dead end");
            return;
        }
        auto line = select_line(r.pruned);
        if (line.empty()) {
            auto linking = r.pruned.committed();
            if (accepts(frame_, linking, opts_)) {
                log(depth, "solution");
                solutions_.push_back(std::move(linking));
            } else {
                log(depth, "rejected by final validation");
            }
            return;
        }
        for (const auto& choice : line) {
            if (done()) return;
            log(depth, "try " + describe(choice));
            CandidateMatrix next = r.pruned;
            next.commit(choice);
            explore(std::move(next), depth + 1);
        }
    }


    std::string describe(const AxiomLink& l) const { return frame_.tag(l.negative) + "-" + frame_.tag(l.positive); }

    void log(std::size_t depth, const std::string& msg) const {
        if (opts_.trace) opts_.trace(std::string(2 * depth, ' ') + msg);
    }
    void log(const std::string& msg) const { log(0, msg); }

    const ProofFrame& frame_;
    const SearchOptions& opts_;
    std::vector<RequiredPair> reqs_;
    std::vector<Linking> solutions_;
};

} // namespace detail

/// Linkings of `frame` that form proof nets, in search order.
[[nodiscard]] inline std::vector<Linking> prove_frame(const ProofFrame& frame, const SearchOptions& opts = {}) {
    return detail::Search(frame, opts).run();
}

[[nodiscard]] inline std::vector<ProofNet> prove(const Sequent& sequent, const SearchOptions& opts = {}) {
    auto frame = std::make_shared<const ProofFrame>(unfold(sequent));
    std::vector<ProofNet> nets;
    for (auto& l : prove_frame(*frame, opts)) nets.push_back({frame, std::move(l), std::nullopt});
    return nets;
}

} // namespace prooflink
