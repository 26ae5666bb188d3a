#pragma once

#include "prooflink/filter.hpp"
#include "prooflink/frame.hpp"
#include "prooflink/prover.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace prooflink {

/// Non-negative integer weight or infinity. Infinity never takes part in arithmetic.
class Weight {
public:
    constexpr Weight() = default;
    constexpr explicit Weight(std::int64_t value) : value_(value) {}
    [[nodiscard]] static constexpr Weight infinity() {
        Weight w;
        w.infinite_ = true;
        return w;
    }

    [[nodiscard]] constexpr bool is_infinite() const noexcept { return infinite_; }
    [[nodiscard]] constexpr bool is_finite() const noexcept { return !infinite_; }
    [[nodiscard]] std::int64_t value() const {
        if (infinite_) throw std::logic_error("value() of an infinite weight");
        return value_;
    }

    friend constexpr bool operator==(const Weight& a, const Weight& b) noexcept {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend constexpr std::strong_ordering operator<=>(const Weight& a, const Weight& b) noexcept {
        if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
        return a.value_ <=> b.value_;
    }

private:
    std::int64_t value_ = 0;
    bool infinite_ = false;
};

/// Rows are negative occurrences, columns positive occurrences.
class CostMatrix {
public:
    CostMatrix() = default;
    CostMatrix(std::size_t rows, std::size_t cols, Weight fill = Weight::infinity())
        : rows_(rows), cols_(cols), cells_(rows * cols, fill) {
        for (std::size_t i = 0; i < rows; ++i) row_labels_.push_back(i + 1);
        for (std::size_t j = 0; j < cols; ++j) col_labels_.push_back(j + 1);
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] Weight at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
    Weight& at(std::size_t i, std::size_t j) { return cells_[i * cols_ + j]; }

    /// Vertex ids of the occurrences behind each row/column (1..n for plain matrices).
    std::vector<Vertex>& row_labels() noexcept { return row_labels_; }
    std::vector<Vertex>& col_labels() noexcept { return col_labels_; }
    [[nodiscard]] const std::vector<Vertex>& row_labels() const noexcept { return row_labels_; }
    [[nodiscard]] const std::vector<Vertex>& col_labels() const noexcept { return col_labels_; }

    friend bool operator==(const CostMatrix&, const CostMatrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Weight> cells_;
    std::vector<Vertex> row_labels_, col_labels_;
};

[[nodiscard]] inline std::int64_t distance(const ProofFrame& frame, Vertex n, Vertex p) {
    auto a = static_cast<std::int64_t>(frame.atom(n).position);
    auto b = static_cast<std::int64_t>(frame.atom(p).position);
    return a > b ? a - b : b - a;
}

/// Distance weights for one atom name; cells removed from `cands` are infinite.
[[nodiscard]] inline CostMatrix block_cost_matrix(const ProofFrame& frame, const CandidateMatrix& cands,
                                                  const std::string& name) {
    for (const auto& blk : cands.blocks()) {
        if (blk.name != name) continue;
        CostMatrix m(blk.negatives.size(), blk.positives.size());
        m.row_labels() = blk.negatives;
        m.col_labels() = blk.positives;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (blk.at(i, j) != Cell::Removed)
                    m.at(i, j) = Weight(distance(frame, blk.negatives[i], blk.positives[j]));
        return m;
    }
    throw std::invalid_argument("no atom named '" + name + "' in frame");
}

/// Block-diagonal composite over all atom names; cross-name cells are infinite.
[[nodiscard]] inline CostMatrix cost_matrix(const ProofFrame& frame, const CandidateMatrix& cands) {
    std::vector<Vertex> negs, poss;
    for (const auto& a : frame.atoms) (a.polarity == Polarity::Negative ? negs : poss).push_back(a.id);
    CostMatrix m(negs.size(), poss.size());
    m.row_labels() = negs;
    m.col_labels() = poss;
    for (std::size_t i = 0; i < negs.size(); ++i)
        for (std::size_t j = 0; j < poss.size(); ++j)
            if (cands.state(negs[i], poss[j]) != Cell::Removed) m.at(i, j) = Weight(distance(frame, negs[i], poss[j]));
    return m;
}

/// A perfect matching: columns[i] is the column assigned to row i.
struct Assignment {
    std::vector<std::size_t> columns;
    std::int64_t weight = 0;

    friend bool operator==(const Assignment&, const Assignment&) = default;
    friend auto operator<=>(const Assignment& a, const Assignment& b) {
        if (auto c = a.weight <=> b.weight; c != 0) return c;
        return a.columns <=> b.columns;
    }
};

namespace detail {

/// Does the bipartite graph `adj` restricted to rows >= first_row and free
/// columns have a perfect matching? Simple augmenting paths.
inline bool has_perfect_matching(const std::vector<std::vector<std::size_t>>& adj, std::size_t first_row,
                                 const std::vector<bool>& col_taken) {
    const std::size_t n = adj.size();
    std::vector<std::ptrdiff_t> match_col(n, -1);
    std::vector<bool> visited;
    std::function<bool(std::size_t)> augment = [&](std::size_t r) {
        for (std::size_t c : adj[r]) {
            if (col_taken[c] || visited[c]) continue;
            visited[c] = true;
            if (match_col[c] < 0 || augment(static_cast<std::size_t>(match_col[c]))) {
                match_col[c] = static_cast<std::ptrdiff_t>(r);
                return true;
            }
        }
        return false;
    };
    for (std::size_t r = first_row; r < n; ++r) {
        visited.assign(n, false);
        if (!augment(r)) return false;
    }
    return true;
}

} // namespace detail

/// Minimum-weight perfect matching over finite cells; std::nullopt when none
/// exists. Among optimal matchings the lexicographically smallest is returned.
[[nodiscard]] inline std::optional<Assignment> hungarian(const CostMatrix& cost) {
    if (!cost.square()) throw std::invalid_argument("assignment needs a square cost matrix");
    const std::size_t n = cost.rows();
    if (n == 0) return Assignment{};

    // Shortest augmenting paths with potentials; index 0 is a sentinel.
    std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1, 0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<bool> used(n + 1, false), seen(n + 1, false);
        do {
            used[j0] = true;
            std::size_t i0 = match[j0], j1 = 0;
            std::optional<std::int64_t> delta;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                Weight w = cost.at(i0 - 1, j - 1);
                if (w.is_finite()) {
                    std::int64_t cur = w.value() - u[i0] - v[j];
                    if (!seen[j] || cur < minv[j]) {
                        minv[j] = cur;
                        way[j] = j0;
                        seen[j] = true;
                    }
                }
                if (seen[j] && (!delta || minv[j] < *delta)) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if (!delta) return std::nullopt;
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += *delta;
                    v[j] -= *delta;
                } else if (seen[j]) {
                    minv[j] -= *delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    // Optimal matchings are exactly the perfect matchings on tight cells.
    std::vector<std::vector<std::size_t>> tight(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Weight w = cost.at(i, j);
            if (w.is_finite() && w.value() - u[i + 1] - v[j + 1] == 0) tight[i].push_back(j);
        }
    Assignment best;
    std::vector<bool> taken(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        bool placed = false;
        for (std::size_t j : tight[i]) {
            if (taken[j]) continue;
            taken[j] = true;
            if (detail::has_perfect_matching(tight, i + 1, taken)) {
                best.columns.push_back(j);
                best.weight += cost.at(i, j).value();
                placed = true;
                break;
            }
            taken[j] = false;
        }
        if (!placed) throw std::logic_error("hungarian: tight graph lost its perfect matching");
    }
    return best;
}

/// Enumerates finite-weight perfect matchings in ascending (weight, columns)
/// order by Murty's partitioning, one at a time.
class MurtyRanker {
public:
    explicit MurtyRanker(const CostMatrix& cost) {
        if (!cost.square()) throw std::invalid_argument("assignment needs a square cost matrix");
        push({cost, std::vector<bool>(cost.rows(), false)});
    }

    [[nodiscard]] std::optional<Assignment> next() {
        if (queue_.empty()) return std::nullopt;
        Node node = queue_.top();
        queue_.pop();
        Subproblem sub = std::move(node.sub);
        const Assignment& best = node.best;
        for (std::size_t i = 0; i < best.columns.size(); ++i) {
            if (sub.fixed[i]) continue;
            std::size_t j = best.columns[i];
            Subproblem child = sub;
            child.cost.at(i, j) = Weight::infinity();
            push(std::move(child));
            for (std::size_t k = 0; k < sub.cost.cols(); ++k)
                if (k != j) sub.cost.at(i, k) = Weight::infinity();
            for (std::size_t k = 0; k < sub.cost.rows(); ++k)
                if (k != i) sub.cost.at(k, j) = Weight::infinity();
            sub.fixed[i] = true;
        }
        return node.best;
    }

private:
    struct Subproblem {
        CostMatrix cost;
        std::vector<bool> fixed;
    };
    struct Node {
        Subproblem sub;
        Assignment best;
        bool operator>(const Node& o) const { return best > o.best; }
    };

    void push(Subproblem sub) {
        if (auto best = hungarian(sub.cost)) queue_.push({std::move(sub), std::move(*best)});
    }

    std::priority_queue<Node, std::vector<Node>, std::greater<>> queue_;
};

/// Up to k finite-weight matchings, ascending by weight, ties lexicographic.
[[nodiscard]] inline std::vector<Assignment> murty_kbest(const CostMatrix& cost, std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    std::vector<Assignment> out;
    MurtyRanker ranker(cost);
    while (out.size() < k) {
        auto a = ranker.next();
        if (!a) break;
        out.push_back(std::move(*a));
    }
    return out;
}

[[nodiscard]] inline Linking to_linking(const CostMatrix& cost, const Assignment& a) {
    Linking l;
    for (std::size_t i = 0; i < a.columns.size(); ++i)
        l.push_back({cost.row_labels()[i], cost.col_labels()[a.columns[i]]});
    std::sort(l.begin(), l.end());
    return l;
}

[[nodiscard]] inline std::int64_t linking_weight(const ProofFrame& frame, const Linking& linking) {
    std::int64_t w = 0;
    for (const auto& l : linking) w += distance(frame, l.negative, l.positive);
    return w;
}

/// Fills in distance weights and orders nets by ascending weight (stable).
inline void rank_nets(std::vector<ProofNet>& nets) {
    for (auto& n : nets) n.weight = linking_weight(*n.frame, n.linking);
    std::stable_sort(nets.begin(), nets.end(),
                     [](const ProofNet& a, const ProofNet& b) { return *a.weight < *b.weight; });
}

struct RankedCandidate {
    Linking linking;
    std::int64_t weight = 0;
    bool valid = false;
};

/// Candidate matrix after one pruning pass, or the raw matrix when `prune_first` is off.
[[nodiscard]] inline CandidateMatrix ranking_candidates(const ProofFrame& frame, bool prune_first = true) {
    auto cands = candidate_links(frame);
    if (!prune_first) return cands;
    return prune(frame, cands, required_pairs(frame)).pruned;
}

/// The k lightest linkings with their validity, whether or not they are proof nets.
[[nodiscard]] inline std::vector<RankedCandidate> kbest_linkings(const ProofFrame& frame, std::size_t k,
                                                                 bool prune_first = true,
                                                                 const SearchOptions& opts = {}) {
    std::vector<RankedCandidate> out;
    auto cost = cost_matrix(frame, ranking_candidates(frame, prune_first));
    if (!cost.square()) return out;
    for (const auto& a : murty_kbest(cost, k)) {
        auto l = to_linking(cost, a);
        bool valid = accepts(frame, l, opts);
        out.push_back({std::move(l), a.weight, valid});
    }
    return out;
}

/// The k lightest proof nets: ranks linkings and validates them lazily in rank order.
[[nodiscard]] inline std::vector<ProofNet> kbest_proofs(const Sequent& sequent, std::size_t k,
                                                        const SearchOptions& opts = {}) {
    auto frame = std::make_shared<const ProofFrame>(unfold(sequent));
    std::vector<ProofNet> out;
    if (k == 0 || !balanced(atom_multiset(sequent))) return out;
    auto cost = cost_matrix(*frame, ranking_candidates(*frame));
    MurtyRanker ranker(cost);
    while (out.size() < k) {
        auto a = ranker.next();
        if (!a) break;
        auto l = to_linking(cost, *a);
        if (accepts(*frame, l, opts)) out.push_back({frame, std::move(l), a->weight});
    }
    return out;
}

} // namespace prooflink
