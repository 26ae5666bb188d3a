#pragma once

#include "prooflink/formula.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <iterator>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace prooflink {

/// 1-based vertex index into a proof frame. Atoms come first.
using Vertex = std::size_t;

struct Edge {
    Vertex from = 0;
    Vertex to = 0;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Directed graph over vertices 1..vertex_count.
struct Digraph {
    std::size_t vertex_count = 0;
    std::vector<Edge> edges;

    [[nodiscard]] std::vector<std::vector<Vertex>> successors() const {
        std::vector<std::vector<Vertex>> out(vertex_count + 1);
        for (const auto& e : edges) out[e.from].push_back(e.to);
        return out;
    }
};

struct AtomOccurrence {
    Vertex id = 0;
    std::string name;
    Polarity polarity = Polarity::Negative;
    /// Left-to-right index used for distances and planarity. The succedent's
    /// atoms come first; positive subformulas list their operands in reverse.
    std::size_t position = 0;
};

enum class LinkKind { Tensor, Par };

/// A binary link of the proof structure. `left`/`right` are the premisses
/// holding the connective's left and right operands.
struct FrameLink {
    LinkKind kind = LinkKind::Tensor;
    Connective connective = Connective::Over;
    Polarity polarity = Polarity::Negative;
    Vertex left = 0;
    Vertex right = 0;
    Vertex conclusion = 0;
};

struct FrameVertex {
    Formula formula;
    Polarity polarity;
};

struct FrameStats {
    std::size_t h = 0; ///< negative conclusions
    std::size_t t = 0; ///< tensor links
    std::size_t p = 0; ///< par links
    std::size_t a = 0; ///< positive atom occurrences (axiom links of a complete linking)
};

/// One axiom link, always oriented negative -> positive.
struct AxiomLink {
    Vertex negative = 0;
    Vertex positive = 0;
    friend auto operator<=>(const AxiomLink&, const AxiomLink&) = default;
};

/// Sorted set of axiom links.
using Linking = std::vector<AxiomLink>;

struct ProofFrame {
    Sequent sequent;
    std::vector<AtomOccurrence> atoms;  ///< atoms[i].id == i + 1
    std::vector<FrameVertex> vertices;  ///< vertices[i] describes vertex i + 1
    std::vector<FrameLink> links;
    std::vector<Edge> ess_edges;        ///< structural essential-net edges
    std::vector<Vertex> inputs;         ///< ascending
    Vertex output = 0;
    FrameStats stats;

    [[nodiscard]] std::size_t vertex_count() const noexcept { return vertices.size(); }
    [[nodiscard]] bool is_atom(Vertex v) const noexcept { return v >= 1 && v <= atoms.size(); }
    [[nodiscard]] const AtomOccurrence& atom(Vertex v) const { return atoms.at(v - 1); }
    [[nodiscard]] const FrameVertex& vertex(Vertex v) const { return vertices.at(v - 1); }

    /// "s1", "np7" for atoms; the main connective plus index ("/9") otherwise.
    [[nodiscard]] std::string tag(Vertex v) const {
        if (is_atom(v)) return atom(v).name + std::to_string(v);
        switch (vertex(v).formula.kind()) {
        case Connective::Over: return "/" + std::to_string(v);
        case Connective::Under: return "\\" + std::to_string(v);
        default: return "*" + std::to_string(v);
        }
    }
};

namespace detail {

struct UnfoldNode {
    Formula formula;
    Polarity polarity;
    int left = -1, right = -1;
    bool root = false;
};

class Unfolder {
public:
    std::vector<UnfoldNode> nodes;
    std::vector<int> reading;  // in-order traversal, antecedents first

    int build(const Formula& f, Polarity pol, bool root) {
        int idx = static_cast<int>(nodes.size());
        nodes.push_back({f, pol, -1, -1, root});
        if (!f.is_atom()) {
            int l = build(f.left(), left_polarity(f.kind(), pol), false);
            int r = build(f.right(), right_polarity(f.kind(), pol), false);
            nodes[idx].left = l;
            nodes[idx].right = r;
        }
        return idx;
    }

    // Negative nodes read their operands left to right, positive nodes right to left.
    void traverse(int idx) {
        const auto& n = nodes[idx];
        if (n.left < 0) {
            reading.push_back(idx);
            return;
        }
        int first = n.polarity == Polarity::Negative ? n.left : n.right;
        int second = n.polarity == Polarity::Negative ? n.right : n.left;
        traverse(first);
        reading.push_back(idx);
        traverse(second);
    }
};

} // namespace detail

/// Unfolds a sequent into its proof frame.
///
/// Vertex numbering: atoms first, grouped by atom name in order of first
/// appearance; within a name the negative occurrences precede the positive
/// ones, each in reading order (antecedent formulas left to right, then the
/// succedent). Compound subformulas follow in reading order.
[[nodiscard]] inline ProofFrame unfold(const Sequent& sequent) {
    detail::Unfolder u;
    std::vector<int> roots;
    for (const auto& f : sequent.antecedent) roots.push_back(u.build(f, Polarity::Negative, true));
    int succ_root = u.build(sequent.succedent, Polarity::Positive, true);
    for (int r : roots) u.traverse(r);
    std::size_t antecedent_reading = u.reading.size();
    u.traverse(succ_root);

    std::vector<int> atom_reading;  // atom nodes in reading order
    std::vector<int> compound_reading;
    std::size_t antecedent_atoms = 0;
    for (std::size_t i = 0; i < u.reading.size(); ++i) {
        int idx = u.reading[i];
        if (u.nodes[idx].left < 0) {
            atom_reading.push_back(idx);
            if (i < antecedent_reading) ++antecedent_atoms;
        } else {
            compound_reading.push_back(idx);
        }
    }
    const std::size_t atom_total = atom_reading.size();
    const std::size_t succedent_atoms = atom_total - antecedent_atoms;

    std::vector<std::string> name_order;
    for (int idx : atom_reading) {
        const auto& name = u.nodes[idx].formula.name();
        if (std::find(name_order.begin(), name_order.end(), name) == name_order.end())
            name_order.push_back(name);
    }

    std::vector<Vertex> id_of(u.nodes.size(), 0);
    ProofFrame frame{sequent, {}, {}, {}, {}, {}, 0, {}};
    for (const auto& name : name_order) {
        for (Polarity pol : {Polarity::Negative, Polarity::Positive}) {
            for (std::size_t r = 0; r < atom_total; ++r) {
                const auto& node = u.nodes[atom_reading[r]];
                if (node.formula.name() != name || node.polarity != pol) continue;
                Vertex id = frame.atoms.size() + 1;
                id_of[atom_reading[r]] = id;
                std::size_t position = r < antecedent_atoms ? r + succedent_atoms : r - antecedent_atoms;
                frame.atoms.push_back({id, name, pol, position});
                frame.vertices.push_back({node.formula, pol});
            }
        }
    }
    for (int idx : compound_reading) {
        id_of[idx] = frame.vertices.size() + 1;
        frame.vertices.push_back({u.nodes[idx].formula, u.nodes[idx].polarity});
    }

    for (int idx : compound_reading) {
        const auto& n = u.nodes[idx];
        Connective c = n.formula.kind();
        Vertex concl = id_of[idx], l = id_of[n.left], r = id_of[n.right];
        bool negative = n.polarity == Polarity::Negative;
        bool tensor = negative ? c != Connective::Prod : c == Connective::Prod;
        frame.links.push_back({tensor ? LinkKind::Tensor : LinkKind::Par, c, n.polarity, l, r, concl});
        (tensor ? frame.stats.t : frame.stats.p) += 1;

        if (negative) {
            switch (c) {
            case Connective::Over:  // A/B: C -> A, B -> A
                frame.ess_edges.push_back({concl, l});
                frame.ess_edges.push_back({r, l});
                break;
            case Connective::Under:  // B\A: C -> A, B -> A
                frame.ess_edges.push_back({concl, r});
                frame.ess_edges.push_back({l, r});
                break;
            default:  // A*B: C -> A, C -> B
                frame.ess_edges.push_back({concl, l});
                frame.ess_edges.push_back({concl, r});
                break;
            }
        } else {
            switch (c) {
            case Connective::Over:  // A/B: A -> C, B is an input
                frame.ess_edges.push_back({l, concl});
                frame.inputs.push_back(r);
                break;
            case Connective::Under:  // B\A: A -> C, B is an input
                frame.ess_edges.push_back({r, concl});
                frame.inputs.push_back(l);
                break;
            default:  // A*B: A -> C, B -> C
                frame.ess_edges.push_back({l, concl});
                frame.ess_edges.push_back({r, concl});
                break;
            }
        }
    }
    for (int r : roots) frame.inputs.push_back(id_of[r]);
    std::sort(frame.inputs.begin(), frame.inputs.end());
    std::sort(frame.ess_edges.begin(), frame.ess_edges.end());
    frame.output = id_of[succ_root];
    frame.stats.h = roots.size();
    frame.stats.a = static_cast<std::size_t>(
        std::count_if(frame.atoms.begin(), frame.atoms.end(),
                      [](const AtomOccurrence& a) { return a.polarity == Polarity::Positive; }));
    return frame;
}

enum class Cell : std::uint8_t { Removed, Open, Committed };

/// Candidate axiom links for one atom name: rows are negative occurrences,
/// columns positive occurrences, both ascending by vertex id.
struct AtomBlock {
    std::string name;
    std::vector<Vertex> negatives;
    std::vector<Vertex> positives;
    std::vector<Cell> cells;

    [[nodiscard]] Cell at(std::size_t row, std::size_t col) const { return cells[row * positives.size() + col]; }
    Cell& at(std::size_t row, std::size_t col) { return cells[row * positives.size() + col]; }
};

class CandidateMatrix {
public:
    CandidateMatrix() = default;

    CandidateMatrix(std::vector<AtomBlock> blocks, std::size_t vertex_count)
        : blocks_(std::move(blocks)), slot_(vertex_count + 1) {
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            for (std::size_t i = 0; i < blocks_[b].negatives.size(); ++i) slot_[blocks_[b].negatives[i]] = {b, i};
            for (std::size_t j = 0; j < blocks_[b].positives.size(); ++j) slot_[blocks_[b].positives[j]] = {b, j};
        }
    }

    [[nodiscard]] const std::vector<AtomBlock>& blocks() const noexcept { return blocks_; }

    [[nodiscard]] Cell state(Vertex n, Vertex p) const {
        if (n >= slot_.size() || p >= slot_.size()) return Cell::Removed;
        const auto& sn = slot_[n];
        const auto& sp = slot_[p];
        if (sn.block == npos || sn.block != sp.block) return Cell::Removed;
        const auto& blk = blocks_[sn.block];
        if (sn.index >= blk.negatives.size() || blk.negatives[sn.index] != n) return Cell::Removed;
        if (sp.index >= blk.positives.size() || blk.positives[sp.index] != p) return Cell::Removed;
        return blk.at(sn.index, sp.index);
    }
    [[nodiscard]] bool admissible(const AxiomLink& l) const { return state(l.negative, l.positive) != Cell::Removed; }

    void remove(const AxiomLink& l) {
        if (admissible(l)) cell(l) = Cell::Removed;
    }

    /// Fixes `l` and removes every other cell in its row and column.
    void commit(const AxiomLink& l) {
        if (!admissible(l)) throw std::logic_error("commit of a removed candidate");
        const auto& s = slot_[l.negative];
        auto& blk = blocks_[s.block];
        std::size_t row = s.index, col = slot_[l.positive].index;
        for (std::size_t j = 0; j < blk.positives.size(); ++j) blk.at(row, j) = Cell::Removed;
        for (std::size_t i = 0; i < blk.negatives.size(); ++i) blk.at(i, col) = Cell::Removed;
        blk.at(row, col) = Cell::Committed;
    }

    /// Surviving (open or committed) cells, sorted.
    [[nodiscard]] std::vector<AxiomLink> surviving() const { return collect(true, true); }
    [[nodiscard]] std::vector<AxiomLink> open() const { return collect(true, false); }
    [[nodiscard]] Linking committed() const { return collect(false, true); }
    [[nodiscard]] std::size_t count() const { return surviving().size(); }

    /// Surviving cells in the row of negative occurrence `n`.
    [[nodiscard]] std::vector<Vertex> row(Vertex n) const {
        std::vector<Vertex> out;
        const auto& s = slot_.at(n);
        if (s.block == npos) return out;
        const auto& blk = blocks_[s.block];
        for (std::size_t j = 0; j < blk.positives.size(); ++j)
            if (blk.at(s.index, j) != Cell::Removed) out.push_back(blk.positives[j]);
        return out;
    }
    /// Surviving cells in the column of positive occurrence `p`.
    [[nodiscard]] std::vector<Vertex> column(Vertex p) const {
        std::vector<Vertex> out;
        const auto& s = slot_.at(p);
        if (s.block == npos) return out;
        const auto& blk = blocks_[s.block];
        for (std::size_t i = 0; i < blk.negatives.size(); ++i)
            if (blk.at(i, s.index) != Cell::Removed) out.push_back(blk.negatives[i]);
        return out;
    }

    friend bool operator==(const CandidateMatrix& a, const CandidateMatrix& b) {
        return a.surviving() == b.surviving() && a.committed() == b.committed();
    }

private:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    struct Slot {
        std::size_t block = npos;
        std::size_t index = 0;
    };

    Cell& cell(const AxiomLink& l) {
        return blocks_[slot_[l.negative].block].at(slot_[l.negative].index, slot_[l.positive].index);
    }

    [[nodiscard]] std::vector<AxiomLink> collect(bool open, bool committed) const {
        std::vector<AxiomLink> out;
        for (const auto& blk : blocks_)
            for (std::size_t i = 0; i < blk.negatives.size(); ++i)
                for (std::size_t j = 0; j < blk.positives.size(); ++j) {
                    Cell c = blk.at(i, j);
                    if ((c == Cell::Open && open) || (c == Cell::Committed && committed))
                        out.push_back({blk.negatives[i], blk.positives[j]});
                }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<AtomBlock> blocks_;
    std::vector<Slot> slot_;
};

/// Every same-name negative/positive pair, all open.
[[nodiscard]] inline CandidateMatrix candidate_links(const ProofFrame& frame) {
    std::vector<AtomBlock> blocks;
    for (const auto& occ : frame.atoms) {
        auto it = std::find_if(blocks.begin(), blocks.end(), [&](const AtomBlock& b) { return b.name == occ.name; });
        if (it == blocks.end()) {
            blocks.push_back({occ.name, {}, {}, {}});
            it = std::prev(blocks.end());
        }
        (occ.polarity == Polarity::Negative ? it->negatives : it->positives).push_back(occ.id);
    }
    for (auto& b : blocks) b.cells.assign(b.negatives.size() * b.positives.size(), Cell::Open);
    return CandidateMatrix(std::move(blocks), frame.vertex_count());
}

class UnbalancedFrame : public std::invalid_argument {
public:
    explicit UnbalancedFrame(const std::string& atom)
        : std::invalid_argument("atom '" + atom + "' has unequal negative and positive occurrences"),
          atom_(atom) {}
    [[nodiscard]] const std::string& atom() const noexcept { return atom_; }

private:
    std::string atom_;
};

/// Number of complete linkings: the product of n! over atom names.
[[nodiscard]] inline std::uint64_t count_linkings(const ProofFrame& frame) {
    std::uint64_t total = 1;
    const auto cands = candidate_links(frame);
    for (const auto& blk : cands.blocks()) {
        if (blk.negatives.size() != blk.positives.size()) throw UnbalancedFrame(blk.name);
        for (std::uint64_t k = 2; k <= blk.negatives.size(); ++k) {
            if (total > std::numeric_limits<std::uint64_t>::max() / k)
                throw std::overflow_error("linking count exceeds 64 bits");
            total *= k;
        }
    }
    return total;
}

/// Structural essential-net edges plus one negative -> positive edge per link in `partial`.
[[nodiscard]] inline Digraph essential_graph(const ProofFrame& frame, const Linking& partial) {
    Digraph g{frame.vertex_count(), frame.ess_edges};
    for (const auto& l : partial) g.edges.push_back({l.negative, l.positive});
    return g;
}

[[nodiscard]] inline bool is_complete(const ProofFrame& frame, const Linking& linking) {
    std::vector<int> seen(frame.vertex_count() + 1, 0);
    for (const auto& l : linking) {
        if (!frame.is_atom(l.negative) || !frame.is_atom(l.positive)) return false;
        const auto& n = frame.atom(l.negative);
        const auto& p = frame.atom(l.positive);
        if (n.polarity != Polarity::Negative || p.polarity != Polarity::Positive || n.name != p.name) return false;
        if (seen[l.negative]++ || seen[l.positive]++) return false;
    }
    return linking.size() * 2 == frame.atoms.size();
}

} // namespace prooflink
