#pragma once

#include "prooflink/frame.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <vector>

namespace prooflink {

/// v x v reachability flags over vertices 1..v.
class BoolMatrix {
public:
    BoolMatrix() = default;
    explicit BoolMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] bool operator()(Vertex a, Vertex b) const { return bits_[index(a, b)] != 0; }
    void set(Vertex a, Vertex b, bool value = true) { bits_[index(a, b)] = value ? 1 : 0; }

    friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

private:
    [[nodiscard]] std::size_t index(Vertex a, Vertex b) const { return (a - 1) * n_ + (b - 1); }

    std::size_t n_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// reach(a, b) iff a path of at least one edge leads from a to b.
[[nodiscard]] inline BoolMatrix bool_closure(const Digraph& g) {
    const std::size_t n = g.vertex_count;
    BoolMatrix m(n);
    for (const auto& e : g.edges) m.set(e.from, e.to);
    for (Vertex c = 1; c <= n; ++c)
        for (Vertex a = 1; a <= n; ++a) {
            if (!m(a, c)) continue;
            for (Vertex b = 1; b <= n; ++b)
                if (m(c, b)) m.set(a, b);
        }
    return m;
}

/// Sorted, duplicate-free set of candidate axiom links.
class ExclusionSet {
public:
    ExclusionSet() = default;
    ExclusionSet(std::initializer_list<AxiomLink> links) {
        for (const auto& l : links) codes_.push_back(encode(l));
        normalize();
    }
    explicit ExclusionSet(const std::vector<AxiomLink>& links) {
        for (const auto& l : links) codes_.push_back(encode(l));
        normalize();
    }

    [[nodiscard]] bool empty() const noexcept { return codes_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return codes_.size(); }
    [[nodiscard]] bool contains(const AxiomLink& l) const {
        return std::binary_search(codes_.begin(), codes_.end(), encode(l));
    }
    [[nodiscard]] std::vector<AxiomLink> links() const {
        std::vector<AxiomLink> out;
        out.reserve(codes_.size());
        for (auto c : codes_) out.push_back(decode(c));
        return out;
    }

    [[nodiscard]] friend ExclusionSet set_union(const ExclusionSet& a, const ExclusionSet& b) {
        ExclusionSet out;
        out.codes_.reserve(a.size() + b.size());
        std::set_union(a.codes_.begin(), a.codes_.end(), b.codes_.begin(), b.codes_.end(),
                       std::back_inserter(out.codes_));
        return out;
    }
    [[nodiscard]] friend ExclusionSet set_intersection(const ExclusionSet& a, const ExclusionSet& b) {
        ExclusionSet out;
        std::set_intersection(a.codes_.begin(), a.codes_.end(), b.codes_.begin(), b.codes_.end(),
                              std::back_inserter(out.codes_));
        return out;
    }

    /// this := this ∩ (x ∪ y), in one linear pass without materializing the union.
    /// Returns true if the set shrank.
    bool intersect_with_union(const ExclusionSet& x, const ExclusionSet& y) {
        auto xi = x.codes_.begin(), yi = y.codes_.begin();
        std::size_t kept = 0;
        for (auto code : codes_) {
            while (xi != x.codes_.end() && *xi < code) ++xi;
            while (yi != y.codes_.end() && *yi < code) ++yi;
            bool in_x = xi != x.codes_.end() && *xi == code;
            bool in_y = yi != y.codes_.end() && *yi == code;
            if (in_x || in_y) codes_[kept++] = code;
        }
        bool shrank = kept != codes_.size();
        codes_.resize(kept);
        return shrank;
    }

    friend bool operator==(const ExclusionSet&, const ExclusionSet&) = default;

private:
    static std::uint64_t encode(const AxiomLink& l) {
        return (static_cast<std::uint64_t>(l.negative) << 32) | static_cast<std::uint64_t>(l.positive);
    }
    static AxiomLink decode(std::uint64_t c) {
        return {static_cast<Vertex>(c >> 32), static_cast<Vertex>(c & 0xffffffffu)};
    }
    void normalize() {
        std::sort(codes_.begin(), codes_.end());
        codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
    }

    std::vector<std::uint64_t> codes_;
};

struct AnnotatedEdge {
    Vertex from = 0;
    Vertex to = 0;
    ExclusionSet excluded;  ///< candidates whose selection deletes this edge
};

struct AnnotatedGraph {
    std::size_t vertex_count = 0;
    std::vector<AnnotatedEdge> edges;

    [[nodiscard]] Digraph plain() const {
        Digraph g{vertex_count, {}};
        for (const auto& e : edges) g.edges.push_back({e.from, e.to});
        return g;
    }
};

/// Entry (a, b) is std::nullopt when no path exists, otherwise the set of
/// candidate links whose selection would destroy every path from a to b.
class ClosureMatrix {
public:
    using Entry = std::optional<ExclusionSet>;

    ClosureMatrix() = default;
    explicit ClosureMatrix(std::size_t n) : n_(n), entries_(n * n) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] const Entry& operator()(Vertex a, Vertex b) const { return entries_[index(a, b)]; }
    Entry& at(Vertex a, Vertex b) { return entries_[index(a, b)]; }

    friend bool operator==(const ClosureMatrix&, const ClosureMatrix&) = default;

private:
    [[nodiscard]] std::size_t index(Vertex a, Vertex b) const { return (a - 1) * n_ + (b - 1); }

    std::size_t n_ = 0;
    std::vector<Entry> entries_;
};

namespace detail {

/// One elimination round over all intermediate vertices. Returns true if any entry changed.
inline bool eliminate(ClosureMatrix& m) {
    const std::size_t n = m.size();
    bool changed = false;
    for (Vertex c = 1; c <= n; ++c)
        for (Vertex a = 1; a <= n; ++a) {
            if (!m(a, c)) continue;
            for (Vertex b = 1; b <= n; ++b) {
                // With a == c or b == c the update is the identity.
                if (a == c || b == c) continue;
                const auto& cb = m(c, b);
                if (!cb) continue;
                const auto& ac = m(a, c);
                auto& ab = m.at(a, b);
                if (!ab) {
                    ab = set_union(*ac, *cb);
                    changed = true;
                } else if (!ab->empty()) {
                    changed |= ab->intersect_with_union(*ac, *cb);
                }
            }
        }
    return changed;
}

} // namespace detail

/// Exclusion-set transitive closure:
///   entry(a,b) := entry(a,b) ∩ (entry(a,c) ∪ entry(c,b))
/// where a missing entry absorbs under ∩ and annihilates under ∪.
/// Parallel edges are merged by intersection.
[[nodiscard]] inline ClosureMatrix excl_closure(const AnnotatedGraph& g) {
    ClosureMatrix m(g.vertex_count);
    for (const auto& e : g.edges) {
        auto& entry = m.at(e.from, e.to);
        entry = entry ? set_intersection(*entry, e.excluded) : e.excluded;
    }
    detail::eliminate(m);
    return m;
}

} // namespace prooflink
