#include "prooflink/frame.hpp"
#include "prooflink/prover.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace prooflink;

namespace {

const char* const kWorked = "s/(np\\s), (s/(np\\s))\\s |- s";

ProofFrame frame_of(const char* text) { return unfold(parse_sequent(text)); }

std::size_t catalan(std::size_t n) {
    std::size_t c = 1;
    for (std::size_t k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
    return c;
}

} // namespace

TEST(Unfold, AxiomSequent) {
    auto f = frame_of("s |- s");
    EXPECT_EQ(f.stats.a, 1u);
    EXPECT_EQ(f.stats.h, 1u);
    EXPECT_EQ(f.stats.t, 0u);
    EXPECT_EQ(f.stats.p, 0u);
    EXPECT_EQ(f.vertex_count(), 2u);
    EXPECT_EQ(f.inputs, std::vector<Vertex>{1});
    EXPECT_EQ(f.output, 2u);
}

TEST(Unfold, WorkedExampleNumbering) {
    auto f = frame_of(kWorked);
    EXPECT_EQ(f.stats.a, 4u);
    EXPECT_EQ(f.stats.h, 2u);
    EXPECT_EQ(f.stats.t, 3u);
    EXPECT_EQ(f.stats.p, 2u);
    ASSERT_EQ(f.vertex_count(), 13u);

    const std::vector<std::pair<std::string, Polarity>> atoms = {
        {"s", Polarity::Negative},  {"s", Polarity::Negative},  {"s", Polarity::Negative},  {"s", Polarity::Positive},
        {"s", Polarity::Positive},  {"s", Polarity::Positive},  {"np", Polarity::Negative}, {"np", Polarity::Positive}};
    ASSERT_EQ(f.atoms.size(), atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        EXPECT_EQ(f.atoms[i].id, i + 1);
        EXPECT_EQ(f.atoms[i].name, atoms[i].first);
        EXPECT_EQ(f.atoms[i].polarity, atoms[i].second);
    }
    EXPECT_EQ(f.tag(9), "/9");
    EXPECT_EQ(to_string(f.vertex(13).formula), "(s/(np\\s))\\s");
    EXPECT_EQ(f.output, 6u);
    EXPECT_EQ(f.inputs, (std::vector<Vertex>{7, 9, 11, 13}));
}

TEST(Unfold, WorkedExamplePositions) {
    auto f = frame_of(kWorked);
    const std::vector<std::size_t> expected = {1, 5, 7, 2, 6, 0, 3, 4};  // s1..s6, np7, np8
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(f.atoms[i].position, expected[i]) << "atom " << i + 1;
}

TEST(Unfold, NameSlashExample) {
    auto f = frame_of("np, np\\s |- s");
    EXPECT_EQ(f.stats.a, 2u);
    EXPECT_EQ(f.stats.h, 2u);
    EXPECT_EQ(f.stats.t, 1u);
    EXPECT_EQ(f.stats.p, 0u);
    EXPECT_EQ(f.vertex_count(), 5u);
}

TEST(EssentialGraph, MatchesInitialGraphAdjacency) {
    auto f = frame_of(kWorked);
    auto g = essential_graph(f, {{7, 8}});
    std::set<Edge> got(g.edges.begin(), g.edges.end());
    const std::set<Edge> expected = {{4, 10}, {5, 12}, {7, 8}, {8, 2}, {9, 1}, {10, 1}, {11, 2}, {12, 3}, {13, 3}};
    EXPECT_EQ(got, expected);
    EXPECT_EQ(g.vertex_count, 13u);
    EXPECT_EQ(essential_graph(f, {}).edges.size(), 8u);
}

TEST(EssentialGraph, ProductOrientation) {
    // negative a*b: conclusion feeds both premisses; positive a*b: premisses feed the conclusion
    auto neg = frame_of("a*b |- b*a");
    // atoms a1 (neg), a2 (pos), b3 (neg), b4 (pos); compound vertices 5 (neg *), 6 (pos *)
    std::set<Edge> got(neg.ess_edges.begin(), neg.ess_edges.end());
    const std::set<Edge> expected = {{5, 1}, {5, 3}, {2, 6}, {4, 6}};
    EXPECT_EQ(got, expected);
    EXPECT_EQ(neg.stats.p, 1u);
    EXPECT_EQ(neg.stats.t, 1u);
}

TEST(CandidateLinks, Shapes) {
    auto one = candidate_links(frame_of("s |- s"));
    EXPECT_EQ(one.count(), 1u);

    auto worked = candidate_links(frame_of(kWorked));
    ASSERT_EQ(worked.blocks().size(), 2u);
    EXPECT_EQ(worked.blocks()[0].name, "s");
    EXPECT_EQ(worked.blocks()[0].negatives, (std::vector<Vertex>{1, 2, 3}));
    EXPECT_EQ(worked.blocks()[0].positives, (std::vector<Vertex>{4, 5, 6}));
    EXPECT_EQ(worked.blocks()[1].negatives, (std::vector<Vertex>{7}));
    EXPECT_EQ(worked.count(), 10u);

    auto two = candidate_links(frame_of("s, s\\s |- s"));
    EXPECT_EQ(two.count(), 4u);
}

TEST(CandidateLinks, CommitClearsRowAndColumn) {
    auto f = frame_of(kWorked);
    auto c = candidate_links(f);
    c.commit({1, 5});
    EXPECT_EQ(c.state(1, 5), Cell::Committed);
    EXPECT_EQ(c.row(1), std::vector<Vertex>{5});
    EXPECT_EQ(c.column(5), std::vector<Vertex>{1});
    EXPECT_EQ(c.row(2), (std::vector<Vertex>{4, 6}));
    EXPECT_EQ(c.committed(), (Linking{{1, 5}}));
    EXPECT_FALSE(c.admissible({1, 8}));
    EXPECT_THROW(c.commit({1, 4}), std::logic_error);
}

TEST(CountLinkings, Examples) {
    EXPECT_EQ(count_linkings(frame_of(kWorked)), 6u);
    EXPECT_EQ(count_linkings(frame_of("s |- s")), 1u);
    EXPECT_EQ(count_linkings(frame_of("s, s\\s, s\\s, s\\s |- s")), 24u);
    try {
        (void)count_linkings(frame_of("np |- s"));
        FAIL();
    } catch (const UnbalancedFrame& e) {
        EXPECT_EQ(e.atom(), "np");
    }
}

TEST(FrameProperties, StructuralIdentitiesOnRandomSequents) {
    oracles::SequentGenerator gen(11);
    for (int i = 0; i < 300; ++i) {
        auto seq = gen.next();
        auto f = unfold(seq);
        const auto& s = f.stats;
        SCOPED_TRACE(to_string(seq));
        EXPECT_EQ(s.p + s.h, s.t + 1);
        EXPECT_EQ(s.t + 1, s.a);
        EXPECT_EQ(f.vertex_count(), s.h + 1 + 2 * (s.t + s.p));
        EXPECT_LE(2 * s.t + s.p, f.ess_edges.size());
        EXPECT_LE(f.ess_edges.size() + s.a, 2 * (s.t + s.p) + s.a);

        std::vector<std::size_t> pos;
        for (const auto& a : f.atoms) pos.push_back(a.position);
        std::sort(pos.begin(), pos.end());
        for (std::size_t k = 0; k < pos.size(); ++k) EXPECT_EQ(pos[k], k);

        auto again = unfold(seq);
        EXPECT_EQ(again.ess_edges, f.ess_edges);
        EXPECT_EQ(again.inputs, f.inputs);
        for (std::size_t k = 0; k < f.atoms.size(); ++k) EXPECT_EQ(again.atoms[k].position, f.atoms[k].position);

        if (s.a <= 3) {
            EXPECT_EQ(oracles::all_linkings(f).size(), count_linkings(f));
        }
        EXPECT_LE(candidate_links(f).count(), s.a * s.a);
    }
}

TEST(FrameProperties, PlanarCountCanExceedSmallerCatalan) {
    // a, a\a |- a reads a- a+ a- a+; both the nested and the adjacent matching are planar
    auto f = frame_of("a, a\\a |- a");
    std::size_t planar = 0;
    for (const auto& l : oracles::all_linkings(f)) planar += is_planar(f, l);
    EXPECT_EQ(planar, 2u);
    EXPECT_GT(planar, catalan(f.stats.a - 1));
}

TEST(FrameProperties, PlanarMatchingsBoundedByCatalan) {
    oracles::SequentGenerator gen(5, {3, 7, 10, 1});
    for (int i = 0; i < 150; ++i) {
        auto f = unfold(gen.next());
        auto all = oracles::all_linkings(f);
        std::size_t planar = 0, brute = 0;
        for (const auto& l : all) {
            planar += is_planar(f, l);
            bool crossing = false;
            for (const auto& x : l)
                for (const auto& y : l) {
                    auto [i1, j1] = std::minmax(f.atom(x.negative).position, f.atom(x.positive).position);
                    auto [i2, j2] = std::minmax(f.atom(y.negative).position, f.atom(y.positive).position);
                    crossing |= i1 < i2 && i2 < j1 && j1 < j2;
                }
            brute += !crossing;
        }
        EXPECT_EQ(planar, brute);
        EXPECT_LE(planar, catalan(f.stats.a)) << to_string(f.sequent);
    }
}
