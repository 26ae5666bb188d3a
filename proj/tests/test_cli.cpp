#include "prooflink/cli.hpp"
#include "prooflink/io.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace prooflink;

namespace {

const std::string kWorked = "s/(np\\s), (s/(np\\s))\\s |- s";
const std::string kQuantifiers = "s/(np\\s), (np\\s)/np, (s/np)\\s |- s";

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(PROOFLINK_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& contents) {
    auto path = std::filesystem::temp_directory_path() / ("prooflink_test_" + name);
    std::ofstream(path) << contents;
    return path.string();
}

} // namespace

TEST(CliProve, WorkedExampleText) {
    auto r = run({"prove", kWorked});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("proof 1: s1-s5 s2-s4 s3-s6 np7-np8"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("proof 2: s1-s6 s2-s5 s3-s4 np7-np8"), std::string::npos);
    EXPECT_NE(r.out.find("2 proofs"), std::string::npos);
}

TEST(CliProve, UnprovableAndBadInput) {
    EXPECT_EQ(run({"prove", "np |- s"}).code, 1);
    auto bad = run({"prove", "s/(np |- s"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("position"), std::string::npos);
    EXPECT_NE(bad.err.find('^'), std::string::npos);
    EXPECT_EQ(run({"prove"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"prove", "s |- s", "--format", "xml"}).code, 2);
}

TEST(CliProve, JsonSchemaAndRoundTrip) {
    auto r = run({"prove", "s |- s", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["sequent"], "s |- s");
    ASSERT_EQ(j["proofs"].size(), 1u);
    EXPECT_EQ(j["proofs"][0]["linking"], nlohmann::json::parse(R"([["s1","s2"]])"));
    EXPECT_TRUE(j["proofs"][0]["weight"].is_number_integer());
    EXPECT_EQ(j["proofs"][0]["valid"], true);
    EXPECT_EQ(j["count"], 1);

    auto worked = nlohmann::json::parse(run({"prove", kWorked, "--format", "json", "--show-matrix"}).out);
    auto rec = worked.get<io::OutputRecord>();
    EXPECT_EQ(nlohmann::json(rec), worked);
    EXPECT_EQ(rec.count, 2u);
    EXPECT_EQ(rec.matrices.size(), 2u);
}

TEST(CliProve, ShowMatrixUsesNegativeRows) {
    auto r = run({"prove", kWorked, "--show-matrix"});
    ASSERT_EQ(r.code, 0);
    auto pruned = r.out.substr(r.out.find("pruned:"));
    EXPECT_NE(pruned.find("   s4 s5 s6 \ns1 .  x  x  \ns2 x  x  .  \ns3 x  .  x  \n"), std::string::npos) << pruned;
    auto before = r.out.substr(r.out.find("candidates:"));
    EXPECT_NE(before.find("s1 x  x  x  \n"), std::string::npos);
}

TEST(CliProve, PlanarMaxAndRank) {
    EXPECT_NE(run({"prove", kQuantifiers}).out.find("4 proofs"), std::string::npos);
    EXPECT_NE(run({"prove", kQuantifiers, "--planar"}).out.find("2 proofs"), std::string::npos);
    EXPECT_NE(run({"prove", kWorked, "--max", "1"}).out.find("1 proof\n"), std::string::npos);
    auto ranked = run({"prove", kQuantifiers, "--rank"}).out;
    EXPECT_NE(ranked.find("proof 1: s1-s6 s2-s5 s3-s4 np7-np9 np8-np10  (weight 13)"), std::string::npos) << ranked;
}

TEST(CliProve, TraceGoesToStderr) {
    auto r = run({"prove", kWorked, "--trace"});
    EXPECT_NE(r.err.find("forced np7-np8"), std::string::npos);
    EXPECT_EQ(r.out.find("forced"), std::string::npos);
}

TEST(CliProve, DotExport) {
    auto r = run({"prove", "s |- s", "--format", "dot"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "digraph proof1 {\n"
                     "  v1 [label=\"s 1\"];\n"
                     "  v2 [label=\"s 2\", shape=doublecircle];\n"
                     "  v1 -> v2 [style=dashed];\n"
                     "}\n");

    auto nets = prove(parse_sequent(kWorked));
    auto dot = io::export_dot(nets.front());
    EXPECT_EQ(dot, io::export_dot(nets.front()));
    std::size_t nodes = 0, dashed = 0, pos = 0;
    while ((pos = dot.find("[label=", pos)) != std::string::npos) ++nodes, ++pos;
    pos = 0;
    while ((pos = dot.find("style=dashed", pos)) != std::string::npos) ++dashed, ++pos;
    EXPECT_EQ(nodes, 13u);
    EXPECT_EQ(dashed, 4u);
    EXPECT_NE(dot.find("v1 -> v5 [style=dashed]"), std::string::npos);
    EXPECT_NE(dot.find("(s/(np\\\\s))\\\\s 13"), std::string::npos) << dot;
}

TEST(CliKbest, WorkedExampleUnpruned) {
    auto r = run({"kbest", kWorked, "-k", "6", "--no-prune", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    auto rec = nlohmann::json::parse(r.out).get<io::OutputRecord>();
    ASSERT_EQ(rec.proofs.size(), 6u);
    EXPECT_EQ(rec.count, 2u);
    EXPECT_EQ(std::count_if(rec.proofs.begin(), rec.proofs.end(), [](const auto& p) { return p.valid; }), 2);
    for (std::size_t i = 1; i < 6; ++i) EXPECT_LE(*rec.proofs[i - 1].weight, *rec.proofs[i].weight);
}

TEST(CliKbest, CostFileFixture) {
    auto r = run({"kbest", "-k", "3", "--cost-file", data("quantifier_s_block.cost")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("1. weight 11  r1-c1 r2-c3 r3-c2\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("2. weight 19"), std::string::npos);
    EXPECT_EQ(r.out.find("3. weight"), std::string::npos);
    EXPECT_NE(r.out.find("2 ranked linkings"), std::string::npos);
}

TEST(CliKbest, CostFileWithSequent) {
    auto path = temp_file("axiom.cost", "5\n");
    auto r = run({"kbest", "s |- s", "-k", "1", "--cost-file", path});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("1. weight 5  s1-s2  valid"), std::string::npos) << r.out;
    EXPECT_EQ(run({"kbest", kWorked, "-k", "1", "--cost-file", path}).code, 2);
}

TEST(CliKbest, SingleAndErrors) {
    auto r = run({"kbest", "s |- s", "-k", "1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("1. weight 1  s1-s2  valid"), std::string::npos);
    EXPECT_EQ(run({"kbest", "s |- s", "-k", "0"}).code, 2);
    EXPECT_EQ(run({"kbest", "-k", "2"}).code, 2);
    EXPECT_EQ(run({"kbest", "np |- s", "-k", "2"}).code, 1);
    EXPECT_EQ(run({"kbest", "-k", "2", "--cost-file", temp_file("bad.cost", "1 x\n")}).code, 2);
    EXPECT_EQ(run({"kbest", "-k", "2", "--cost-file", "/nonexistent/file"}).code, 2);
}

TEST(CliParse, QuantifierSentence) {
    auto r = run({"parse", "someone loves everyone", "--lexicon", data("someone_loves_everyone.lex"), "--goal", "s"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("4 proofs"), std::string::npos) << r.out;
    auto planar = run({"parse", "someone loves everyone", "--lexicon", data("someone_loves_everyone.lex"), "--goal",
                       "s", "--planar", "--format", "json"});
    auto j = nlohmann::json::parse(planar.out);
    EXPECT_EQ(j["count"], 2);
    EXPECT_EQ(j["results"][0]["sequent"], kQuantifiers);
}

TEST(CliParse, EmptySentenceAndErrors) {
    auto lex = data("someone_loves_everyone.lex");
    EXPECT_EQ(run({"parse", "", "--lexicon", lex, "--goal", "s"}).code, 1);
    auto unknown = run({"parse", "someone hates everyone", "--lexicon", lex, "--goal", "s"});
    EXPECT_EQ(unknown.code, 2);
    EXPECT_NE(unknown.err.find("hates"), std::string::npos);
    EXPECT_EQ(run({"parse", "alice", "--lexicon", lex, "--goal", "s/"}).code, 2);
    EXPECT_EQ(run({"parse", "alice", "--lexicon", temp_file("bad.lex", "alice np\n"), "--goal", "s"}).code, 2);
}

TEST(Lexicon, AlternativesAccumulate) {
    std::istringstream in("# comment\n\nbank: n\nbank: n/n  # second reading\nrun: np\\s\n");
    auto lex = io::parse_lexicon(in);
    ASSERT_EQ(lex.at("bank").size(), 2u);
    EXPECT_EQ(to_string(lex.at("bank")[1]), "n/n");
    auto seqs = io::sentence_sequents(lex, {"bank", "run"}, parse_formula("s"));
    EXPECT_EQ(seqs.size(), 2u);
    EXPECT_EQ(to_string(seqs[1]), "n/n, np\\s |- s");
    EXPECT_EQ(io::sentence_sequents(lex, {}, parse_formula("s")).size(), 1u);
    EXPECT_THROW((void)io::sentence_sequents(lex, {"swim"}, parse_formula("s")), io::UnknownWord);
}

TEST(CostFile, Parsing) {
    std::istringstream in("# header\n1 inf\n\n2 3 # trailing\n");
    auto m = io::parse_cost_matrix(in);
    ASSERT_EQ(m.rows(), 2u);
    EXPECT_TRUE(m.at(0, 1).is_infinite());
    EXPECT_EQ(m.at(1, 1), Weight(3));
    std::istringstream ragged("1 2\n3\n");
    EXPECT_THROW((void)io::parse_cost_matrix(ragged), io::InputError);
    std::istringstream negative("-1\n");
    EXPECT_THROW((void)io::parse_cost_matrix(negative), io::InputError);
}

TEST(CliEnvironment, OracleBoundOverride) {
    ::setenv("PROOFLINK_ORACLE_BOUND", "0", 1);
    EXPECT_EQ(run({"prove", kWorked}).code, 0);
    ::setenv("PROOFLINK_ORACLE_BOUND", "lots", 1);
    EXPECT_EQ(run({"prove", kWorked}).code, 2);
    ::unsetenv("PROOFLINK_ORACLE_BOUND");
}

TEST(CliHelp, PrintsUsage) {
    auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("prove"), std::string::npos);
}
