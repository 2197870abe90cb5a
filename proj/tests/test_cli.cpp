#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "treeds/io.hpp"

using namespace treeds;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run(const std::string& args) {
    std::string cmd = std::string(TREEDS_CLI) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string golden(const std::string& name) { return std::string(TREEDS_GOLDEN_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string scratch(const std::string& name, const std::string& text) {
    std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("validate --input " + golden("fix5.json")).code, 0);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("validate").code, 2);
    EXPECT_EQ(run("validate --input /nonexistent/file.json").code, 2);
    EXPECT_EQ(run("hull --input " + golden("fix5.json") + " --elements x,nobody").code, 2);
    EXPECT_EQ(run("chain --rounds 1 --max-size 1").code, 2);

    Json doc = tree_to_json(fixtures::fix1());
    doc["vertices"][1]["dset"]["special"] = Json::array();
    CliRun bad = run("validate --input " + scratch("nospecial.json", doc.dump()));
    EXPECT_EQ(bad.code, 1);
    EXPECT_FALSE(Json::parse(bad.out)["valid"].get<bool>());
    EXPECT_EQ(run("realize --input " + scratch("garbage.json", "{oops")).code, 1);

    // A relation dump that no tree realizes: reconstruct refuses, member says no.
    Json rel{{"domain", {"a", "b", "c"}}, {"L", {{"a", "b", "c"}, {"b", "a", "c"}}}};
    std::string relPath = scratch("twoapex.json", rel.dump());
    EXPECT_EQ(run("reconstruct --input " + relPath).code, 1);
    CliRun m = run("member --input " + relPath);
    EXPECT_EQ(m.code, 0);
    EXPECT_FALSE(Json::parse(m.out)["member"].get<bool>());
}

TEST(Cli, RealizeThenMemberRoundTrip) {
    CliRun r = run("realize --input " + golden("fix5.json"));
    ASSERT_EQ(r.code, 0);
    std::string path = scratch("fix5rel.json", r.out);
    CliRun m = run("member --input " + path);
    ASSERT_EQ(m.code, 0);
    Json j = Json::parse(m.out);
    ASSERT_TRUE(j["member"].get<bool>());
    CliRun iso = run("iso --inputs " + path + " " + scratch("fix5back.json", j["tree"].dump()));
    ASSERT_EQ(iso.code, 0);
    EXPECT_TRUE(Json::parse(iso.out)["isomorphic"].get<bool>());
}

TEST(Cli, DotSnapshotsAreByteIdentical) {
    for (const char* v : {"dsets", "structureTree", "combined"}) {
        CliRun a = run("dot --input " + golden("fix5.json") + " --view " + v);
        ASSERT_EQ(a.code, 0) << v;
        EXPECT_EQ(a.out, slurp(golden(std::string("fix5_") + v + ".dot"))) << v;
        EXPECT_EQ(a.out, run("dot --input " + golden("fix5.json") + " --view " + v).out) << v;
    }
    EXPECT_EQ(run("dot --input " + golden("fix5.json") + " --view sideways").code, 2);
}

TEST(Cli, CorpusMatchesGoldenCounts) {
    CliRun r = run("corpus --max-size 5 --direct --compare " + golden("corpus5.json"));
    ASSERT_EQ(r.code, 0) << r.out;
    Json j = Json::parse(r.out);
    EXPECT_TRUE(j["goldenAgrees"].get<bool>());
    EXPECT_TRUE(j["directEnumerationAgrees"].get<bool>());
}

TEST(Cli, SmallChainIsDeterministic) {
    std::string args = "chain --rounds 2 --max-size 10 --task-bound 3 --seed 5";
    CliRun a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    Json j = Json::parse(a.out);
    EXPECT_FALSE(j["approximation"].get<std::string>().empty());
    EXPECT_EQ(j["stages"].size(), 3u);
    EXPECT_LE(j["stages"].back()["size"].get<int>(), 10);
}

TEST(Cli, ExtendAmalgamateJep) {
    std::string a = scratch("fix2.json", serialize(fixtures::fix2()));
    CliRun c = run("extend --input " + a + " --element c");
    CliRun d = run("extend --input " + a + " --element d");
    ASSERT_EQ(c.code, 0);
    ASSERT_EQ(d.code, 0);
    Json jc = Json::parse(c.out), jd = Json::parse(d.out);
    ASSERT_EQ(jc["count"].get<int>(), 3);
    for (size_t i = 0; i < jc["extensions"].size(); ++i)
        for (size_t k = 0; k < jd["extensions"].size(); ++k) {
            std::string e1 = scratch("e1.json", jc["extensions"][i]["tree"].dump());
            std::string e2 = scratch("e2.json", jd["extensions"][k]["tree"].dump());
            CliRun m = run("amalgamate --inputs " + a + " " + e1 + " " + e2);
            ASSERT_EQ(m.code, 0) << i << " " << k;
            EXPECT_TRUE(Json::parse(m.out)["problems"].empty());
        }
    CliRun j = run("jep --inputs " + golden("fix5.json") + " " + a);
    ASSERT_EQ(j.code, 0);
    EXPECT_TRUE(Json::parse(j.out)["verified"].get<bool>());
}
