// Black-box tests of the kdual executable.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <functional>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <regex>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run kdual(const std::string& args) {
    std::string cmd = std::string(KDUAL_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string data(const std::string& f) { return std::string(KDUAL_DATA_DIR) + "/" + f; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name, const std::string& text) {
    fs::path p = fs::temp_directory_path() / ("kdual_cli_" + name + ".json");
    std::ofstream(p) << text;
    return p;
}

std::multiset<std::string> integers(const std::string& s) {
    std::multiset<std::string> out;
    static const std::regex num("-?[0-9]+");
    for (auto it = std::sregex_iterator(s.begin(), s.end(), num); it != std::sregex_iterator(); ++it)
        out.insert(it->str());
    return out;
}

}  // namespace

TEST(Cli, HochschildOfDualNumbers) {
    auto r = kdual("hh " + data("dual_numbers_f3.json") + " --out json");
    ASSERT_EQ(r.status, 0) << r.out;
    auto j = json::parse(r.out);
    std::vector<int> dims;
    for (int n = 0; n <= 4; ++n) dims.push_back(j["dims"]["H^" + std::to_string(n)]);
    EXPECT_EQ(dims, (std::vector<int>{2, 1, 1, 1, 1}));
}

TEST(Cli, GoldenOutputs) {
    const fs::path golden = fs::path(KDUAL_GOLDEN_DIR);
    EXPECT_EQ(kdual("hh " + data("dual_numbers_f3.json")).out, slurp(golden / "hh_dual_numbers.txt"));
    EXPECT_EQ(kdual("ez-check " + data("ez_pair_q.json") + " C E").out, slurp(golden / "ez_pair.txt"));
    EXPECT_EQ(kdual("hh-vs-mc " + data("a2_q.json") + " --out json").out, slurp(golden / "hh_vs_mc_a2.json"));
}

TEST(Cli, EzPairReportsEqualDims) {
    auto r = kdual("ez-check " + data("ez_pair_q.json") + " C E --out json");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(json::parse(r.out)["verdict"], "dims equal on window");
}

TEST(Cli, ValidatesEveryCorpusFile) {
    std::size_t files = 0;
    for (auto& e : fs::directory_iterator(KDUAL_DATA_DIR)) {
        if (e.path().extension() != ".json") continue;
        ++files;
        auto r = kdual("validate " + e.path().string() + " --out json");
        EXPECT_EQ(r.status, 0) << e.path();
        for (auto& item : json::parse(r.out)["entities"]) EXPECT_TRUE(item["ok"].get<bool>()) << item.dump();
    }
    EXPECT_GE(files, 5u);
}

TEST(Cli, StructuredAndHumanOutputCarryTheSameNumbers) {
    const std::vector<std::string> runs = {
        "hh " + data("dual_numbers_f3.json"),
        "hh " + data("dg_f3.json") + " T --degree-window -1..1",
        "hh-vs-mc " + data("dg_f3.json") + " P",
        "ez-check " + data("ez_pair_q.json") + " C Tw",
        "ez-check " + data("curved_f3.json") + " U V",
        "bar " + data("a2_q.json") + " A2",
        "cobar " + data("a2_q.json") + " A2dual --degree-window -2..2",
        "conv " + data("dual_numbers_f3.json") + " W A",
        "mc-enum " + data("dual_numbers_f3.json") + " W A",
        "mc-cat " + data("dual_numbers_f3.json") + " W A",
        "ihom " + data("random_f2.json") + " R0 K --weight-cap 2",
        "adjoint-check " + data("random_f2.json") + " R0 K",
        "validate " + data("random_f2.json") + " --random 5 --seed 11",
    };
    for (auto& args : runs) {
        auto text = kdual(args);
        auto structured = kdual(args + " --out json");
        ASSERT_EQ(text.status, 0) << args;
        ASSERT_EQ(structured.status, 0) << args;
        // every value in the structured form, rendered, shows up in the text
        auto j = json::parse(structured.out);
        std::string flat;
        std::function<void(const json&)> walk = [&](const json& v) {
            if (v.is_structured())
                for (auto& [k, e] : v.items()) {
                    if (v.is_object()) flat += k + " ";
                    walk(e);
                }
            else
                flat += (v.is_string() ? v.get<std::string>() : v.dump()) + " ";
        };
        walk(j);
        EXPECT_EQ(integers(text.out), integers(flat)) << args;
    }
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(kdual("hh " + data("a2_q.json")).status, 0);
    // inexact: the cobar hom complex of a loop with degree-0 letters
    auto inexact = kdual("cobar " + data("dual_numbers_f3.json") + " W --degree-window 0..3 --out json");
    EXPECT_EQ(inexact.status, 2);
    EXPECT_EQ(json::parse(inexact.out)["error"]["kind"], "inexact window");
    // divergent Hochschild window without stabilization, then with it
    const auto loop = scratch("loop", R"({"field": "q", "categories": [{"name": "L", "objects": ["o"],
        "arrows": [{"name": "1", "src": "o", "tgt": "o", "degree": 0}, {"name": "x", "src": "o", "tgt": "o", "degree": 1}],
        "units": {"o": {"1": "1"}}, "composition": [["1", "1", "1", "1"], ["1", "x", "x", "1"], ["x", "1", "x", "1"]]}]})");
    EXPECT_EQ(kdual("hh " + loop.string() + " --degree-window 0..2").status, 2);
    auto stab = kdual("hh " + loop.string() + " --degree-window 0..2 --mode stabilize:4 --out json");
    EXPECT_EQ(stab.status, 0);
    EXPECT_EQ(json::parse(stab.out)["mode"], "stabilize");

    // parse errors
    const auto syntax = scratch("syntax", "{\n  \"field\": \"q\",\n  \"categories\": [}\n");
    auto parse = kdual("validate " + syntax.string() + " --out json");
    EXPECT_EQ(parse.status, 3);
    auto err = json::parse(parse.out)["error"];
    EXPECT_EQ(err["kind"], "parse");
    EXPECT_EQ(err["line"], 3);
    EXPECT_EQ(kdual("hh " + data("dual_numbers_f3.json") + " --field q").status, 3);
    EXPECT_EQ(kdual("hh " + data("a2_q.json") + " --degree-window 3..1").status, 3);
    EXPECT_EQ(kdual("frobnicate " + data("a2_q.json")).status, 3);
    EXPECT_EQ(kdual("hh " + data("no_such_file.json")).status, 3);

    // validation failures
    const auto broken = scratch("broken", R"({"field": "f3", "categories": [{"name": "N", "objects": ["o"],
        "arrows": [{"name": "1", "src": "o", "tgt": "o", "degree": 0}, {"name": "x", "src": "o", "tgt": "o", "degree": 0}],
        "units": {"o": {"1": "1"}}, "composition": [["1", "1", "1", "1"], ["1", "x", "x", "1"], ["x", "1", "x", "2"]]}]})");
    auto bad = kdual("validate " + broken.string() + " --out json");
    EXPECT_EQ(bad.status, 1);
    EXPECT_FALSE(json::parse(bad.out)["entities"][0]["ok"].get<bool>());
    EXPECT_EQ(kdual("adjoint-check " + data("a2_q.json") + " A2dual A2").status, 1);
    EXPECT_EQ(kdual("hh " + data("a2_q.json") + " Nope").status, 1);
}

TEST(Cli, FieldFlagAppliesToUndeclaredDocuments) {
    const auto doc = scratch("nofield", R"({"categories": [{"name": "D", "objects": ["o"],
        "arrows": [{"name": "1", "src": "o", "tgt": "o", "degree": 0}, {"name": "x", "src": "o", "tgt": "o", "degree": 0}],
        "units": {"o": {"1": "1"}}, "composition": [["1", "1", "1", "1"], ["1", "x", "x", "1"], ["x", "1", "x", "1"]]}]})");
    auto q = json::parse(kdual("hh " + doc.string() + " --out json").out);
    EXPECT_EQ(q["field"], "q");
    auto f3 = json::parse(kdual("hh " + doc.string() + " --field f3 --out json").out);
    EXPECT_EQ(f3["field"], "f3");
    EXPECT_EQ(f3["dims"], json::parse(kdual("hh " + data("dual_numbers_f3.json") + " --out json").out)["dims"]);
}

TEST(Cli, MaterializedDocumentsReparse) {
    for (std::string args : {"materialize " + data("a2_q.json") + " A2", "materialize " + data("dual_numbers_f3.json") +
                                                                             " W --weight-cap 2",
                             "materialize " + data("dg_f3.json") + " P --weight-cap 2"}) {
        auto r = kdual(args + " --out json");
        ASSERT_EQ(r.status, 0) << args;
        auto doc = scratch("materialized", json::parse(r.out)["document"].dump());
        EXPECT_EQ(kdual("validate " + doc.string()).status, 0) << args;
    }
}
