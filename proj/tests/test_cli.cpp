#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "twistlab/cli.hpp"

using namespace twistlab;
using cli::Json;

namespace {

Json run(const std::string& verb, const char* args) { return cli::run_command(verb, Json::parse(args)); }

struct Process {
    int status;
    std::string out;
};

Process shell(const std::string& command) {
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return {-1, {}};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string binary() { return TWISTLAB_BINARY; }

std::string quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

std::string temp_file(const std::string& name, const std::string& content) {
    const std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST(RunCommand, WorkedExamples) {
    EXPECT_EQ(run("cf.expand", R"J({"theta":"sqrt(2)"})J"), Json::parse(R"J({"preperiod":[1],"period":[2]})J"));
    EXPECT_EQ(run("curve.j", R"J({"A":"1","B":"0"})J"), Json::parse(R"J({"j":"1728"})J"));
    const Json m = run("torus.morita", R"J({"theta1":"sqrt(2)","theta2":"(1+sqrt(5))/2"})J");
    EXPECT_EQ(m["equivalent"], false);
    EXPECT_TRUE(m["witness"].is_null());
}

TEST(RunCommand, EveryVerbAnswers) {
    EXPECT_EQ(run("cf.expand", R"J({"theta":"355/113"})J"), Json::parse(R"J({"terms":[3,7,16]})J"));
    EXPECT_EQ(run("cf.value", R"J({"preperiod":[],"period":[1]})J")["value"], "(1+sqrt(5))/2");
    EXPECT_EQ(run("cf.value", R"J({"text":"[1; (2)]"})J")["value"], "sqrt(2)");
    EXPECT_EQ(run("cf.convergents", R"J({"theta":"sqrt(2)","count":4})J")["convergents"][3],
              Json::parse(R"J({"index":3,"p":"17","q":"12"})J"));
    const Json w = run("torus.morita", R"J({"theta1":"sqrt(2)","theta2":"1+sqrt(2)"})J");
    EXPECT_EQ(w["witness"], Json::parse("[[1,1],[0,1]]"));
    EXPECT_EQ(w["det"], 1);
    EXPECT_EQ(run("torus.morita", R"J({"theta1":"sqrt(2)","theta2":"(2+sqrt(2))/2","sl2":true})J")["det"], 1);
    EXPECT_EQ(run("torus.iso", R"J({"theta1":"sqrt(2)","theta2":"1+sqrt(2)"})J")["isomorphic"], false);
    EXPECT_EQ(run("torus.invariant", R"J({"theta":"sqrt(7)"})J")["invariant"], Json::parse("[1,1,1,4]"));
    const Json g = run("dimgroup.from-period", R"J({"period":[1,2]})J");
    EXPECT_EQ(g["phi"], Json::parse("[[3,1],[2,1]]"));
    EXPECT_EQ(g["slope"], "(1+sqrt(3))/2");
    EXPECT_EQ(run("dimgroup.positive", R"J({"period":[1],"element":{"stage":0,"vector":[1,-1]}})J")["verdict"],
              "strictly-positive");
    EXPECT_EQ(run("dimgroup.compare",
                  R"J({"period":[1],"e1":{"stage":0,"vector":[2,1]},"e2":{"stage":1,"vector":[2,1]}})J")["order"],
              "greater");
    EXPECT_EQ(run("curve.twist", R"J({"A":"1","B":"1","t":"2"})J"), Json::parse(R"J({"A":"4","B":"8"})J"));
    const Json iso = run("curve.iso", R"J({"E1":{"A":"1","B":"1"},"E2":{"A":"16","B":"64"}})J");
    EXPECT_EQ(iso["q_isomorphic"], true);
    EXPECT_EQ(iso["u"], "2");
    EXPECT_EQ(run("curve.twist-between", R"J({"E1":{"A":"1","B":"1"},"E2":{"A":4,"B":8}})J")["t"], "2");
}

TEST(RunCommand, ErrorsCarryKinds) {
    auto kind_of = [](const std::string& verb, const char* args) {
        try {
            run(verb, args);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::precondition; // sentinel: nothing thrown
    };
    EXPECT_EQ(kind_of("cf.nope", "{}"), ErrorKind::usage);
    EXPECT_EQ(kind_of("cf.expand", "{}"), ErrorKind::usage);
    EXPECT_EQ(kind_of("cf.expand", R"J({"theta":"(1+sqrt(5)/2"})J"), ErrorKind::parse);
    EXPECT_EQ(kind_of("torus.invariant", R"J({"theta":"3/2"})J"), ErrorKind::rational_input);
    EXPECT_EQ(kind_of("curve.j", R"J({"A":"-3","B":"2"})J"), ErrorKind::singular);
    EXPECT_EQ(kind_of("curve.twist", R"J({"A":"1","B":"1","t":"0"})J"), ErrorKind::invalid_argument);
}

TEST(RunCommand, PrintedValuesReparse) {
    const Json v = run("cf.value", R"J({"text":"[2, 1; (3, 2)]"})J");
    const auto x = parse_surd(v["value"].get<std::string>());
    const Json args{{"theta", v["value"]}};
    EXPECT_EQ(cli::run_command("cf.expand", args), cli::to_json(expand_surd(x)));
    EXPECT_EQ(to_string(expand_surd(x)), v["text"].get<std::string>());
}

TEST(Batch, ErrorsAreIsolatedAndOrderIsKept) {
    const Json req = Json::parse(R"J([
        {"id":"a","verb":"cf.expand","args":{"theta":"sqrt(2)"}},
        {"id":"b","verb":"nope","args":{}},
        {"id":"c","verb":"curve.j","args":{"A":"0","B":"1"}}
    ])J");
    const Json out = cli::run_batch(cli::parse_batch(req), false);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0]["status"], "ok");
    EXPECT_EQ(out[1]["status"], "error");
    EXPECT_EQ(out[1]["kind"], "usage");
    EXPECT_EQ(out[2]["result"]["j"], "0");
    EXPECT_EQ(cli::run_batch(cli::parse_batch(Json::array()), true), Json::array());
}

TEST(Batch, ParallelMatchesSerial) {
    Json req = Json::array();
    for (int d = 2; d < 120; ++d) {
        req.push_back(Json{{"id", "x" + std::to_string(d)}, {"verb", "torus.invariant"},
                           {"args", Json{{"theta", "sqrt(" + std::to_string(d) + ")"}}}});
    }
    const auto entries = cli::parse_batch(req);
    EXPECT_EQ(cli::run_batch(entries, true).dump(), cli::run_batch(entries, false).dump());
}

TEST(Batch, MalformedRequestsAreRejectedWhole) {
    for (const char* bad : {R"J({"id":"a"})J", R"J([1])J", R"J([{"id":"a"}])J", R"J([{"id":"a","verb":"cf.expand","args":[]}])J",
                            R"J([{"id":"a","verb":"x"},{"id":"a","verb":"y"}])J"}) {
        EXPECT_THROW(cli::parse_batch(Json::parse(bad)), Error) << bad;
    }
}

TEST(Binary, ExitCodes) {
    const auto ok = shell(binary() + " cf.expand " + quote(R"J({"theta":"sqrt(2)"})J"));
    EXPECT_EQ(ok.status, 0);
    EXPECT_EQ(Json::parse(ok.out), Json::parse(R"J({"preperiod":[1],"period":[2]})J"));

    EXPECT_EQ(shell(binary() + " no.such.verb 2>/dev/null").status, 1);
    EXPECT_EQ(shell(binary() + " cf.expand " + quote("{not json") + " 2>/dev/null").status, 1);
    EXPECT_EQ(shell(binary() + " cf.expand " + quote(R"J({"theta":"(1+sqrt(5)/2"})J") + " 2>/dev/null").status, 1);
    EXPECT_EQ(shell(binary() + " 2>/dev/null").status, 1);

    const auto dom = shell(binary() + " torus.invariant " + quote(R"J({"theta":"3/2"})J"));
    EXPECT_EQ(dom.status, 2);
    const Json err = Json::parse(dom.out);
    EXPECT_EQ(err["kind"], "rational_input");
    EXPECT_TRUE(err.contains("message"));
}

TEST(Binary, BatchFileAndParallelFlag) {
    const std::string path = temp_file("twistlab_batch.json", R"J([
        {"id":"1","verb":"curve.iso","args":{"E1":{"A":"1","B":"1"},"E2":{"A":"4","B":"8"}}},
        {"id":"2","verb":"torus.iso","args":{"theta1":"3/2","theta2":"sqrt(2)"}},
        {"id":"3","verb":"dimgroup.from-period","args":{"period":[1,1]}}
    ])J");
    const auto serial = shell(binary() + " --in " + quote(path));
    const auto par = shell(binary() + " --in " + quote(path) + " --parallel");
    EXPECT_EQ(serial.status, 0);
    EXPECT_EQ(par.status, 0);
    EXPECT_EQ(serial.out, par.out);
    const Json out = Json::parse(serial.out);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0]["result"]["c_isomorphic"], true);
    EXPECT_EQ(out[0]["result"]["q_isomorphic"], false);
    EXPECT_EQ(out[1]["status"], "error");
    EXPECT_EQ(out[2]["id"], "3");

    const std::string bad = temp_file("twistlab_bad.json", R"J({"not":"an array"})J");
    EXPECT_EQ(shell(binary() + " --in " + quote(bad) + " 2>/dev/null").status, 1);
}

TEST(Binary, IterationCapFromEnvironment) {
    // Rank 3 is decided by iteration; (1, 0, 0) needs two pushes.
    const std::string args = quote(R"J({"phi":[[1,1,0],[0,1,1],[1,0,1]],"element":{"vector":[1,0,0]}})J");
    const auto capped = shell("TWISTLAB_ITER_CAP=1 " + binary() + " dimgroup.positive " + args);
    const auto full = shell(binary() + " dimgroup.positive " + args);
    EXPECT_EQ(capped.status, 0);
    EXPECT_EQ(full.status, 0);
    EXPECT_EQ(Json::parse(capped.out)["verdict"], "infinitesimal-undecided");
    EXPECT_EQ(Json::parse(full.out)["verdict"], "strictly-positive");
    EXPECT_EQ(shell("TWISTLAB_ITER_CAP=abc " + binary() + " curve.j " + quote(R"J({"A":"1","B":"0"})J") + " 2>/dev/null")
                  .status,
              1);
}
