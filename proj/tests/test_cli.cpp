#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("hint_cli_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run(const std::string& args) {
    const std::string cmd = std::string(HINT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string run_capture(const std::string& args, int* exit_code = nullptr) {
    TempDir tmp;
    const fs::path out = tmp.path / "stdout.txt";
    const std::string cmd = std::string(HINT_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (exit_code) *exit_code = WEXITSTATUS(status);
    std::ifstream in(out);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("cli --help exits 0") {
    CHECK(run("--help") == 0);
    CHECK(run("cluster --help") == 0);
}

TEST_CASE("synth writes three files and is seed-deterministic") {
    TempDir a, b;
    REQUIRE(run("synth --k 3 --n1 30 --n2 20 --seed 11 --out " + (a.path / "d").string()) == 0);
    REQUIRE(fs::exists(a.path / "d" / "tweets.jsonl"));
    REQUIRE(fs::exists(a.path / "d" / "news.jsonl"));
    REQUIRE(fs::exists(a.path / "d" / "truth.csv"));
    REQUIRE(run("synth --k 3 --n1 30 --n2 20 --seed 11 --out " + (b.path / "d").string()) == 0);
    CHECK(slurp(a.path / "d" / "tweets.jsonl") == slurp(b.path / "d" / "tweets.jsonl"));
    CHECK(slurp(a.path / "d" / "news.jsonl") == slurp(b.path / "d" / "news.jsonl"));
    CHECK(slurp(a.path / "d" / "truth.csv") == slurp(b.path / "d" / "truth.csv"));
}

TEST_CASE("synth rejects out-of-range anchor rate with exit 2") {
    TempDir t;
    CHECK(run("synth --k 2 --n1 10 --n2 10 --anchor-rate 1.2 --out " + t.path.string()) == 2);
}

TEST_CASE("cluster produces result files and echoes the resolved config") {
    TempDir t;
    const std::string data = (t.path / "data").string();
    REQUIRE(run("synth --k 3 --n1 45 --n2 30 --seed 5 --anchor-rate 0.6 --out " + data) == 0);
    const std::string out = (t.path / "run").string();
    // --theta omitted: default 1.0 must be used and echoed
    REQUIRE(run("cluster --t1 " + data + "/tweets.jsonl --t2 " + data + "/news.jsonl --k1 3 --k2 3 --seed 7 --out " + out) == 0);
    REQUIRE(fs::exists(fs::path(out) / "result.json"));
    REQUIRE(fs::exists(fs::path(out) / "trace.csv"));
    REQUIRE(fs::exists(fs::path(out) / "h1.csv"));
    REQUIRE(fs::exists(fs::path(out) / "h2.csv"));
    const auto j = nlohmann::json::parse(slurp(fs::path(out) / "result.json"));
    CHECK(j["config"]["theta"].get<double>() == 1.0);
    CHECK(j["config"]["seed"].get<int>() == 7);
    CHECK(j["labels1"].size() == 45);
    CHECK(j["labels2"].size() == 30);
    std::ifstream trace(fs::path(out) / "trace.csv");
    std::string header;
    std::getline(trace, header);
    CHECK(header == "round,half,iter,objective,grad_norm,tau");
}

TEST_CASE("cluster with a missing input exits 2 and names the path") {
    int code = 0;
    const std::string msg = run_capture("cluster --t1 /nonexistent/x.jsonl --t2 /nonexistent/y.jsonl --k1 2 --k2 2", &code);
    CHECK(code == 2);
    CHECK(msg.find("/nonexistent/x.jsonl") != std::string::npos);
}

TEST_CASE("eval scores a result against truth; perfect labels give NMI 1") {
    TempDir t;
    // hand-built result whose labels equal the truth exactly
    nlohmann::json j;
    j["ids1"] = {"t0", "t1", "t2", "t3"};
    j["labels1"] = {0, 1, 0, 1};
    j["ids2"] = {"n0", "n1"};
    j["labels2"] = {0, 1};
    j["anchors"] = nlohmann::json::array({{0, 0}, {1, 1}});
    j["metrics"] = {{"inconsistency_d", 0.0}, {"normalized_inconsistency", 0.0}};
    std::ofstream(t.path / "result.json") << j.dump();
    std::ofstream(t.path / "truth.csv") << "collection,id,cluster\ntweet,t0,5\ntweet,t1,9\ntweet,t2,5\ntweet,t3,9\n"
                                        << "news,n0,1\nnews,n1,0\n";
    int code = 0;
    const std::string outp =
        run_capture("eval --result " + (t.path / "result.json").string() + " --truth " + (t.path / "truth.csv").string(), &code);
    REQUIRE(code == 0);
    const auto rep = nlohmann::json::parse(outp);
    CHECK(rep["nmi1"].get<double>() == 1.0);
    CHECK(rep["nmi2"].get<double>() == 1.0);
    CHECK(rep["f1_1"].get<double>() == 1.0);
}

TEST_CASE("eval reports the first mismatched id with exit 2") {
    TempDir t;
    nlohmann::json j;
    j["ids1"] = {"t0", "tX"};
    j["labels1"] = {0, 1};
    j["ids2"] = {"n0"};
    j["labels2"] = {0};
    std::ofstream(t.path / "result.json") << j.dump();
    std::ofstream(t.path / "truth.csv") << "collection,id,cluster\ntweet,t0,0\nnews,n0,0\n";
    int code = 0;
    const std::string msg =
        run_capture("eval --result " + (t.path / "result.json").string() + " --truth " + (t.path / "truth.csv").string(), &code);
    CHECK(code == 2);
    CHECK(msg.find("tX") != std::string::npos);
}

TEST_CASE("eval sweep emits one CSV row per theta") {
    TempDir t;
    const std::string data = (t.path / "data").string();
    REQUIRE(run("synth --k 2 --n1 20 --n2 14 --seed 9 --anchor-rate 0.6 --out " + data) == 0);
    int code = 0;
    const std::string outp = run_capture("eval --t1 " + data + "/tweets.jsonl --t2 " + data + "/news.jsonl --truth " + data +
                                             "/truth.csv --k1 2 --k2 2 --seed 4 --sweep theta=0:0.25:0.5",
                                         &code);
    REQUIRE(code == 0);
    int lines = 0;
    std::istringstream ss(outp);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "theta,nmi1,f1_1,nmi2,f1_2,cond_entropy,inconsistency_d,normalized_inconsistency");
    while (std::getline(ss, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 3);  // theta = 0, 0.25, 0.5
}

TEST_CASE("inspect dumps similarity, transition and count matrices") {
    TempDir t;
    const std::string data = (t.path / "data").string();
    REQUIRE(run("synth --k 2 --n1 12 --n2 8 --seed 3 --anchor-rate 0.5 --out " + data) == 0);
    const std::string out = (t.path / "insp").string();
    REQUIRE(run("inspect --t1 " + data + "/tweets.jsonl --t2 " + data + "/news.jsonl --counts --out " + out) == 0);
    CHECK(fs::exists(fs::path(out) / "S1.csv"));
    CHECK(fs::exists(fs::path(out) / "S2.csv"));
    CHECK(fs::exists(fs::path(out) / "T12.csv"));
    CHECK(fs::exists(fs::path(out) / "anchors.csv"));
    CHECK(fs::exists(fs::path(out) / "counts1_t_word.csv"));
    CHECK(fs::exists(fs::path(out) / "counts2_n_word.csv"));
}

TEST_CASE("unknown config keys are rejected with exit 2") {
    TempDir t;
    const std::string data = (t.path / "data").string();
    REQUIRE(run("synth --k 2 --n1 10 --n2 8 --seed 1 --out " + data) == 0);
    std::ofstream(t.path / "conf.ini") << "[cluster]\nk1 = 2\nk2 = 2\nbogus_key = 1\n";
    CHECK(run("--config " + (t.path / "conf.ini").string() + " cluster --t1 " + data + "/tweets.jsonl --t2 " + data +
              "/news.jsonl --seed 1 --out " + (t.path / "run").string()) == 2);
}

TEST_CASE("config file fills options, command line wins") {
    TempDir t;
    const std::string data = (t.path / "data").string();
    REQUIRE(run("synth --k 2 --n1 16 --n2 10 --seed 2 --anchor-rate 0.7 --out " + data) == 0);
    std::ofstream(t.path / "conf.ini") << "[cluster]\nk1 = 2\nk2 = 2\ntheta = 0.5\n";
    const std::string out = (t.path / "run").string();
    REQUIRE(run("--config " + (t.path / "conf.ini").string() + " cluster --t1 " + data + "/tweets.jsonl --t2 " + data +
                "/news.jsonl --seed 1 --theta 0.75 --out " + out) == 0);
    const auto j = nlohmann::json::parse(slurp(fs::path(out) / "result.json"));
    CHECK(j["config"]["k1"].get<int>() == 2);            // from the config file
    CHECK(j["config"]["theta"].get<double>() == 0.75);   // flag beats config
}
