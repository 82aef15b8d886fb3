#include <catch2/catch_amalgamated.hpp>

#include "hint/hin.hpp"
#include "hint/rng.hpp"

#include "oracles.hpp"

using hint::Document;
using hint::MetaPath;
using hint::ObjectClass;
using hint::PathKind;
using hint::Source;

namespace {

Document tweet(const std::string& id) {
    Document d;
    d.id = id;
    d.source = Source::Tweet;
    return d;
}

} // namespace

TEST_CASE("common-object counts multiply occurrence weights") {
    // x holds "obama" twice, y once: 2*1 = 2 path instances
    std::vector<Document> docs;
    docs.push_back(tweet("x"));
    docs.push_back(tweet("y"));
    docs[0].words["obama"] = 2;
    docs[1].words["obama"] = 1;
    const MetaPath path{"w", Source::Tweet, PathKind::CommonObject, ObjectClass::Word};
    const hint::CountMatrix m = hint::build_count_matrix(docs, path);
    CHECK(m.at(0, 1) == 2.0);
    CHECK(m.at(1, 0) == 2.0);
    CHECK(m.at(0, 0) == 4.0);  // diagonal: sum of squared multiplicities
    CHECK(m.at(1, 1) == 1.0);
    CHECK(m.row_totals[0] == 6.0);
}

TEST_CASE("documents sharing nothing count zero") {
    std::vector<Document> docs;
    docs.push_back(tweet("x"));
    docs.push_back(tweet("y"));
    docs[0].words["a"] = 1;
    docs[1].words["b"] = 1;
    const MetaPath path{"w", Source::Tweet, PathKind::CommonObject, ObjectClass::Word};
    const hint::CountMatrix m = hint::build_count_matrix(docs, path);
    CHECK(m.at(0, 1) == 0.0);
}

TEST_CASE("common retweet counts shared targets") {
    std::vector<Document> docs;
    docs.push_back(tweet("z"));
    docs.push_back(tweet("x"));
    docs.push_back(tweet("y"));
    docs[1].retweet_of = "z";
    docs[2].retweet_of = "z";
    const MetaPath cr{"cr", Source::Tweet, PathKind::CommonRetweet, ObjectClass::Word};
    const hint::CountMatrix m = hint::build_count_matrix(docs, cr);
    CHECK(m.at(1, 2) == 1.0);
    CHECK(m.at(2, 1) == 1.0);
    CHECK(m.at(1, 1) == 0.0);  // diagonal excluded for common retweets

    const MetaPath rt{"rt", Source::Tweet, PathKind::Retweet, ObjectClass::Word};
    const hint::CountMatrix r = hint::build_count_matrix(docs, rt);
    CHECK(r.at(0, 1) == 1.0);
    CHECK(r.at(1, 0) == 1.0);
    CHECK(r.at(1, 2) == 0.0);

    const MetaPath rr{"rr", Source::Tweet, PathKind::RetweetRelation, ObjectClass::Word};
    const hint::CountMatrix s = hint::build_count_matrix(docs, rr);
    CHECK(s.at(1, 2) == 1.0);  // common retweet
    CHECK(s.at(0, 1) == 1.0);  // direct retweet
}

TEST_CASE("news side rejects tweet-only meta-paths") {
    std::vector<Document> docs;
    Document n;
    n.id = "n1";
    n.source = Source::News;
    docs.push_back(n);
    const MetaPath bad{"h", Source::News, PathKind::CommonObject, ObjectClass::Hashtag};
    CHECK_THROWS_AS(hint::build_count_matrix(docs, bad), hint::ValidationError);
}

TEST_CASE("wrong-side documents are rejected") {
    std::vector<Document> docs;
    Document n;
    n.id = "n1";
    n.source = Source::News;
    docs.push_back(n);
    const MetaPath path{"w", Source::Tweet, PathKind::CommonObject, ObjectClass::Word};
    CHECK_THROWS_AS(hint::build_count_matrix(docs, path), hint::ValidationError);
}

TEST_CASE("count matrices match the brute-force path enumerator") {
    hint::Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const hint::CorpusPair corpus = oracles::random_corpus(rng, 2 + rng.uniform_int(9), 2 + rng.uniform_int(4));
        for (const MetaPath& path : hint::default_meta_paths(Source::Tweet, trial % 2 == 1)) {
            const hint::CountMatrix m = hint::build_count_matrix(corpus.collection1, path);
            const int n = m.n;
            for (int x = 0; x < n; ++x) {
                double total = 0.0;
                for (int y = 0; y < n; ++y) {
                    const double expected = oracles::brute_force_path_count(corpus.collection1, x, y, path);
                    REQUIRE(m.at(x, y) == expected);
                    CHECK(m.at(x, y) == m.at(y, x));  // exact symmetry
                    total += m.at(x, y);
                }
                CHECK(m.row_totals[x] == total);
            }
        }
        for (const MetaPath& path : hint::default_meta_paths(Source::News)) {
            const hint::CountMatrix m = hint::build_count_matrix(corpus.collection2, path);
            for (int x = 0; x < m.n; ++x)
                for (int y = 0; y < m.n; ++y)
                    REQUIRE(m.at(x, y) == oracles::brute_force_path_count(corpus.collection2, x, y, path));
        }
    }
}

TEST_CASE("default meta-path sets have the documented sizes") {
    CHECK(hint::default_meta_paths(Source::Tweet).size() == 6);
    CHECK(hint::default_meta_paths(Source::Tweet, true).size() == 7);
    CHECK(hint::default_meta_paths(Source::News).size() == 4);
}

TEST_CASE("threaded construction matches sequential") {
    hint::Rng rng(5);
    const hint::CorpusPair corpus = oracles::random_corpus(rng, 8, 3);
    const auto paths = hint::default_meta_paths(Source::Tweet);
    const auto seq = hint::build_count_matrices(corpus.collection1, paths, 1);
    const auto par = hint::build_count_matrices(corpus.collection1, paths, 4);
    REQUIRE(seq.size() == par.size());
    for (std::size_t p = 0; p < seq.size(); ++p)
        for (int x = 0; x < seq[p].n; ++x) REQUIRE(seq[p].rows[x] == par[p].rows[x]);
}
