#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hint/corpus.hpp"
#include "hint/errors.hpp"
#include "hint/hin.hpp"
#include "hint/matrix.hpp"

namespace hint {

/// Shortest round-trip decimal for CSV cells.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline nlohmann::ordered_json document_to_json(const Document& d) {
    nlohmann::ordered_json j;
    j["id"] = d.id;
    j["source"] = d.source == Source::Tweet ? "tweet" : "news";
    auto counted = [](const auto& map) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [key, count] : map) arr.push_back({key, count});
        return arr;
    };
    j["words"] = counted(d.words);
    nlohmann::ordered_json ents = nlohmann::ordered_json::array();
    for (const auto& [e, count] : d.entities) ents.push_back({e.name, std::string(1, entity_class_letter(e.cls)), count});
    j["entities"] = ents;
    j["hashtags"] = counted(d.hashtags);
    j["mentions"] = counted(d.mentions);
    nlohmann::ordered_json links = nlohmann::ordered_json::array();
    for (const auto& u : d.hyperlinks) links.push_back(u);
    j["hyperlinks"] = links;
    j["retweet_of"] = d.retweet_of ? nlohmann::ordered_json(*d.retweet_of) : nlohmann::ordered_json(nullptr);
    j["url"] = d.url ? nlohmann::ordered_json(*d.url) : nlohmann::ordered_json(nullptr);
    return j;
}

inline void write_corpus_jsonl(const std::vector<Document>& docs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    for (const auto& d : docs) out << document_to_json(d).dump() << "\n";
}

inline void write_truth_csv(const std::string& path, const std::vector<Document>& docs1, const std::vector<int>& truth1,
                            const std::vector<Document>& docs2, const std::vector<int>& truth2) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << "collection,id,cluster\n";
    for (std::size_t i = 0; i < docs1.size(); ++i) out << "tweet," << docs1[i].id << "," << truth1[i] << "\n";
    for (std::size_t j = 0; j < docs2.size(); ++j) out << "news," << docs2[j].id << "," << truth2[j] << "\n";
}

struct TruthTable {
    std::vector<std::pair<std::string, int>> tweets;  // (id, cluster) in file order
    std::vector<std::pair<std::string, int>> news;
};

inline TruthTable read_truth_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open truth file: " + path);
    TruthTable t;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("collection,", 0) == 0) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ParseError(path + " line " + std::to_string(line_no) + ": expected collection,id,cluster");
        const std::string collection = line.substr(0, c1);
        const std::string id = line.substr(c1 + 1, c2 - c1 - 1);
        int cluster = 0;
        try {
            cluster = std::stoi(line.substr(c2 + 1));
        } catch (const std::exception&) {
            throw ParseError(path + " line " + std::to_string(line_no) + ": cluster is not an integer");
        }
        if (collection == "tweet")
            t.tweets.emplace_back(id, cluster);
        else if (collection == "news")
            t.news.emplace_back(id, cluster);
        else
            throw ParseError(path + " line " + std::to_string(line_no) + ": collection must be tweet or news");
    }
    return t;
}

/// Dense matrix CSV: header row of column names, then one row per matrix row.
inline void write_dense_csv(const Matrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    for (int j = 0; j < m.cols(); ++j) out << (j ? "," : "") << "c" << j;
    out << "\n";
    for (int i = 0; i < m.rows(); ++i) {
        const double* row = m.row(i);
        for (int j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(row[j]);
        out << "\n";
    }
}

/// Sparse triplet CSV (row,col,count) of a count matrix.
inline void write_triplets_csv(const CountMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << "row,col,count\n";
    for (int x = 0; x < m.n; ++x)
        for (const auto& [y, v] : m.rows[x]) out << x << "," << y << "," << format_double(v) << "\n";
}

/// Sparse triplet CSV of any dense matrix (non-zero entries only).
inline void write_dense_as_triplets_csv(const Matrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << "row,col,value\n";
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0) out << i << "," << j << "," << format_double(m(i, j)) << "\n";
}

inline void write_confidence_csv(const Matrix& h, const std::vector<Document>& docs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << "id";
    for (int j = 0; j < h.cols(); ++j) out << ",c" << j;
    out << "\n";
    for (int i = 0; i < h.rows(); ++i) {
        out << docs[i].id;
        for (int j = 0; j < h.cols(); ++j) out << "," << format_double(h(i, j));
        out << "\n";
    }
}

} // namespace hint
