#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "hint/errors.hpp"

namespace hint {

enum class Source { Tweet, News };

enum class EntityClass { Person, Organization, Location };

inline char entity_class_letter(EntityClass c) {
    switch (c) {
        case EntityClass::Person: return 'P';
        case EntityClass::Organization: return 'O';
        default: return 'L';
    }
}

/// (name, class) pair; entities with the same name but different classes are
/// distinct objects.
struct Entity {
    std::string name;
    EntityClass cls;
    bool operator<(const Entity& o) const { return std::tie(name, cls) < std::tie(o.name, o.cls); }
    bool operator==(const Entity& o) const { return name == o.name && cls == o.cls; }
};

/// Lowercases and strips trailing slashes; hyperlinks and canonical URLs are
/// compared after this normalization (short-URL expansion happens upstream).
inline std::string normalize_url(std::string url) {
    std::transform(url.begin(), url.end(), url.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    while (!url.empty() && url.back() == '/') url.pop_back();
    return url;
}

/// One annotated text unit. Multisets are stored as ordered count maps so that
/// iteration order (and everything derived from it) is deterministic. Counts
/// are the object weights: a weight of c means the object appears c times.
struct Document {
    std::string id;
    Source source = Source::Tweet;
    std::map<std::string, int> words;
    std::map<Entity, int> entities;
    std::map<std::string, int> hashtags;  // Tweet only
    std::map<std::string, int> mentions;  // Tweet only
    std::set<std::string> hyperlinks;     // Tweet only, normalized
    std::optional<std::string> retweet_of;  // Tweet only
    std::optional<std::string> url;         // News only, normalized
};

/// The two collections: collection1 holds the short/tweet-like documents,
/// collection2 the long/news-like ones. Ids are unique within each collection.
struct CorpusPair {
    std::vector<Document> collection1;
    std::vector<Document> collection2;
};

/// Anchor pairs (idx1, idx2) into (collection1, collection2). Each idx1
/// appears at most once; an idx2 may appear many times (the 1-to-n rule).
struct AnchorSet {
    std::vector<std::pair<int, int>> pairs;  // sorted by idx1
    int size() const { return static_cast<int>(pairs.size()); }
};

namespace detail {

inline std::map<std::string, int> parse_counted_strings(const nlohmann::json& arr, const char* field, int line_no) {
    std::map<std::string, int> out;
    if (arr.is_null()) return out;
    if (!arr.is_array()) throw ParseError(std::string("line ") + std::to_string(line_no) + ": field '" + field + "' must be an array");
    for (const auto& item : arr) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_number_integer())
            throw ParseError(std::string("line ") + std::to_string(line_no) + ": field '" + field + "' entries must be [string, int]");
        const int count = item[1].get<int>();
        if (count < 1)
            throw ParseError(std::string("line ") + std::to_string(line_no) + ": field '" + field + "' has multiplicity < 1");
        out[item[0].get<std::string>()] += count;
    }
    return out;
}

inline Document parse_document_line(const std::string& line, int line_no) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("line " + std::to_string(line_no) + ": invalid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw ParseError("line " + std::to_string(line_no) + ": record is not a JSON object");

    Document d;
    if (!j.contains("id") || !j["id"].is_string()) throw ParseError("line " + std::to_string(line_no) + ": missing string field 'id'");
    d.id = j["id"].get<std::string>();

    if (!j.contains("source") || !j["source"].is_string()) throw ParseError("line " + std::to_string(line_no) + ": missing string field 'source'");
    const std::string src = j["source"].get<std::string>();
    if (src == "tweet")
        d.source = Source::Tweet;
    else if (src == "news")
        d.source = Source::News;
    else
        throw ParseError("line " + std::to_string(line_no) + ": source must be \"tweet\" or \"news\", got \"" + src + "\"");

    d.words = parse_counted_strings(j.value("words", nlohmann::json::array()), "words", line_no);

    if (j.contains("entities") && !j["entities"].is_null()) {
        if (!j["entities"].is_array()) throw ParseError("line " + std::to_string(line_no) + ": field 'entities' must be an array");
        for (const auto& item : j["entities"]) {
            if (!item.is_array() || item.size() != 3 || !item[0].is_string() || !item[1].is_string() || !item[2].is_number_integer())
                throw ParseError("line " + std::to_string(line_no) + ": entity entries must be [name, class, count]");
            const std::string cls = item[1].get<std::string>();
            EntityClass ec;
            if (cls == "P")
                ec = EntityClass::Person;
            else if (cls == "O")
                ec = EntityClass::Organization;
            else if (cls == "L")
                ec = EntityClass::Location;
            else
                throw ParseError("line " + std::to_string(line_no) + ": entity class must be P, O or L, got \"" + cls + "\"");
            const int count = item[2].get<int>();
            if (count < 1) throw ParseError("line " + std::to_string(line_no) + ": entity multiplicity < 1");
            d.entities[Entity{item[0].get<std::string>(), ec}] += count;
        }
    }

    d.hashtags = parse_counted_strings(j.value("hashtags", nlohmann::json::array()), "hashtags", line_no);
    d.mentions = parse_counted_strings(j.value("mentions", nlohmann::json::array()), "mentions", line_no);

    if (j.contains("hyperlinks") && !j["hyperlinks"].is_null()) {
        if (!j["hyperlinks"].is_array()) throw ParseError("line " + std::to_string(line_no) + ": field 'hyperlinks' must be an array");
        for (const auto& item : j["hyperlinks"]) {
            if (!item.is_string()) throw ParseError("line " + std::to_string(line_no) + ": hyperlinks must be strings");
            d.hyperlinks.insert(normalize_url(item.get<std::string>()));
        }
    }

    if (j.contains("retweet_of") && !j["retweet_of"].is_null()) {
        if (!j["retweet_of"].is_string()) throw ParseError("line " + std::to_string(line_no) + ": retweet_of must be a string or null");
        d.retweet_of = j["retweet_of"].get<std::string>();
    }
    if (j.contains("url") && !j["url"].is_null()) {
        if (!j["url"].is_string()) throw ParseError("line " + std::to_string(line_no) + ": url must be a string or null");
        d.url = normalize_url(j["url"].get<std::string>());
    }

    if (d.source == Source::News) {
        if (!d.hashtags.empty() || !d.mentions.empty() || !d.hyperlinks.empty() || d.retweet_of.has_value())
            throw ValidationError("line " + std::to_string(line_no) + ": news document \"" + d.id +
                                  "\" must not carry hashtags, mentions, hyperlinks or retweet_of");
    } else {
        if (d.url.has_value())
            throw ValidationError("line " + std::to_string(line_no) + ": tweet document \"" + d.id + "\" must not carry a url");
    }
    return d;
}

inline std::vector<Document> parse_jsonl_file(const std::string& path, Source expected) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open corpus file: " + path);
    std::vector<Document> docs;
    std::unordered_map<std::string, int> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Document d = parse_document_line(line, line_no);
        if (d.source != expected)
            throw ValidationError(path + " line " + std::to_string(line_no) + ": document \"" + d.id +
                                  "\" has the wrong source for this collection");
        auto [it, inserted] = seen.emplace(d.id, line_no);
        if (!inserted)
            throw ValidationError(path + " line " + std::to_string(line_no) + ": duplicate id \"" + d.id + "\" (first seen at line " +
                                  std::to_string(it->second) + ")");
        docs.push_back(std::move(d));
    }
    return docs;
}

} // namespace detail

/// Parses one JSON-Lines file per collection and validates cross-references.
inline CorpusPair parse_corpus(const std::string& path1, const std::string& path2) {
    CorpusPair corpus;
    corpus.collection1 = detail::parse_jsonl_file(path1, Source::Tweet);
    corpus.collection2 = detail::parse_jsonl_file(path2, Source::News);
    std::set<std::string> ids1;
    for (const auto& d : corpus.collection1) ids1.insert(d.id);
    for (const auto& d : corpus.collection1) {
        if (d.retweet_of && !ids1.count(*d.retweet_of))
            throw ValidationError("tweet \"" + d.id + "\" retweets unknown id \"" + *d.retweet_of + "\"");
    }
    return corpus;
}

/// Number of distinct shared objects: word names plus (entity name, class)
/// pairs present in both documents.
inline int common_object_count(const Document& a, const Document& b) {
    int n = 0;
    for (const auto& [w, c] : a.words)
        if (b.words.count(w)) ++n;
    for (const auto& [e, c] : a.entities)
        if (b.entities.count(e)) ++n;
    return n;
}

/// Anchor pairs: tweet i and news j are anchored when i hyperlinks j's url and
/// the two documents share at least min_common objects. A tweet that links
/// several qualifying news keeps only the pair with the largest common-object
/// count (ties to the lowest news index), enforcing the 1-to-n rule.
inline AnchorSet extract_anchors(const CorpusPair& corpus, int min_common = 1) {
    if (min_common < 1) throw ConfigError("extract_anchors: min_common must be >= 1");
    std::unordered_map<std::string, std::vector<int>> by_url;
    for (int j = 0; j < static_cast<int>(corpus.collection2.size()); ++j) {
        const auto& nd = corpus.collection2[j];
        if (nd.url) by_url[*nd.url].push_back(j);
    }
    AnchorSet anchors;
    for (int i = 0; i < static_cast<int>(corpus.collection1.size()); ++i) {
        const auto& td = corpus.collection1[i];
        int best_j = -1;
        int best_common = 0;
        for (const auto& link : td.hyperlinks) {
            auto it = by_url.find(link);
            if (it == by_url.end()) continue;
            for (int j : it->second) {
                const int common = common_object_count(td, corpus.collection2[j]);
                if (common < min_common) continue;
                if (common > best_common || (common == best_common && (best_j < 0 || j < best_j))) {
                    best_common = common;
                    best_j = j;
                }
            }
        }
        if (best_j >= 0) anchors.pairs.emplace_back(i, best_j);
    }
    return anchors;
}

} // namespace hint
