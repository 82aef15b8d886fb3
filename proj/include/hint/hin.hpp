#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "hint/corpus.hpp"
#include "hint/errors.hpp"

namespace hint {

/// Object class a common-object meta-path walks through. EntityAll merges the
/// three entity classes into a single path (the default on the tweet side).
enum class ObjectClass { Word, EntityPerson, EntityOrg, EntityLoc, EntityAll, Mention, Hashtag, Hyperlink };

/// RetweetRelation is the sum of Retweet and CommonRetweet, the default
/// tweet-side configuration that matches the six uniform path weights.
enum class PathKind { Retweet, CommonRetweet, RetweetRelation, CommonObject };

struct MetaPath {
    std::string id;
    Source side = Source::Tweet;
    PathKind kind = PathKind::CommonObject;
    ObjectClass object_class = ObjectClass::Word;  // meaningful for CommonObject only
};

/// Path-instance counts for one meta-path: A(x,y) is the number of concrete
/// length-2 path instances between documents x and y (occurrence pairs through
/// each shared object, so multiplicities multiply). Stored sparse by row;
/// symmetric; diagonal kept for common-object paths.
struct CountMatrix {
    MetaPath meta_path;
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> rows;  // sorted by column
    std::vector<double> row_totals;

    double at(int x, int y) const {
        const auto& r = rows[x];
        auto it = std::lower_bound(r.begin(), r.end(), y,
                                   [](const std::pair<int, double>& e, int col) { return e.first < col; });
        return (it != r.end() && it->first == y) ? it->second : 0.0;
    }
};

namespace detail {

/// Accumulates A(x,y) += c_x(o) * c_y(o) for every object o of the path's
/// class, via an inverted object -> (doc, count) index.
template <typename ObjectsOf>
void accumulate_common_object(const std::vector<Document>& docs, ObjectsOf&& objects_of,
                              std::vector<std::unordered_map<int, double>>& acc) {
    std::map<std::string, std::vector<std::pair<int, double>>> postings;
    for (int d = 0; d < static_cast<int>(docs.size()); ++d) {
        objects_of(docs[d], [&](const std::string& key, int count) {
            postings[key].emplace_back(d, static_cast<double>(count));
        });
    }
    for (const auto& [key, posting] : postings) {
        for (std::size_t a = 0; a < posting.size(); ++a) {
            const auto [da, ca] = posting[a];
            acc[da][da] += ca * ca;
            for (std::size_t b = a + 1; b < posting.size(); ++b) {
                const auto [db, cb] = posting[b];
                acc[da][db] += ca * cb;
                acc[db][da] += cb * ca;
            }
        }
    }
}

inline void for_each_object(const Document& d, ObjectClass cls, const std::function<void(const std::string&, int)>& fn) {
    switch (cls) {
        case ObjectClass::Word:
            for (const auto& [w, c] : d.words) fn(w, c);
            break;
        case ObjectClass::Mention:
            for (const auto& [w, c] : d.mentions) fn(w, c);
            break;
        case ObjectClass::Hashtag:
            for (const auto& [w, c] : d.hashtags) fn(w, c);
            break;
        case ObjectClass::Hyperlink:
            for (const auto& u : d.hyperlinks) fn(u, 1);
            break;
        case ObjectClass::EntityAll:
            for (const auto& [e, c] : d.entities) fn(e.name + "\x1f" + entity_class_letter(e.cls), c);
            break;
        case ObjectClass::EntityPerson:
        case ObjectClass::EntityOrg:
        case ObjectClass::EntityLoc: {
            const EntityClass want = cls == ObjectClass::EntityPerson ? EntityClass::Person
                                     : cls == ObjectClass::EntityOrg  ? EntityClass::Organization
                                                                      : EntityClass::Location;
            for (const auto& [e, c] : d.entities)
                if (e.cls == want) fn(e.name, c);
            break;
        }
    }
}

inline void accumulate_retweet(const std::vector<Document>& docs, std::vector<std::unordered_map<int, double>>& acc) {
    std::unordered_map<std::string, int> index;
    for (int d = 0; d < static_cast<int>(docs.size()); ++d) index.emplace(docs[d].id, d);
    for (int x = 0; x < static_cast<int>(docs.size()); ++x) {
        if (!docs[x].retweet_of) continue;
        auto it = index.find(*docs[x].retweet_of);
        if (it == index.end()) throw ValidationError("retweet target \"" + *docs[x].retweet_of + "\" not in collection");
        const int y = it->second;
        acc[x][y] = 1.0;
        acc[y][x] = 1.0;
    }
}

inline void accumulate_common_retweet(const std::vector<Document>& docs, std::vector<std::unordered_map<int, double>>& acc) {
    std::unordered_map<std::string, std::vector<int>> by_target;
    for (int d = 0; d < static_cast<int>(docs.size()); ++d)
        if (docs[d].retweet_of) by_target[*docs[d].retweet_of].push_back(d);
    for (const auto& [target, group] : by_target) {
        for (std::size_t a = 0; a < group.size(); ++a)
            for (std::size_t b = a + 1; b < group.size(); ++b) {
                acc[group[a]][group[b]] += 1.0;
                acc[group[b]][group[a]] += 1.0;
            }
    }
}

inline CountMatrix finalize(const MetaPath& path, int n, std::vector<std::unordered_map<int, double>>& acc) {
    CountMatrix m;
    m.meta_path = path;
    m.n = n;
    m.rows.resize(n);
    m.row_totals.assign(n, 0.0);
    for (int x = 0; x < n; ++x) {
        auto& row = m.rows[x];
        row.assign(acc[x].begin(), acc[x].end());
        std::sort(row.begin(), row.end());
        double total = 0.0;
        for (const auto& [y, v] : row) total += v;
        m.row_totals[x] = total;
    }
    return m;
}

} // namespace detail

/// Builds the path-instance count matrix for one meta-path over one
/// collection. All documents must belong to the path's side.
inline CountMatrix build_count_matrix(const std::vector<Document>& docs, const MetaPath& path) {
    for (const auto& d : docs)
        if (d.source != path.side)
            throw ValidationError("build_count_matrix: document \"" + d.id + "\" does not match meta-path side");
    if (path.side == Source::News) {
        const bool ok = path.kind == PathKind::CommonObject &&
                        (path.object_class == ObjectClass::Word || path.object_class == ObjectClass::EntityPerson ||
                         path.object_class == ObjectClass::EntityOrg || path.object_class == ObjectClass::EntityLoc);
        if (!ok) throw ValidationError("build_count_matrix: meta-path '" + path.id + "' is not valid on the news side");
    }

    const int n = static_cast<int>(docs.size());
    std::vector<std::unordered_map<int, double>> acc(n);
    switch (path.kind) {
        case PathKind::CommonObject:
            detail::accumulate_common_object(
                docs, [&](const Document& d, auto&& fn) { detail::for_each_object(d, path.object_class, fn); }, acc);
            break;
        case PathKind::Retweet:
            detail::accumulate_retweet(docs, acc);
            break;
        case PathKind::CommonRetweet:
            detail::accumulate_common_retweet(docs, acc);
            break;
        case PathKind::RetweetRelation: {
            detail::accumulate_retweet(docs, acc);
            std::vector<std::unordered_map<int, double>> cr(n);
            detail::accumulate_common_retweet(docs, cr);
            for (int x = 0; x < n; ++x)
                for (const auto& [y, v] : cr[x]) acc[x][y] += v;
            break;
        }
    }
    return detail::finalize(path, n, acc);
}

/// Default meta-path sets. Tweet side: retweet relation (Retweet and
/// CommonRetweet summed), words, entities (all classes as one path), mentions,
/// hashtags, hyperlinks -- six paths matching the uniform 1/6 weights.
/// split_retweet restores separate Retweet / CommonRetweet paths (seven).
/// News side: words plus one path per entity class -- four paths.
inline std::vector<MetaPath> default_meta_paths(Source side, bool split_retweet = false) {
    std::vector<MetaPath> paths;
    if (side == Source::Tweet) {
        if (split_retweet) {
            paths.push_back({"t_retweet", side, PathKind::Retweet, ObjectClass::Word});
            paths.push_back({"t_common_retweet", side, PathKind::CommonRetweet, ObjectClass::Word});
        } else {
            paths.push_back({"t_retweet_rel", side, PathKind::RetweetRelation, ObjectClass::Word});
        }
        paths.push_back({"t_word", side, PathKind::CommonObject, ObjectClass::Word});
        paths.push_back({"t_entity", side, PathKind::CommonObject, ObjectClass::EntityAll});
        paths.push_back({"t_mention", side, PathKind::CommonObject, ObjectClass::Mention});
        paths.push_back({"t_hashtag", side, PathKind::CommonObject, ObjectClass::Hashtag});
        paths.push_back({"t_hyperlink", side, PathKind::CommonObject, ObjectClass::Hyperlink});
    } else {
        paths.push_back({"n_word", side, PathKind::CommonObject, ObjectClass::Word});
        paths.push_back({"n_entity_p", side, PathKind::CommonObject, ObjectClass::EntityPerson});
        paths.push_back({"n_entity_o", side, PathKind::CommonObject, ObjectClass::EntityOrg});
        paths.push_back({"n_entity_l", side, PathKind::CommonObject, ObjectClass::EntityLoc});
    }
    return paths;
}

/// Builds all count matrices for one collection, optionally across threads
/// (each meta-path is independent, so the result does not depend on the
/// thread count).
inline std::vector<CountMatrix> build_count_matrices(const std::vector<Document>& docs, const std::vector<MetaPath>& paths,
                                                     int threads = 1) {
    std::vector<CountMatrix> out(paths.size());
    if (threads <= 1 || paths.size() <= 1) {
        for (std::size_t i = 0; i < paths.size(); ++i) out[i] = build_count_matrix(docs, paths[i]);
        return out;
    }
    std::vector<std::future<CountMatrix>> futures;
    futures.reserve(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i)
        futures.push_back(std::async(std::launch::async, [&docs, &paths, i] { return build_count_matrix(docs, paths[i]); }));
    for (std::size_t i = 0; i < paths.size(); ++i) out[i] = futures[i].get();
    return out;
}

} // namespace hint
