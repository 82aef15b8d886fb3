#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hint/corpus.hpp"
#include "hint/errors.hpp"
#include "hint/rng.hpp"

namespace hint {

/// Planted-partition generator settings. Every document gets a cluster
/// round-robin. A news document fills words_per_doc2 token slots; a tweet
/// draws its length first (0..words_per_doc1 slots, short texts vary wildly),
/// then fills each slot with a cluster-vocabulary token with probability p_in
/// or a shared background word with probability p_out. Tweets that end up
/// with no tokens at all model bare link-shares: if anchored, their only
/// connection to anything is the anchor itself.
struct SynthConfig {
    int k = 4;
    int n1 = 200;
    int n2 = 200;
    int vocab_per_cluster = 40;
    int shared_vocab = 100;
    double p_in = 0.3;
    double p_out = 0.02;
    int words_per_doc1 = 12;
    int words_per_doc2 = 80;
    double anchor_rate = 0.5;
    double entity_fraction = 0.2;
    double noise_rate = 0.0;  // fraction of anchors re-routed to a random news
    std::uint64_t seed = 0;

    void validate() const {
        if (k < 1) throw ConfigError("synth: k must be >= 1");
        if (n1 < 1 || n2 < 1) throw ConfigError("synth: collection sizes must be >= 1");
        if (k > std::min(n1, n2)) throw ConfigError("synth: k must not exceed min(n1, n2)");
        if (vocab_per_cluster < 1 || shared_vocab < 1) throw ConfigError("synth: vocabulary sizes must be >= 1");
        if (!(p_in > p_out)) throw ConfigError("synth: p_in must exceed p_out");
        if (!(p_out >= 0.0) || p_in + p_out > 1.0) throw ConfigError("synth: need 0 <= p_out < p_in with p_in + p_out <= 1");
        if (!(anchor_rate >= 0.0 && anchor_rate <= 1.0)) throw ConfigError("synth: anchor_rate must be in [0,1]");
        if (!(entity_fraction >= 0.0 && entity_fraction <= 1.0)) throw ConfigError("synth: entity_fraction must be in [0,1]");
        if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) throw ConfigError("synth: noise_rate must be in [0,1]");
        if (words_per_doc1 < 1 || words_per_doc2 < 1) throw ConfigError("synth: words_per_doc must be >= 1");
    }
};

struct SynthResult {
    CorpusPair corpus;
    std::vector<int> truth1;
    std::vector<int> truth2;
};

namespace detail {

inline EntityClass entity_class_for(int index) {
    switch (index % 3) {
        case 0: return EntityClass::Person;
        case 1: return EntityClass::Organization;
        default: return EntityClass::Location;
    }
}

/// Draws one token slot into the document. Cluster tokens with an index below
/// the entity cutoff become typed entities; the rest are plain words.
inline void draw_token(Document& doc, int cluster, const SynthConfig& cfg, int entity_cutoff, Rng& rng) {
    const double u = rng.uniform();
    if (u < cfg.p_in) {
        const int idx = rng.uniform_int(cfg.vocab_per_cluster);
        if (idx < entity_cutoff) {
            doc.entities[Entity{"e" + std::to_string(cluster) + "_" + std::to_string(idx), entity_class_for(idx)}] += 1;
        } else {
            doc.words["w" + std::to_string(cluster) + "_" + std::to_string(idx)] += 1;
        }
    } else if (u < cfg.p_in + cfg.p_out) {
        doc.words["bg_" + std::to_string(rng.uniform_int(cfg.shared_vocab))] += 1;
    }
}

} // namespace detail

/// Generates a comparative corpus with planted clusters and anchor links.
/// Anchored tweets hyperlink a uniformly chosen news document of the same
/// planted cluster (unless re-routed by noise_rate) and always share at least
/// one object with it: one of the tweet's tokens is copied into the news
/// article, or, for a token-less link-share tweet, a pair-unique link text is
/// added to both sides. Byte-deterministic per seed.
inline SynthResult generate(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const int entity_cutoff = static_cast<int>(cfg.entity_fraction * cfg.vocab_per_cluster);

    SynthResult out;
    out.truth1.resize(cfg.n1);
    out.truth2.resize(cfg.n2);
    out.corpus.collection1.resize(cfg.n1);
    out.corpus.collection2.resize(cfg.n2);

    for (int i = 0; i < cfg.n1; ++i) {
        Document& d = out.corpus.collection1[i];
        d.id = "t" + std::to_string(i);
        d.source = Source::Tweet;
        out.truth1[i] = i % cfg.k;
        const int slots = rng.uniform_int(cfg.words_per_doc1 + 1);
        for (int s = 0; s < slots; ++s) detail::draw_token(d, out.truth1[i], cfg, entity_cutoff, rng);
    }
    for (int j = 0; j < cfg.n2; ++j) {
        Document& d = out.corpus.collection2[j];
        d.id = "n" + std::to_string(j);
        d.source = Source::News;
        d.url = "https://news.example/n" + std::to_string(j);
        out.truth2[j] = j % cfg.k;
        for (int s = 0; s < cfg.words_per_doc2; ++s) detail::draw_token(d, out.truth2[j], cfg, entity_cutoff, rng);
    }

    std::vector<std::vector<int>> news_by_cluster(cfg.k);
    for (int j = 0; j < cfg.n2; ++j) news_by_cluster[out.truth2[j]].push_back(j);

    const int anchored = static_cast<int>(std::llround(cfg.anchor_rate * cfg.n1));
    std::vector<int> order(cfg.n1);
    for (int i = 0; i < cfg.n1; ++i) order[i] = i;
    for (int i = cfg.n1 - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(i + 1)]);
    order.resize(anchored);
    std::sort(order.begin(), order.end());

    for (int i : order) {
        const auto& pool = news_by_cluster[out.truth1[i]];
        int j = pool[rng.uniform_int(static_cast<int>(pool.size()))];
        if (cfg.noise_rate > 0.0 && rng.uniform() < cfg.noise_rate) j = rng.uniform_int(cfg.n2);
        Document& tweet = out.corpus.collection1[i];
        Document& news = out.corpus.collection2[j];
        tweet.hyperlinks.insert(*news.url);
        if (!tweet.words.empty()) {
            auto it = tweet.words.begin();
            std::advance(it, rng.uniform_int(static_cast<int>(tweet.words.size())));
            news.words[it->first] += 1;
        } else if (!tweet.entities.empty()) {
            auto it = tweet.entities.begin();
            std::advance(it, rng.uniform_int(static_cast<int>(tweet.entities.size())));
            news.entities[it->first] += 1;
        } else {
            const std::string link_text = "link_" + std::to_string(i);
            tweet.words[link_text] += 1;
            news.words[link_text] += 1;
        }
    }
    return out;
}

} // namespace hint
