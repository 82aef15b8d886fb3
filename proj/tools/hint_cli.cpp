// Command-line front end: cluster | synth | eval | inspect.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hint/hint.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct ClusterOptions {
    std::string t1_path;
    std::string t2_path;
    std::string out_dir = ".";
    int k1 = 0;
    int k2 = 0;
    double theta = 1.0;
    double alpha = 1.0;
    double beta = 1.0;
    std::uint64_t seed = 0;
    int min_common = 1;
    double link_threshold = 0.8;
    bool split_retweet = false;
    std::vector<double> weights1;
    std::vector<double> weights2;
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    hint::SearchParams search;
};

void add_search_flags(CLI::App* cmd, hint::SearchParams& p) {
    cmd->add_option("--rho1", p.rho1, "Armijo constant of the nonmonotone line search");
    cmd->add_option("--eta", p.eta, "Nonmonotone averaging weight");
    cmd->add_option("--tau0", p.tau0, "Initial curvilinear step");
    cmd->add_option("--tau-min", p.tau_min, "Lower clamp for the BB step");
    cmd->add_option("--tau-max", p.tau_max, "Upper clamp for the BB step");
    cmd->add_option("--max-inner", p.max_inner, "Iteration cap per single-variable solve");
    cmd->add_option("--tol-grad", p.tol_grad, "Projected-gradient stopping tolerance");
    cmd->add_option("--tol-obj", p.tol_obj, "Relative objective-change stopping tolerance");
    cmd->add_option("--max-outer", p.max_outer, "Alternation round cap");
}

void add_cluster_flags(CLI::App* cmd, ClusterOptions& o, bool require_io) {
    auto* t1 = cmd->add_option("--t1", o.t1_path, "Tweet-side JSONL corpus")->check(CLI::ExistingFile);
    auto* t2 = cmd->add_option("--t2", o.t2_path, "News-side JSONL corpus")->check(CLI::ExistingFile);
    auto* k1 = cmd->add_option("--k1", o.k1, "Cluster count for the tweet side");
    auto* k2 = cmd->add_option("--k2", o.k2, "Cluster count for the news side");
    if (require_io) {
        t1->required();
        t2->required();
        k1->required();
        k2->required();
    }
    cmd->add_option("--theta", o.theta, "Inconsistency penalty weight");
    cmd->add_option("--alpha", o.alpha, "Tweet-side trace weight");
    cmd->add_option("--beta", o.beta, "News-side trace weight");
    cmd->add_option("--seed", o.seed, "Run seed (all randomness derives from it)");
    cmd->add_option("--min-common", o.min_common, "Minimum shared objects for an anchor pair");
    cmd->add_option("--link-threshold", o.link_threshold, "Anchored fraction required to link clusters");
    cmd->add_flag("--split-retweet", o.split_retweet, "Keep Retweet and CommonRetweet as separate meta-paths");
    cmd->add_option("--weights1", o.weights1, "Tweet meta-path weights (must sum to 1)")->delimiter(',');
    cmd->add_option("--weights2", o.weights2, "News meta-path weights (must sum to 1)")->delimiter(',');
    cmd->add_option("--threads", o.threads, "Worker threads for matrix assembly");
    add_search_flags(cmd, o.search);
}

hint::HintConfig to_hint_config(const ClusterOptions& o) {
    hint::HintConfig hc;
    hc.k1 = o.k1;
    hc.k2 = o.k2;
    hc.theta = o.theta;
    hc.alpha = o.alpha;
    hc.beta = o.beta;
    hc.seed = o.seed;
    hc.min_common = o.min_common;
    hc.link_threshold = o.link_threshold;
    hc.split_retweet = o.split_retweet;
    hc.weights1 = o.weights1;
    hc.weights2 = o.weights2;
    hc.threads = o.threads < 1 ? 1 : o.threads;
    hc.search = o.search;
    return hc;
}

ordered_json config_json(const ClusterOptions& o) {
    ordered_json j;
    j["t1"] = o.t1_path;
    j["t2"] = o.t2_path;
    j["out"] = o.out_dir;
    j["k1"] = o.k1;
    j["k2"] = o.k2;
    j["theta"] = o.theta;
    j["alpha"] = o.alpha;
    j["beta"] = o.beta;
    j["seed"] = o.seed;
    j["min_common"] = o.min_common;
    j["link_threshold"] = o.link_threshold;
    j["split_retweet"] = o.split_retweet;
    j["weights1"] = o.weights1;
    j["weights2"] = o.weights2;
    j["threads"] = o.threads;
    j["rho1"] = o.search.rho1;
    j["eta"] = o.search.eta;
    j["tau0"] = o.search.tau0;
    j["tau_min"] = o.search.tau_min;
    j["tau_max"] = o.search.tau_max;
    j["max_inner"] = o.search.max_inner;
    j["tol_grad"] = o.search.tol_grad;
    j["tol_obj"] = o.search.tol_obj;
    j["max_outer"] = o.search.max_outer;
    return j;
}

ordered_json result_json(const ClusterOptions& o, const hint::CorpusPair& corpus, const hint::MutualClustering& out,
                         const hint::AnchorSet& anchors) {
    ordered_json j;
    j["config"] = config_json(o);
    ordered_json ids1 = ordered_json::array(), ids2 = ordered_json::array();
    for (const auto& d : corpus.collection1) ids1.push_back(d.id);
    for (const auto& d : corpus.collection2) ids2.push_back(d.id);
    j["ids1"] = ids1;
    j["labels1"] = out.labels1;
    j["ids2"] = ids2;
    j["labels2"] = out.labels2;
    ordered_json anchor_arr = ordered_json::array();
    for (const auto& [a, b] : anchors.pairs) anchor_arr.push_back({a, b});
    j["anchors"] = anchor_arr;
    ordered_json links = ordered_json::array();
    for (const auto& l : out.links) {
        ordered_json lj;
        lj["cluster1"] = l.cluster1;
        lj["cluster2"] = l.cluster2;
        lj["anchored_fraction"] = l.anchored_fraction;
        links.push_back(lj);
    }
    j["links"] = links;
    ordered_json m;
    m["anchor_count"] = out.metrics.anchor_count;
    m["inconsistency_d"] = out.metrics.inconsistency_d;
    m["normalized_inconsistency"] = out.metrics.normalized_inconsistency;
    m["pairwise_inconsistency_d"] = out.metrics.pairwise_d;
    m["objective_initial"] = out.metrics.objective_initial;
    m["objective_final"] = out.metrics.objective_final;
    m["rounds"] = out.metrics.rounds;
    m["converged"] = out.metrics.converged;
    m["drift_warnings"] = out.metrics.drift_warnings;
    j["metrics"] = m;
    return j;
}

int cmd_cluster(const ClusterOptions& o) {
    const hint::CorpusPair corpus = hint::parse_corpus(o.t1_path, o.t2_path);
    const hint::HintConfig hc = to_hint_config(o);

    fs::create_directories(o.out_dir);
    std::ofstream trace(fs::path(o.out_dir) / "trace.csv");
    if (!trace) throw hint::ParseError("cannot open for writing: " + (fs::path(o.out_dir) / "trace.csv").string());
    trace << "round,half,iter,objective,grad_norm,tau\n";
    const auto observer = [&trace](int round, int half, const hint::IterationRecord& r) {
        trace << round << "," << half << "," << r.iter << "," << hint::format_double(r.objective) << ","
              << hint::format_double(r.grad_norm) << "," << hint::format_double(r.tau) << "\n";
    };

    const hint::MutualClustering out = hint::run_hint(corpus, hc, observer);
    if (out.metrics.drift_warnings > 0)
        std::cerr << "warning: re-orthonormalized " << out.metrics.drift_warnings << " iterates beyond 1e-6 drift\n";

    const hint::AnchorSet anchors = hint::extract_anchors(corpus, hc.min_common);
    std::ofstream res(fs::path(o.out_dir) / "result.json");
    if (!res) throw hint::ParseError("cannot open for writing: " + (fs::path(o.out_dir) / "result.json").string());
    res << result_json(o, corpus, out, anchors).dump(2) << "\n";
    hint::write_confidence_csv(out.H1.H, corpus.collection1, (fs::path(o.out_dir) / "h1.csv").string());
    hint::write_confidence_csv(out.H2.H, corpus.collection2, (fs::path(o.out_dir) / "h2.csv").string());
    return 0;
}

struct SynthOptions {
    hint::SynthConfig cfg;
    std::string out_dir = ".";
};

int cmd_synth(const SynthOptions& o) {
    const hint::SynthResult r = hint::generate(o.cfg);
    fs::create_directories(o.out_dir);
    hint::write_corpus_jsonl(r.corpus.collection1, (fs::path(o.out_dir) / "tweets.jsonl").string());
    hint::write_corpus_jsonl(r.corpus.collection2, (fs::path(o.out_dir) / "news.jsonl").string());
    hint::write_truth_csv((fs::path(o.out_dir) / "truth.csv").string(), r.corpus.collection1, r.truth1, r.corpus.collection2,
                          r.truth2);
    return 0;
}

/// Joins result labels against a truth table by document id; returns labels
/// and truth in a consistent order. Throws on the first unmatched id.
std::pair<std::vector<int>, std::vector<int>> join_labels(const std::vector<std::string>& ids, const std::vector<int>& labels,
                                                          const std::vector<std::pair<std::string, int>>& truth,
                                                          const std::string& side) {
    std::map<std::string, int> truth_by_id(truth.begin(), truth.end());
    std::vector<int> l, t;
    l.reserve(ids.size());
    t.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto it = truth_by_id.find(ids[i]);
        if (it == truth_by_id.end())
            throw hint::ValidationError("eval: " + side + " id \"" + ids[i] + "\" missing from the truth file");
        l.push_back(labels[i]);
        t.push_back(it->second);
    }
    return {l, t};
}

hint::MetricReport evaluate_run(const hint::MutualClustering& out, const hint::TransitionMatrix& t,
                                const std::vector<int>& labels1, const std::vector<int>& truth1,
                                const std::vector<int>& labels2, const std::vector<int>& truth2) {
    hint::MetricReport rep;
    rep.nmi1 = hint::nmi(labels1, truth1);
    rep.nmi2 = hint::nmi(labels2, truth2);
    rep.f1_1 = hint::pairwise_f1(labels1, truth1);
    rep.f1_2 = hint::pairwise_f1(labels2, truth2);
    if (t.anchor_count >= 1) {
        const auto ce = hint::conditional_entropy(out.H1.H, out.H2.H, t);
        rep.cond_entropy = ce.plain;
        rep.cond_entropy_max_aligned = ce.max_aligned;
    }
    rep.d = out.metrics.inconsistency_d;
    rep.nd = out.metrics.normalized_inconsistency;
    return rep;
}

ordered_json report_json(const hint::MetricReport& rep) {
    ordered_json j;
    j["f_score_variant"] = "pairwise_f1";
    j["nmi1"] = rep.nmi1;
    j["nmi2"] = rep.nmi2;
    j["f1_1"] = rep.f1_1;
    j["f1_2"] = rep.f1_2;
    j["cond_entropy"] = rep.cond_entropy;
    j["cond_entropy_max_aligned"] = rep.cond_entropy_max_aligned;
    j["inconsistency_d"] = rep.d;
    j["normalized_inconsistency"] = rep.nd;
    return j;
}

struct EvalOptions {
    std::string result_path;
    std::string truth_path;
    std::string sweep;
    bool nmi_arithmetic_mean = false;
    ClusterOptions cluster;  // used in sweep mode
};

int eval_result_file(const EvalOptions& o) {
    std::ifstream in(o.result_path);
    if (!in) throw hint::ParseError("cannot open result file: " + o.result_path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw hint::ParseError("result file is not valid JSON: " + std::string(e.what()));
    }
    const hint::TruthTable truth = hint::read_truth_csv(o.truth_path);
    const auto ids1 = j.at("ids1").get<std::vector<std::string>>();
    const auto labels1 = j.at("labels1").get<std::vector<int>>();
    const auto ids2 = j.at("ids2").get<std::vector<std::string>>();
    const auto labels2 = j.at("labels2").get<std::vector<int>>();
    const auto [l1, t1] = join_labels(ids1, labels1, truth.tweets, "tweet");
    const auto [l2, t2] = join_labels(ids2, labels2, truth.news, "news");

    hint::MetricReport rep;
    rep.nmi1 = hint::nmi(l1, t1, o.nmi_arithmetic_mean);
    rep.nmi2 = hint::nmi(l2, t2, o.nmi_arithmetic_mean);
    rep.f1_1 = hint::pairwise_f1(l1, t1);
    rep.f1_2 = hint::pairwise_f1(l2, t2);
    if (j.contains("anchors") && j.contains("metrics")) {
        hint::AnchorSet anchors;
        for (const auto& p : j["anchors"]) anchors.pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
        if (anchors.size() >= 1) {
            const auto t = hint::build_transition(anchors, static_cast<int>(ids1.size()), static_cast<int>(ids2.size()));
            hint::Matrix h1(static_cast<int>(l1.size()), *std::max_element(labels1.begin(), labels1.end()) + 1);
            hint::Matrix h2(static_cast<int>(l2.size()), *std::max_element(labels2.begin(), labels2.end()) + 1);
            for (std::size_t i = 0; i < labels1.size(); ++i) h1(static_cast<int>(i), labels1[i]) = 1.0;
            for (std::size_t i = 0; i < labels2.size(); ++i) h2(static_cast<int>(i), labels2[i]) = 1.0;
            const auto ce = hint::conditional_entropy(h1, h2, t);
            rep.cond_entropy = ce.plain;
            rep.cond_entropy_max_aligned = ce.max_aligned;
        }
        rep.d = j["metrics"].value("inconsistency_d", 0.0);
        rep.nd = j["metrics"].value("normalized_inconsistency", 0.0);
    }
    std::cout << report_json(rep).dump(2) << std::endl;
    return 0;
}

/// Parses "name=start:step:stop" (only theta is supported).
std::vector<double> parse_sweep(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || spec.substr(0, eq) != "theta")
        throw hint::ConfigError("sweep: expected theta=start:step:stop, got \"" + spec + "\"");
    const std::string range = spec.substr(eq + 1);
    const auto c1 = range.find(':');
    const auto c2 = range.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw hint::ConfigError("sweep: expected theta=start:step:stop, got \"" + spec + "\"");
    double start = 0, step = 0, stop = 0;
    try {
        start = std::stod(range.substr(0, c1));
        step = std::stod(range.substr(c1 + 1, c2 - c1 - 1));
        stop = std::stod(range.substr(c2 + 1));
    } catch (const std::exception&) {
        throw hint::ConfigError("sweep: malformed range \"" + range + "\"");
    }
    if (step <= 0.0) throw hint::ConfigError("sweep: step must be positive");
    std::vector<double> values;
    for (double v = start; v <= stop + 1e-12; v += step) values.push_back(v);
    return values;
}

int eval_sweep(const EvalOptions& o) {
    const auto thetas = parse_sweep(o.sweep);
    const hint::CorpusPair corpus = hint::parse_corpus(o.cluster.t1_path, o.cluster.t2_path);
    const hint::TruthTable truth = hint::read_truth_csv(o.truth_path);
    std::vector<std::string> ids1, ids2;
    for (const auto& d : corpus.collection1) ids1.push_back(d.id);
    for (const auto& d : corpus.collection2) ids2.push_back(d.id);

    std::cout << "theta,nmi1,f1_1,nmi2,f1_2,cond_entropy,inconsistency_d,normalized_inconsistency\n";
    for (double theta : thetas) {
        ClusterOptions co = o.cluster;
        co.theta = theta;
        const hint::HintConfig hc = to_hint_config(co);
        const hint::MutualClustering out = hint::run_hint(corpus, hc);
        const auto anchors = hint::extract_anchors(corpus, hc.min_common);
        const auto t = hint::build_transition(anchors, static_cast<int>(ids1.size()), static_cast<int>(ids2.size()));
        const auto [l1, t1] = join_labels(ids1, out.labels1, truth.tweets, "tweet");
        const auto [l2, t2] = join_labels(ids2, out.labels2, truth.news, "news");
        const hint::MetricReport rep = evaluate_run(out, t, l1, t1, l2, t2);
        std::cout << hint::format_double(theta) << "," << hint::format_double(rep.nmi1) << "," << hint::format_double(rep.f1_1)
                  << "," << hint::format_double(rep.nmi2) << "," << hint::format_double(rep.f1_2) << ","
                  << hint::format_double(rep.cond_entropy) << "," << hint::format_double(rep.d) << ","
                  << hint::format_double(rep.nd) << "\n";
    }
    return 0;
}

struct InspectOptions {
    ClusterOptions cluster;
    std::string out_dir = ".";
    bool dump_counts = false;
};

int cmd_inspect(const InspectOptions& o) {
    const hint::CorpusPair corpus = hint::parse_corpus(o.cluster.t1_path, o.cluster.t2_path);
    hint::HintConfig hc = to_hint_config(o.cluster);
    hc.k1 = hc.k2 = 1;  // unused by input assembly
    const hint::PipelineInputs in = hint::build_pipeline_inputs(corpus, hc);
    fs::create_directories(o.out_dir);
    const fs::path dir(o.out_dir);
    if (in.S1.n() <= 2000)
        hint::write_dense_csv(in.S1.S, (dir / "S1.csv").string());
    else
        hint::write_dense_as_triplets_csv(in.S1.S, (dir / "S1.csv").string());
    if (in.S2.n() <= 2000)
        hint::write_dense_csv(in.S2.S, (dir / "S2.csv").string());
    else
        hint::write_dense_as_triplets_csv(in.S2.S, (dir / "S2.csv").string());
    {
        std::ofstream t12(dir / "T12.csv");
        t12 << "row,col,value\n";
        for (const auto& [i, j] : in.T.pairs()) t12 << i << "," << j << ",1\n";
        std::ofstream a(dir / "anchors.csv");
        a << "tweet_id,news_id\n";
        for (const auto& [i, j] : in.anchors.pairs) a << corpus.collection1[i].id << "," << corpus.collection2[j].id << "\n";
    }
    if (o.dump_counts) {
        for (const auto& cm : in.counts1) hint::write_triplets_csv(cm, (dir / ("counts1_" + cm.meta_path.id + ".csv")).string());
        for (const auto& cm : in.counts2) hint::write_triplets_csv(cm, (dir / ("counts2_" + cm.meta_path.id + ".csv")).string());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"HINT: mutual clustering of comparative text collections over heterogeneous information networks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Config file (key = value lines; sections per subcommand)");
    app.allow_config_extras(CLI::config_extras_mode::error);  // unknown keys are rejected

    ClusterOptions cluster_opts;
    auto* cluster = app.add_subcommand("cluster", "Run the mutual clustering pipeline on two corpora");
    cluster->configurable(true);
    add_cluster_flags(cluster, cluster_opts, true);
    cluster->add_option("--out", cluster_opts.out_dir, "Output directory for result.json, h1/h2.csv and trace.csv");

    SynthOptions synth_opts;
    auto* synth = app.add_subcommand("synth", "Generate a planted-partition comparative corpus");
    synth->configurable(true);
    synth->add_option("--k", synth_opts.cfg.k, "Planted cluster count");
    synth->add_option("--n1", synth_opts.cfg.n1, "Tweet collection size");
    synth->add_option("--n2", synth_opts.cfg.n2, "News collection size");
    synth->add_option("--vocab-per-cluster", synth_opts.cfg.vocab_per_cluster, "Cluster vocabulary size");
    synth->add_option("--shared-vocab", synth_opts.cfg.shared_vocab, "Background vocabulary size");
    synth->add_option("--p-in", synth_opts.cfg.p_in, "Within-cluster token draw probability");
    synth->add_option("--p-out", synth_opts.cfg.p_out, "Background token draw probability");
    synth->add_option("--words-per-doc1", synth_opts.cfg.words_per_doc1, "Tweet token slots (length drawn in 0..N)");
    synth->add_option("--words-per-doc2", synth_opts.cfg.words_per_doc2, "News token slots");
    synth->add_option("--anchor-rate", synth_opts.cfg.anchor_rate, "Fraction of tweets anchored to a news article");
    synth->add_option("--entity-fraction", synth_opts.cfg.entity_fraction, "Fraction of cluster vocabulary typed as entities");
    synth->add_option("--noise-rate", synth_opts.cfg.noise_rate, "Fraction of anchors re-routed to a random news article");
    synth->add_option("--seed", synth_opts.cfg.seed, "Generator seed");
    synth->add_option("--out", synth_opts.out_dir, "Output directory for tweets.jsonl, news.jsonl, truth.csv");

    EvalOptions eval_opts;
    auto* eval = app.add_subcommand("eval", "Score a clustering result against ground truth");
    eval->configurable(true);
    eval->add_option("--result", eval_opts.result_path, "result.json produced by the cluster subcommand");
    eval->add_option("--truth", eval_opts.truth_path, "truth.csv with collection,id,cluster rows")->required();
    eval->add_option("--sweep", eval_opts.sweep, "Sweep mode, e.g. theta=0:0.25:2 (re-runs the pipeline per value)");
    eval->add_flag("--nmi-arithmetic-mean", eval_opts.nmi_arithmetic_mean,
                   "Normalize NMI by the mean of the entropies instead of their geometric mean");
    add_cluster_flags(eval, eval_opts.cluster, false);

    InspectOptions inspect_opts;
    auto* inspect = app.add_subcommand("inspect", "Dump similarity, transition and count matrices as CSV");
    inspect->configurable(true);
    add_cluster_flags(inspect, inspect_opts.cluster, false);
    inspect->add_option("--out", inspect_opts.out_dir, "Output directory");
    inspect->add_flag("--counts", inspect_opts.dump_counts, "Also dump per-meta-path count matrices");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cluster->parsed()) return cmd_cluster(cluster_opts);
        if (synth->parsed()) return cmd_synth(synth_opts);
        if (eval->parsed()) {
            if (!eval_opts.sweep.empty()) {
                if (eval_opts.cluster.t1_path.empty() || eval_opts.cluster.t2_path.empty() || eval_opts.cluster.k1 < 1 ||
                    eval_opts.cluster.k2 < 1)
                    throw hint::ConfigError("eval --sweep needs --t1, --t2, --k1 and --k2");
                return eval_sweep(eval_opts);
            }
            if (eval_opts.result_path.empty()) throw hint::ConfigError("eval needs --result (or --sweep)");
            return eval_result_file(eval_opts);
        }
        if (inspect->parsed()) {
            if (inspect_opts.cluster.t1_path.empty() || inspect_opts.cluster.t2_path.empty())
                throw hint::ConfigError("inspect needs --t1 and --t2");
            return cmd_inspect(inspect_opts);
        }
    } catch (const hint::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const hint::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const hint::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const hint::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
