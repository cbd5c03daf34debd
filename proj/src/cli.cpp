#include "ugvq/cli.hpp"

#include "ugvq/cluster.hpp"
#include "ugvq/errors.hpp"
#include "ugvq/hodge.hpp"
#include "ugvq/io.hpp"
#include "ugvq/metafeat.hpp"
#include "ugvq/pairdata.hpp"
#include "ugvq/regress.hpp"
#include "ugvq/stats.hpp"
#include "ugvq/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ugvq {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::string format = "json";
};

std::string out_path(const GlobalOptions& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / name).string();
}

// Every command drops a manifest next to its outputs; identical manifests
// imply bit-identical outputs because all commands are deterministic.
void write_manifest(const GlobalOptions& g, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& inputs,
                    const std::vector<std::pair<std::string, std::string>>& parameters,
                    const std::vector<std::string>& outputs) {
    JsonWriter w;
    w.begin_object();
    w.key("command").value(command);
    w.key("tool_version").value(kToolVersion);
    w.key("seed").value(static_cast<std::int64_t>(g.seed));
    w.key("inputs").begin_object();
    for (const auto& [k, v] : inputs) w.key(k).value(v);
    w.end_object();
    w.key("parameters").begin_object();
    for (const auto& [k, v] : parameters) w.key(k).value(v);
    w.end_object();
    w.key("outputs").begin_array();
    for (const auto& o : outputs) w.value(o);
    w.end_array();
    w.end_object();
    write_text_file(out_path(g, command + ".manifest.json"), w.str() + "\n");
}

void write_json_scores(const std::string& path, const std::vector<std::string>& items,
                       const HodgeDecomposition& d) {
    JsonWriter w;
    w.begin_object();
    w.key("items").begin_array();
    for (const auto& it : items) w.value(it);
    w.end_array();
    w.key("scores").begin_array();
    for (Eigen::Index i = 0; i < d.scores.size(); ++i) w.value(d.scores[i]);
    w.end_array();
    w.key("ratios").begin_object();
    w.key("global").value(d.ratios.global_fraction);
    w.key("curl").value(d.ratios.curl_fraction);
    w.key("harmonic").value(d.ratios.harmonic_fraction);
    w.end_object();
    w.key("ratios_weighted").begin_object();
    w.key("global").value(d.ratios_weighted.global_fraction);
    w.key("curl").value(d.ratios_weighted.curl_fraction);
    w.key("harmonic").value(d.ratios_weighted.harmonic_fraction);
    w.end_object();
    w.key("total_inconsistency").value(d.ratios.curl_fraction + d.ratios.harmonic_fraction);
    w.key("triangles").value(static_cast<std::int64_t>(d.triangles.size()));
    w.key("edges").value(static_cast<std::int64_t>(d.flow.entries().size()));
    w.key("ranking").begin_array();
    for (int idx : mos_ranking(d.scores)) w.value(items[idx]);
    w.end_array();
    w.end_object();
    write_text_file(path, w.str() + "\n");
}

struct NamedScores {
    std::vector<std::string> items;
    std::vector<double> values;
};

NamedScores read_scores_json(const std::string& path, const char* value_key) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
    if (!j.contains("items") || !j.contains(value_key)) {
        throw ParseError("'" + path + "' lacks items/" + std::string(value_key) + " arrays");
    }
    NamedScores s;
    for (const auto& it : j["items"]) s.items.push_back(it.get<std::string>());
    for (const auto& v : j[value_key]) s.values.push_back(v.get<double>());
    if (s.items.size() != s.values.size()) throw LengthMismatch(s.items.size(), s.values.size());
    return s;
}

int cmd_synth(const GlobalOptions& g, int items, double spread, int per_pair, double coverage,
              const std::string& noise) {
    if (items < 2) throw InputError("--items must be at least 2");
    if (spread <= 0.0) throw InputError("--spread must be positive");

    SynthConfig config;
    config.true_scores.resize(items);
    for (int i = 0; i < items; ++i) {
        // Descending, zero-mean scores: item v0 is the best.
        config.true_scores[i] =
            spread / 2.0 - spread * static_cast<double>(i) / static_cast<double>(items - 1);
    }
    config.comparisons_per_pair = per_pair;
    config.pair_coverage = coverage;
    config.seed = g.seed;
    if (noise == "bradley_terry") {
        config.noise_model = NoiseModel::bradley_terry;
    } else if (noise == "coin_flip") {
        config.noise_model = NoiseModel::coin_flip;
    } else {
        throw InputError("--noise must be bradley_terry or coin_flip");
    }

    std::vector<ComparisonRecord> records = generate(config);
    std::ostringstream csv;
    write_comparisons_csv(records, csv);
    write_text_file(out_path(g, "comparisons.csv"), csv.str());

    JsonWriter w;
    w.begin_object();
    w.key("items").begin_array();
    for (const auto& name : synth_item_names(items)) w.value(name);
    w.end_array();
    w.key("true_scores").begin_array();
    for (double s : config.true_scores) w.value(s);
    w.end_array();
    w.end_object();
    write_text_file(out_path(g, "truth.json"), w.str() + "\n");

    write_manifest(g, "synth", {},
                   {{"items", std::to_string(items)},
                    {"spread", format_double(spread)},
                    {"comparisons_per_pair", std::to_string(per_pair)},
                    {"coverage", format_double(coverage)},
                    {"noise", noise}},
                   {"comparisons.csv", "truth.json"});
    return 0;
}

int cmd_hodge(const GlobalOptions& g, const std::string& comparisons_path, bool edges_csv) {
    ComparisonGraph graph = read_comparison_file(comparisons_path);
    HodgeDecomposition d = hodge_decompose(graph);
    write_json_scores(out_path(g, "scores.json"), graph.items(), d);

    std::vector<std::string> outputs{"scores.json"};
    if (edges_csv) {
        std::ostringstream csv;
        csv << "item_i,item_j,weight,flow,global,curl,harmonic\n";
        for (const auto& [edge, value] : d.flow.entries()) {
            csv << graph.items()[edge.first] << ',' << graph.items()[edge.second] << ','
                << format_double(d.weights.at(edge)) << ',' << format_double(value) << ','
                << format_double(d.global.get(edge.first, edge.second)) << ','
                << format_double(d.curl.get(edge.first, edge.second)) << ','
                << format_double(d.harmonic.get(edge.first, edge.second)) << '\n';
        }
        write_text_file(out_path(g, "edges.csv"), csv.str());
        outputs.push_back("edges.csv");
    }
    write_manifest(g, "hodge", {{"comparisons", comparisons_path}},
                   {{"edges_csv", edges_csv ? "true" : "false"}}, outputs);
    return 0;
}

int cmd_cluster(const GlobalOptions& g, const std::string& comparisons_path, double delta,
                bool sweep) {
    ComparisonGraph graph = read_comparison_file(comparisons_path);
    Eigen::MatrixXd m = adjacency_matrix(graph);

    if (sweep) {
        std::vector<SweepRow> rows = sweep_restart(m, default_restart_grid());
        std::ostringstream csv;
        csv << "delta,modularity,clusters\n";
        for (const auto& row : rows) {
            csv << format_double(row.delta) << ',' << format_double(row.modularity) << ','
                << row.cluster_count << '\n';
        }
        write_text_file(out_path(g, "sweep.csv"), csv.str());
        write_manifest(g, "cluster", {{"comparisons", comparisons_path}}, {{"sweep", "true"}},
                       {"sweep.csv"});
        return 0;
    }

    ClusterPartition p = cluster_graph(m, delta);
    JsonWriter w;
    w.begin_object();
    w.key("delta").value(delta);
    w.key("modularity").value(p.modularity);
    w.key("items").begin_array();
    for (const auto& it : graph.items()) w.value(it);
    w.end_array();
    w.key("assignment").begin_array();
    for (int a : p.assignment) w.value(a);
    w.end_array();
    w.key("clusters").begin_array();
    for (const auto& members : p.clusters) {
        w.begin_array();
        for (int i : members) w.value(graph.items()[i]);
        w.end_array();
    }
    w.end_array();
    w.end_object();
    write_text_file(out_path(g, "partition.json"), w.str() + "\n");
    write_manifest(g, "cluster", {{"comparisons", comparisons_path}},
                   {{"delta", format_double(delta)}}, {"partition.json"});
    return 0;
}

int cmd_features(const GlobalOptions& g, const std::string& metadata_path) {
    std::vector<MetadataRecord> records = ingest_metadata_file(metadata_path);
    DerivedFeatureTable table = derive_metrics(records);

    std::string output;
    if (g.format == "csv") {
        std::ostringstream csv;
        write_features_csv(table, csv);
        output = "features.csv";
        write_text_file(out_path(g, output), csv.str());
    } else {
        JsonWriter w;
        w.begin_object();
        w.key("items").begin_array();
        for (const auto& it : table.items) w.value(it);
        w.end_array();
        w.key("columns").begin_array();
        for (const auto& c : table.columns) w.value(c);
        w.end_array();
        w.key("values").begin_array();
        for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
            w.begin_array();
            for (Eigen::Index c = 0; c < table.values.cols(); ++c) w.value(table.values(i, c));
            w.end_array();
        }
        w.end_array();
        w.key("external_columns").begin_array();
        for (const auto& c : table.external_names) w.value(c);
        w.end_array();
        w.end_object();
        output = "features.json";
        write_text_file(out_path(g, output), w.str() + "\n");
    }
    write_manifest(g, "features", {{"metadata", metadata_path}}, {{"format", g.format}}, {output});
    return 0;
}

// Restrict and reorder the derived table to the scored items.
DerivedFeatureTable align_to_items(const DerivedFeatureTable& table,
                                   const std::vector<std::string>& items) {
    DerivedFeatureTable out;
    out.columns = table.columns;
    out.external_names = table.external_names;
    out.values.resize(static_cast<Eigen::Index>(items.size()), table.values.cols());
    out.external_values.resize(static_cast<Eigen::Index>(items.size()),
                               table.external_values.cols());
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto it = std::find(table.items.begin(), table.items.end(), items[i]);
        if (it == table.items.end()) {
            throw InputError("scored item '" + items[i] + "' is missing from the metadata");
        }
        Eigen::Index src = std::distance(table.items.begin(), it);
        out.items.push_back(items[i]);
        out.values.row(static_cast<Eigen::Index>(i)) = table.values.row(src);
        out.external_values.row(static_cast<Eigen::Index>(i)) = table.external_values.row(src);
    }
    return out;
}

int cmd_fit(const GlobalOptions& g, const std::string& metadata_path,
            const std::string& scores_path, const std::string& model_kind, int top_k,
            const std::string& external, SvrHyper hyper) {
    if (model_kind != "linear" && model_kind != "svr") {
        throw InputError("--model must be linear or svr");
    }
    std::vector<MetadataRecord> records = ingest_metadata_file(metadata_path);
    DerivedFeatureTable table = derive_metrics(records);
    NamedScores scores = read_scores_json(scores_path, "scores");
    table = align_to_items(table, scores.items);
    if (top_k < 1 || top_k > kMetricCount) {
        throw InputError("--top-k must lie in 1.." + std::to_string(kMetricCount));
    }

    Eigen::VectorXd mos = Eigen::Map<const Eigen::VectorXd>(
        scores.values.data(), static_cast<Eigen::Index>(scores.values.size()));
    ModelKind kind = model_kind == "linear" ? ModelKind::linear : ModelKind::svr;

    std::vector<CurvePoint> curve = incremental_feature_eval(table, mos, kind, external, hyper);
    std::ostringstream curve_csv;
    curve_csv << "k,srocc\n";
    for (int k = 0; k < top_k; ++k) {
        curve_csv << curve[k].k << ',' << format_double(curve[k].srocc) << '\n';
    }
    write_text_file(out_path(g, "curve.csv"), curve_csv.str());

    std::vector<MetricRank> ranking = rank_metrics_by_srocc(table, mos);
    Eigen::MatrixXd x = top_k_features(table, ranking, top_k, external);
    std::vector<std::string> feature_names;
    for (int c = 0; c < top_k; ++c) feature_names.push_back(ranking[c].name);
    if (!external.empty()) feature_names.push_back(external);

    Eigen::VectorXd preds;
    JsonWriter model_json;
    model_json.begin_object();
    model_json.key("kind").value(model_kind);
    model_json.key("features").begin_array();
    for (const auto& name : feature_names) model_json.value(name);
    model_json.end_array();
    auto write_standardizer = [&](const Standardizer& s) {
        model_json.key("standardizer").begin_object();
        model_json.key("mean").begin_array();
        for (Eigen::Index i = 0; i < s.mean.size(); ++i) model_json.value(s.mean[i]);
        model_json.end_array();
        model_json.key("stddev").begin_array();
        for (Eigen::Index i = 0; i < s.stddev.size(); ++i) model_json.value(s.stddev[i]);
        model_json.end_array();
        model_json.end_object();
    };
    if (kind == ModelKind::linear) {
        LinearModel model = fit_linear(x, mos);
        preds = predict_all(model, x);
        model_json.key("weights").begin_array();
        for (Eigen::Index i = 0; i < model.weights.size(); ++i) model_json.value(model.weights[i]);
        model_json.end_array();
        model_json.key("bias").value(model.bias);
        write_standardizer(model.standardizer);
    } else {
        SvrModel model = fit_svr(x, mos, hyper);
        preds = predict_all(model, x);
        model_json.key("coefficients").begin_array();
        for (Eigen::Index i = 0; i < model.coefficients.size(); ++i) {
            model_json.value(model.coefficients[i]);
        }
        model_json.end_array();
        model_json.key("bias").value(model.bias);
        model_json.key("C").value(model.C);
        model_json.key("epsilon").value(model.epsilon);
        model_json.key("sigma_sq").value(model.sigma_sq);
        model_json.key("support_vectors").begin_array();
        for (Eigen::Index i = 0; i < model.support_vectors.rows(); ++i) {
            model_json.begin_array();
            for (Eigen::Index c = 0; c < model.support_vectors.cols(); ++c) {
                model_json.value(model.support_vectors(i, c));
            }
            model_json.end_array();
        }
        model_json.end_array();
        write_standardizer(model.standardizer);
    }
    model_json.end_object();
    write_text_file(out_path(g, "model.json"), model_json.str() + "\n");

    JsonWriter pred_json;
    pred_json.begin_object();
    pred_json.key("items").begin_array();
    for (const auto& it : table.items) pred_json.value(it);
    pred_json.end_array();
    pred_json.key("predicted").begin_array();
    for (Eigen::Index i = 0; i < preds.size(); ++i) pred_json.value(preds[i]);
    pred_json.end_array();
    pred_json.key("model").value(model_kind);
    pred_json.key("feature_count").value(static_cast<std::int64_t>(feature_names.size()));
    pred_json.end_object();
    write_text_file(out_path(g, "predictions.json"), pred_json.str() + "\n");

    write_manifest(g, "fit",
                   {{"metadata", metadata_path}, {"scores", scores_path}},
                   {{"model", model_kind},
                    {"top_k", std::to_string(top_k)},
                    {"external", external},
                    {"svr_c", format_double(hyper.C)},
                    {"svr_epsilon", format_double(hyper.epsilon)},
                    {"svr_sigma_sq", format_double(hyper.sigma_sq)}},
                   {"model.json", "curve.csv", "predictions.json"});
    return 0;
}

std::string file_stem(const std::string& path) { return fs::path(path).stem().string(); }

int cmd_report(const GlobalOptions& g, const std::vector<std::string>& prediction_paths,
               const std::string& scores_path) {
    NamedScores scores = read_scores_json(scores_path, "scores");

    JsonWriter w;
    w.begin_object();
    w.key("scores").value(scores_path);
    w.key("predictions").begin_array();

    std::vector<std::vector<double>> diff_groups;
    std::vector<std::string> outputs;
    for (const auto& path : prediction_paths) {
        NamedScores pred = read_scores_json(path, "predicted");
        if (pred.items.size() != scores.items.size()) {
            throw LengthMismatch(pred.items.size(), scores.items.size());
        }
        // Align predictions to the scored item order.
        std::vector<double> aligned(scores.items.size());
        for (std::size_t i = 0; i < scores.items.size(); ++i) {
            auto it = std::find(pred.items.begin(), pred.items.end(), scores.items[i]);
            if (it == pred.items.end()) {
                throw InputError("item '" + scores.items[i] + "' missing from '" + path + "'");
            }
            aligned[i] = pred.values[std::distance(pred.items.begin(), it)];
        }

        double rho = srocc(aligned, scores.values);
        SroccSignificance sig = srocc_significance(rho, static_cast<int>(aligned.size()));
        RankDiffHistogram hist = rank_differences(aligned, scores.values);

        w.begin_object();
        w.key("file").value(path);
        w.key("srocc").value(rho);
        w.key("f_statistic").value(sig.f_statistic);
        w.key("significant_at_0_05").value(sig.significant_at_0_05);
        w.key("histogram").begin_array();
        for (const auto& [diff, count] : hist.bins) {
            w.begin_array();
            w.value(diff);
            w.value(count);
            w.end_array();
        }
        w.end_array();
        w.end_object();

        std::string hist_name = "rankdiff_" + file_stem(path) + ".csv";
        std::ostringstream csv;
        csv << "rank_diff,count\n";
        for (const auto& [diff, count] : hist.bins) csv << diff << ',' << count << '\n';
        write_text_file(out_path(g, hist_name), csv.str());
        outputs.push_back(hist_name);

        diff_groups.push_back(std::vector<double>(hist.differences.begin(), hist.differences.end()));
    }
    w.end_array();

    if (diff_groups.size() >= 2) {
        AnovaResult anova = one_way_anova(diff_groups);
        w.key("anova").begin_object();
        w.key("f_statistic").value(anova.f_statistic);
        w.key("significant_at_0_01").value(anova.significant_at_0_01);
        w.key("df_between").value(anova.df_between);
        w.key("df_within").value(anova.df_within);
        w.end_object();
    }
    w.end_object();
    write_text_file(out_path(g, "report.json"), w.str() + "\n");
    outputs.push_back("report.json");

    std::vector<std::pair<std::string, std::string>> inputs{{"scores", scores_path}};
    for (std::size_t i = 0; i < prediction_paths.size(); ++i) {
        inputs.push_back({"predictions_" + std::to_string(i), prediction_paths[i]});
    }
    write_manifest(g, "report", inputs, {}, outputs);
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Paired-comparison quality analysis toolkit"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--out-dir", g.out_dir, "Directory for outputs")->capture_default_str();
    app.add_option("--seed", g.seed, "Random seed for synthetic data")->capture_default_str();
    app.add_option("--format", g.format, "Structured output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic paired-comparison dataset");
    int synth_items = 20;
    double synth_spread = 3.0;
    int synth_per_pair = 10;
    double synth_coverage = 1.0;
    std::string synth_noise = "bradley_terry";
    synth_cmd->add_option("--items", synth_items, "Number of items")->capture_default_str();
    synth_cmd->add_option("--spread", synth_spread, "True-score range")->capture_default_str();
    synth_cmd->add_option("--comparisons-per-pair", synth_per_pair, "Judgments per sampled pair")
        ->capture_default_str();
    synth_cmd->add_option("--coverage", synth_coverage, "Fraction of pairs sampled")
        ->capture_default_str();
    synth_cmd->add_option("--noise", synth_noise, "bradley_terry or coin_flip")
        ->capture_default_str();

    auto* hodge_cmd = app.add_subcommand("hodge", "Global scores and flow decomposition");
    std::string hodge_input;
    bool hodge_edges = false;
    hodge_cmd->add_option("comparisons", hodge_input, "Comparisons CSV")->required();
    hodge_cmd->add_flag("--edges-csv", hodge_edges, "Also dump per-edge components");

    auto* cluster_cmd = app.add_subcommand("cluster", "RWR clustering of the comparison graph");
    std::string cluster_input;
    double cluster_delta = 0.5;
    bool cluster_sweep = false;
    cluster_cmd->add_option("comparisons", cluster_input, "Comparisons CSV")->required();
    cluster_cmd->add_option("--delta", cluster_delta, "Restart probability in (0,1)")
        ->capture_default_str();
    cluster_cmd->add_flag("--sweep", cluster_sweep, "Sweep delta over 0.01..0.99");

    auto* features_cmd = app.add_subcommand("features", "Derive the metadata metrics table");
    std::string features_input;
    features_cmd->add_option("metadata", features_input, "Metadata CSV")->required();

    auto* fit_cmd = app.add_subcommand("fit", "Fit a quality predictor from metadata metrics");
    std::string fit_metadata, fit_scores, fit_model = "linear", fit_external;
    int fit_top_k = kMetricCount;
    SvrHyper fit_hyper;
    fit_cmd->add_option("metadata", fit_metadata, "Metadata CSV")->required();
    fit_cmd->add_option("scores", fit_scores, "scores.json from the hodge command")->required();
    fit_cmd->add_option("--model", fit_model, "linear or svr")->capture_default_str();
    fit_cmd->add_option("--top-k", fit_top_k, "Number of top-ranked metrics")
        ->capture_default_str();
    fit_cmd->add_option("--external", fit_external, "External score column to append");
    fit_cmd->add_option("--svr-c", fit_hyper.C, "SVR box constraint")->capture_default_str();
    fit_cmd->add_option("--svr-epsilon", fit_hyper.epsilon, "SVR tube width (negative: auto)");
    fit_cmd->add_option("--svr-sigma-sq", fit_hyper.sigma_sq,
                        "Gaussian kernel variance (nonpositive: median heuristic)");

    auto* report_cmd = app.add_subcommand("report", "Rank statistics for prediction files");
    std::vector<std::string> report_predictions;
    std::string report_scores;
    report_cmd->add_option("predictions", report_predictions, "predictions.json files")
        ->required();
    report_cmd->add_option("--scores", report_scores, "scores.json with the MOS proxy")
        ->required();

    std::vector<const char*> argv;
    argv.push_back("ugvq");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (synth_cmd->parsed()) {
            return cmd_synth(g, synth_items, synth_spread, synth_per_pair, synth_coverage,
                             synth_noise);
        }
        if (hodge_cmd->parsed()) return cmd_hodge(g, hodge_input, hodge_edges);
        if (cluster_cmd->parsed()) {
            return cmd_cluster(g, cluster_input, cluster_delta, cluster_sweep);
        }
        if (features_cmd->parsed()) return cmd_features(g, features_input);
        if (fit_cmd->parsed()) {
            return cmd_fit(g, fit_metadata, fit_scores, fit_model, fit_top_k, fit_external,
                           fit_hyper);
        }
        if (report_cmd->parsed()) return cmd_report(g, report_predictions, report_scores);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

} // namespace ugvq
