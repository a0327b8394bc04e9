#include "lcmine/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "lcmine/error.hpp"

namespace lcmine {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json model_json(const ClusterModel& model) {
    ordered_json j;
    j["k"] = model.config.k;
    j["metric_mode"] = metric_mode_name(model.config.metric_mode);
    j["seed"] = model.config.seed;
    j["max_iter"] = model.config.max_iter;
    j["init"] = model.config.init == InitMethod::kmeans_pp ? "kmeans_pp" : "random_points";
    j["iterations"] = model.iterations;
    j["converged"] = model.converged;
    j["objective"] = model.objective;
    j["objective_history"] = model.objective_history;
    ordered_json cents = ordered_json::array();
    for (const auto& c : model.centroids) {
        cents.push_back(std::vector<double>(c.begin(), c.end()));
    }
    j["centroids"] = cents;
    if (!model.medoid_indices.empty()) j["medoid_indices"] = model.medoid_indices;
    j["assignments"] = model.assignments;
    if (model.labels_valid) {
        ordered_json labels = ordered_json::array();
        for (const auto& l : model.labels) labels.push_back(cluster_label_name(l));
        j["labels"] = labels;
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

const char* kClusterColors[] = {"#4878d0", "#ee854a", "#6acc64", "#d65f5f", "#956cb4"};

const char* cluster_color(std::size_t c) { return kClusterColors[c % 5]; }

std::string svg_open(double width, double height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
           fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
}

// Per-sample silhouette bars grouped by cluster, sorted descending within
// each group.
std::string silhouette_svg(const SilhouetteResult& sil,
                           const std::vector<std::size_t>& assignments) {
    const double width = 640.0, height = 480.0, left = 60.0, top = 20.0;
    const double plot_w = width - left - 20.0, plot_h = height - top - 40.0;
    const std::size_t n = sil.per_sample.size();

    std::string svg = svg_open(width, height);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // x axis: silhouette value in [-1, 1]
    const double x0 = left + plot_w / 2.0;
    svg += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(x0) + "\" y2=\"" +
           fmt(top + plot_h) + "\" stroke=\"#999\"/>\n";

    double y = top;
    const double bar_h = plot_h / static_cast<double>(n);
    for (std::size_t c = 0; c < sil.k; ++c) {
        std::vector<double> vals;
        for (std::size_t i = 0; i < n; ++i) {
            if (assignments[i] == c) vals.push_back(sil.per_sample[i]);
        }
        std::sort(vals.rbegin(), vals.rend());
        for (double v : vals) {
            const double x = x0 + std::min(0.0, v) * plot_w / 2.0;
            const double w = std::abs(v) * plot_w / 2.0;
            svg += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) +
                   "\" height=\"" + fmt(std::max(bar_h, 0.2)) + "\" fill=\"" + cluster_color(c) +
                   "\"/>\n";
            y += bar_h;
        }
    }
    for (double tick : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        const double x = x0 + tick * plot_w / 2.0;
        svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(height - 12.0) +
               "\" font-size=\"12\" text-anchor=\"middle\">" + fmt(tick) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(width / 2.0) + "\" y=\"" + fmt(height - 26.0) +
           "\" font-size=\"12\" text-anchor=\"middle\">silhouette value</text>\n";
    svg += "</svg>\n";
    return svg;
}

// One profile line per centroid across the 15 items.
std::string centroids_svg(const ClusterModel& model) {
    const double width = 640.0, height = 400.0, left = 50.0, top = 20.0;
    const double plot_w = width - left - 20.0, plot_h = height - top - 50.0;

    std::string svg = svg_open(width, height);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // y axis: likert score 1..5
    for (int s = 1; s <= 5; ++s) {
        const double y = top + plot_h * (5.0 - s) / 4.0;
        svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(y) + "\" x2=\"" +
               fmt(left + plot_w) + "\" y2=\"" + fmt(y) + "\" stroke=\"#eee\"/>\n";
        svg += "<text x=\"" + fmt(left - 8.0) + "\" y=\"" + fmt(y + 4.0) +
               "\" font-size=\"12\" text-anchor=\"end\">" + std::to_string(s) + "</text>\n";
    }
    for (std::size_t c = 0; c < model.centroids.size(); ++c) {
        std::string points;
        for (std::size_t q = 0; q < kLikertItems; ++q) {
            const double x =
                left + plot_w * static_cast<double>(q) / static_cast<double>(kLikertItems - 1);
            const double y = top + plot_h * (5.0 - model.centroids[c][q]) / 4.0;
            points += fmt(x) + "," + fmt(y) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(cluster_color(c)) +
               "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
        std::string name = model.labels_valid ? cluster_label_name(model.labels[c])
                                              : "cluster " + std::to_string(c);
        svg += "<text x=\"" + fmt(left + 10.0 + 110.0 * static_cast<double>(c)) + "\" y=\"" +
               fmt(height - 10.0) + "\" font-size=\"12\" fill=\"" + cluster_color(c) + "\">" +
               name + "</text>\n";
    }
    for (std::size_t q = 0; q < kLikertItems; ++q) {
        const double x =
            left + plot_w * static_cast<double>(q) / static_cast<double>(kLikertItems - 1);
        svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(top + plot_h + 16.0) +
               "\" font-size=\"10\" text-anchor=\"middle\">q" + std::to_string(q + 1) +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

// Occupation x cluster stacked bars.
std::string career_svg(const std::vector<std::vector<std::size_t>>& career_by_cluster,
                       const ClusterModel& model) {
    const double width = 640.0, height = 400.0, left = 50.0, top = 20.0;
    const double plot_w = width - left - 20.0, plot_h = height - top - 50.0;
    const std::size_t n_careers = career_by_cluster.size();

    std::size_t max_total = 1;
    for (const auto& row : career_by_cluster) {
        std::size_t total = 0;
        for (std::size_t c : row) total += c;
        max_total = std::max(max_total, total);
    }

    std::string svg = svg_open(width, height);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const double slot = plot_w / static_cast<double>(n_careers);
    const double bar_w = slot * 0.7;
    for (std::size_t career = 0; career < n_careers; ++career) {
        const double x = left + slot * static_cast<double>(career) + slot * 0.15;
        double y = top + plot_h;
        for (std::size_t c = 0; c < career_by_cluster[career].size(); ++c) {
            const double h = plot_h * static_cast<double>(career_by_cluster[career][c]) /
                             static_cast<double>(max_total);
            y -= h;
            svg += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(bar_w) +
                   "\" height=\"" + fmt(h) + "\" fill=\"" + cluster_color(c) + "\"/>\n";
        }
        svg += "<text x=\"" + fmt(x + bar_w / 2.0) + "\" y=\"" + fmt(top + plot_h + 16.0) +
               "\" font-size=\"10\" text-anchor=\"middle\">" + std::to_string(career + 1) +
               "</text>\n";
    }
    (void)model;
    svg += "<text x=\"" + fmt(width / 2.0) + "\" y=\"" + fmt(height - 10.0) +
           "\" font-size=\"12\" text-anchor=\"middle\">occupation category</text>\n";
    svg += "</svg>\n";
    return svg;
}

} // namespace

std::string report_to_json(const PipelineReport& report) {
    ordered_json j;
    j["tool"] = "lcmine";
    j["version"] = kToolVersion;
    j["config"] = ordered_json::parse(report.config_json);

    ordered_json data;
    data["n"] = report.n;
    if (report.cronbach_alpha) {
        data["cronbach_alpha"] = *report.cronbach_alpha;
        data["cronbach_alpha_pass"] = report.alpha_pass;
    } else {
        data["cronbach_alpha"] = nullptr;
    }
    j["dataset"] = data;

    ordered_json sil;
    for (const auto& [k, mean] : report.silhouette_means) {
        sil[std::to_string(k)] = mean;
    }
    j["silhouette_means"] = sil;
    j["chosen_k"] = report.chosen_k;
    j["cluster_model"] = model_json(report.model);

    ordered_json sizes = ordered_json::array();
    for (std::size_t s : report.model.cluster_sizes()) sizes.push_back(s);
    j["cluster_sizes"] = sizes;

    ordered_json per_cluster = ordered_json::array();
    for (double m : report.chosen_silhouette.per_cluster_mean) per_cluster.push_back(m);
    j["silhouette_per_cluster_mean"] = per_cluster;

    if (report.embedding) {
        ordered_json emb;
        emb["final_kl"] = report.embedding->final_kl;
        emb["perplexity"] = report.embedding->config.perplexity;
        emb["iterations"] = report.embedding->config.iterations;
        emb["learning_rate"] = report.embedding->config.learning_rate;
        emb["seed"] = report.embedding->config.seed;
        j["tsne"] = emb;
    } else {
        j["tsne"] = nullptr;
    }

    if (report.forest_oob_error) {
        ordered_json forest;
        forest["oob_error"] = *report.forest_oob_error;
        ordered_json per_class;
        for (const auto& [code, err] : report.forest_per_class_error) {
            per_class[std::to_string(code)] = err;
        }
        forest["per_class_error"] = per_class;
        ordered_json importance = ordered_json::array();
        for (std::size_t f : report.importance_ranking) {
            ordered_json row;
            row["factor"] = profile_field_infos()[f].name;
            row["mdeca"] = report.importance_mdeca[f];
            importance.push_back(row);
        }
        forest["importance"] = importance;
        j["forest"] = forest;
    } else {
        j["forest"] = nullptr;
    }

    if (report.planted) {
        ordered_json p;
        p["ari"] = report.planted->ari;
        if (!report.planted->planted_order.empty()) {
            p["planted_importance_order"] = report.planted->planted_order;
            p["recovered_importance_order"] = report.planted->recovered_order;
            p["importance_order_matches"] = report.planted->order_matches;
        }
        j["planted_recovery"] = p;
    } else {
        j["planted_recovery"] = nullptr;
    }

    j["career_by_cluster"] = report.career_by_cluster;
    j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
}

std::string cluster_model_to_json(const ClusterModel& model) {
    return model_json(model).dump(2) + "\n";
}

ClusterModel cluster_model_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw DataError(std::string("invalid model JSON: ") + e.what());
    }
    ClusterModel m;
    m.config.k = j.at("k").get<std::size_t>();
    m.config.metric_mode = j.at("metric_mode").get<std::string>() == "composite_medoid"
                               ? MetricMode::composite_medoid
                               : MetricMode::classic_euclidean;
    m.config.seed = j.at("seed").get<std::uint64_t>();
    m.config.max_iter = j.at("max_iter").get<std::size_t>();
    m.config.init = j.at("init").get<std::string>() == "kmeans_pp" ? InitMethod::kmeans_pp
                                                                   : InitMethod::random_points;
    m.iterations = j.at("iterations").get<std::size_t>();
    m.converged = j.at("converged").get<bool>();
    m.objective = j.at("objective").get<double>();
    m.objective_history = j.at("objective_history").get<std::vector<double>>();
    for (const auto& cj : j.at("centroids")) {
        const auto vals = cj.get<std::vector<double>>();
        if (vals.size() != kLikertItems) throw DataError("model JSON: bad centroid dimension");
        Centroid c;
        std::copy(vals.begin(), vals.end(), c.begin());
        m.centroids.push_back(c);
    }
    if (j.contains("medoid_indices")) {
        m.medoid_indices = j.at("medoid_indices").get<std::vector<std::size_t>>();
    }
    m.assignments = j.at("assignments").get<std::vector<std::size_t>>();
    if (j.contains("labels")) {
        for (const auto& lj : j.at("labels")) {
            const std::string name = lj.get<std::string>();
            if (name == "Strong") m.labels.push_back(ClusterLabel::Strong);
            else if (name == "Neutral") m.labels.push_back(ClusterLabel::Neutral);
            else if (name == "NotStrong") m.labels.push_back(ClusterLabel::NotStrong);
            else throw DataError("model JSON: unknown label " + name);
        }
        m.labels_valid = true;
    }
    return m;
}

void render_report(const PipelineReport& report, const std::string& out_dir, bool emit_figures) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create output directory: " + out_dir);

    write_text_file(out_dir + "/report.json", report_to_json(report));
    if (!emit_figures) return;

    // figures plus plain-text sidecars with the same data
    write_text_file(out_dir + "/silhouette.svg",
                    silhouette_svg(report.chosen_silhouette, report.model.assignments));
    {
        std::string csv = "cluster,silhouette\n";
        for (std::size_t i = 0; i < report.chosen_silhouette.per_sample.size(); ++i) {
            csv += std::to_string(report.model.assignments[i]) + "," +
                   std::to_string(report.chosen_silhouette.per_sample[i]) + "\n";
        }
        write_text_file(out_dir + "/silhouette.csv", csv);
    }

    write_text_file(out_dir + "/centroids.svg", centroids_svg(report.model));
    {
        std::string csv = "cluster";
        for (std::size_t q = 1; q <= kLikertItems; ++q) csv += ",q" + std::to_string(q);
        csv += "\n";
        for (std::size_t c = 0; c < report.model.centroids.size(); ++c) {
            csv += std::to_string(c);
            for (double v : report.model.centroids[c]) csv += "," + std::to_string(v);
            csv += "\n";
        }
        write_text_file(out_dir + "/centroids.csv", csv);
    }

    write_text_file(out_dir + "/career_hist.svg",
                    career_svg(report.career_by_cluster, report.model));
    {
        std::string csv = "career";
        for (std::size_t c = 0; c < report.model.config.k; ++c) {
            csv += ",cluster" + std::to_string(c);
        }
        csv += "\n";
        for (std::size_t career = 0; career < report.career_by_cluster.size(); ++career) {
            csv += std::to_string(career + 1);
            for (std::size_t cnt : report.career_by_cluster[career]) {
                csv += "," + std::to_string(cnt);
            }
            csv += "\n";
        }
        write_text_file(out_dir + "/career_hist.csv", csv);
    }

    if (report.embedding) {
        write_embedding_csv(*report.embedding, report.model, out_dir + "/embedding.csv");
    }
}

void write_embedding_csv(const EmbeddingResult& embedding, const ClusterModel& model,
                         const std::string& path) {
    std::string csv = "x,y,cluster,label\n";
    for (std::size_t i = 0; i < embedding.n; ++i) {
        const std::size_t c = model.assignments[i];
        const std::string label = model.labels_valid ? cluster_label_name(model.labels[c])
                                                     : std::to_string(c);
        csv += std::to_string(embedding.x(i)) + "," + std::to_string(embedding.y(i)) + "," +
               std::to_string(c) + "," + label + "\n";
    }
    write_text_file(path, csv);
}

} // namespace lcmine
