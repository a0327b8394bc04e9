#include "lcmine/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lcmine/error.hpp"
#include "lcmine/rng.hpp"

namespace lcmine {

std::size_t DecisionTree::predict(const std::vector<int>& row) const {
    std::size_t node = 0;
    while (nodes[node].feature >= 0) {
        const TreeNode& nd = nodes[node];
        node = static_cast<std::size_t>(
            static_cast<double>(row[static_cast<std::size_t>(nd.feature)]) <= nd.threshold
                ? nd.left
                : nd.right);
    }
    const auto& counts = nodes[node].class_counts;
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
        if (counts[c] > counts[best]) best = c;
    }
    return best;
}

bool DecisionTree::uses_feature(std::size_t feature) const {
    for (const auto& nd : nodes) {
        if (nd.feature == static_cast<int>(feature)) return true;
    }
    return false;
}

std::size_t ForestModel::class_id(int code) const {
    const auto it = std::lower_bound(class_codes.begin(), class_codes.end(), code);
    if (it == class_codes.end() || *it != code) {
        throw ArgumentError("unknown class code " + std::to_string(code));
    }
    return static_cast<std::size_t>(it - class_codes.begin());
}

namespace {

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double g = 1.0;
    for (std::size_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        g -= p * p;
    }
    return g;
}

struct TreeBuilder {
    const FeatureMatrix& X;
    const std::vector<std::size_t>& y; // class ids
    std::size_t n_classes;
    const ForestConfig& config;
    Rng& rng;
    std::vector<TreeNode> nodes;

    int grow(std::vector<std::size_t>& rows, std::size_t depth) {
        const std::size_t m = rows.size();
        std::vector<std::size_t> counts(n_classes, 0);
        for (std::size_t r : rows) ++counts[y[r]];
        const bool pure = *std::max_element(counts.begin(), counts.end()) == m;
        const bool depth_capped = config.max_depth && depth >= *config.max_depth;

        if (!pure && !depth_capped && m >= 2 * config.min_leaf) {
            int best_feature = -1;
            double best_threshold = 0.0;
            double best_decrease = 0.0;
            const double parent_gini = gini(counts, m);

            for (std::size_t f : sample_features()) {
                evaluate_feature(rows, counts, parent_gini, f, best_feature, best_threshold,
                                 best_decrease);
            }
            if (best_feature >= 0) {
                std::vector<std::size_t> left_rows, right_rows;
                for (std::size_t r : rows) {
                    (static_cast<double>(X[r][static_cast<std::size_t>(best_feature)]) <=
                             best_threshold
                         ? left_rows
                         : right_rows)
                        .push_back(r);
                }
                rows.clear();
                rows.shrink_to_fit();
                const int id = static_cast<int>(nodes.size());
                nodes.emplace_back();
                nodes[static_cast<std::size_t>(id)].feature = best_feature;
                nodes[static_cast<std::size_t>(id)].threshold = best_threshold;
                const int left = grow(left_rows, depth + 1);
                const int right = grow(right_rows, depth + 1);
                nodes[static_cast<std::size_t>(id)].left = left;
                nodes[static_cast<std::size_t>(id)].right = right;
                return id;
            }
        }

        const int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[static_cast<std::size_t>(id)].class_counts = std::move(counts);
        return id;
    }

    // mtry distinct features, returned in ascending order so split ties
    // resolve to the lowest feature index
    std::vector<std::size_t> sample_features() {
        const std::size_t d = X[0].size();
        std::vector<std::size_t> pool(d);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t i = 0; i < config.mtry; ++i) {
            std::swap(pool[i], pool[i + rng.next_index(d - i)]);
        }
        pool.resize(config.mtry);
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    void evaluate_feature(const std::vector<std::size_t>& rows,
                          const std::vector<std::size_t>& parent_counts, double parent_gini,
                          std::size_t f, int& best_feature, double& best_threshold,
                          double& best_decrease) {
        // distinct values present at this node, ascending
        std::vector<int> values;
        values.reserve(rows.size());
        for (std::size_t r : rows) values.push_back(X[r][f]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        if (values.size() < 2) return;

        const std::size_t m = rows.size();
        std::vector<std::size_t> left(n_classes, 0);
        std::vector<std::size_t> right = parent_counts;

        // candidate thresholds: every distinct value except the largest
        for (std::size_t v = 0; v + 1 < values.size(); ++v) {
            for (std::size_t r : rows) {
                if (X[r][f] == values[v]) {
                    ++left[y[r]];
                    --right[y[r]];
                }
            }
            const std::size_t nl = std::accumulate(left.begin(), left.end(), std::size_t{0});
            const std::size_t nr = m - nl;
            if (nl < config.min_leaf || nr < config.min_leaf) continue;
            const double decrease =
                parent_gini - (static_cast<double>(nl) * gini(left, nl) +
                               static_cast<double>(nr) * gini(right, nr)) /
                                  static_cast<double>(m);
            if (decrease > best_decrease) {
                best_decrease = decrease;
                best_feature = static_cast<int>(f);
                best_threshold = static_cast<double>(values[v]);
            }
        }
    }
};

DecisionTree build_tree(const FeatureMatrix& X, const std::vector<std::size_t>& y,
                        std::size_t n_classes, const ForestConfig& config,
                        std::uint64_t tree_seed) {
    const std::size_t n = X.size();
    Rng rng(tree_seed);

    DecisionTree tree;
    tree.bootstrap_indices.resize(n);
    std::vector<bool> in_bag(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pick = rng.next_index(n);
        tree.bootstrap_indices[i] = pick;
        in_bag[pick] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_bag[i]) tree.oob_indices.push_back(i);
    }

    TreeBuilder builder{X, y, n_classes, config, rng, {}};
    std::vector<std::size_t> rows = tree.bootstrap_indices;
    builder.grow(rows, 0);
    tree.nodes = std::move(builder.nodes);
    return tree;
}

} // namespace

ForestModel train_forest(const FeatureMatrix& features, const std::vector<int>& labels,
                         const ForestConfig& config) {
    const std::size_t n = features.size();
    if (n < 2) throw ArgumentError("train_forest: need at least 2 records");
    if (labels.size() != n) throw ArgumentError("train_forest: feature/label size mismatch");
    const std::size_t d = features[0].size();
    if (d == 0) throw ArgumentError("train_forest: no features");
    if (config.mtry < 1 || config.mtry > d) {
        throw ArgumentError("train_forest: mtry must be in 1.." + std::to_string(d));
    }
    if (config.ntree < 1) throw ArgumentError("train_forest: ntree must be >= 1");
    for (const auto& row : features) {
        if (row.size() != d) throw ArgumentError("train_forest: ragged feature matrix");
    }

    ForestModel model;
    model.config = config;
    model.n_features = d;
    model.class_codes = labels;
    std::sort(model.class_codes.begin(), model.class_codes.end());
    model.class_codes.erase(std::unique(model.class_codes.begin(), model.class_codes.end()),
                            model.class_codes.end());
    const std::size_t n_classes = model.class_codes.size();

    std::vector<std::size_t> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = model.class_id(labels[i]);

    model.trees.resize(config.ntree);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(config.ntree); ++t) {
        model.trees[static_cast<std::size_t>(t)] =
            build_tree(features, y, n_classes, config,
                       derive_seed(config.seed, static_cast<std::uint64_t>(t)));
    }

    // OOB majority vote; tree order is fixed so the tally is deterministic
    std::vector<std::vector<std::size_t>> votes(n, std::vector<std::size_t>(n_classes, 0));
    for (const auto& tree : model.trees) {
        for (std::size_t i : tree.oob_indices) {
            ++votes[i][tree.predict(features[i])];
        }
    }

    model.confusion.assign(n_classes, std::vector<std::size_t>(n_classes, 0));
    model.oob_predictions.assign(n, -1);
    std::size_t counted = 0, wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t total = std::accumulate(votes[i].begin(), votes[i].end(), std::size_t{0});
        if (total == 0) continue; // never out of bag: no OOB vote
        std::size_t pred = 0;
        for (std::size_t c = 1; c < n_classes; ++c) {
            if (votes[i][c] > votes[i][pred]) pred = c;
        }
        model.oob_predictions[i] = model.class_codes[pred];
        ++model.confusion[y[i]][pred];
        ++counted;
        if (pred != y[i]) ++wrong;
    }
    model.oob_error = counted > 0 ? static_cast<double>(wrong) / static_cast<double>(counted) : 0.0;
    model.per_class_error = per_class_errors(model);
    return model;
}

Prediction predict(const ForestModel& model, const std::vector<int>& row) {
    if (row.size() != model.n_features) throw ArgumentError("predict: wrong feature count");
    const std::size_t n_classes = model.class_codes.size();
    std::vector<std::size_t> votes(n_classes, 0);
    for (const auto& tree : model.trees) ++votes[tree.predict(row)];

    Prediction p;
    std::size_t best = 0;
    for (std::size_t c = 1; c < n_classes; ++c) {
        if (votes[c] > votes[best]) best = c;
    }
    p.label = model.class_codes[best];
    p.vote_fractions.resize(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
        p.vote_fractions[c] =
            static_cast<double>(votes[c]) / static_cast<double>(model.trees.size());
    }
    return p;
}

ImportanceReport permutation_importance(const ForestModel& model, const FeatureMatrix& features,
                                        const std::vector<int>& labels,
                                        std::size_t repeats, std::uint64_t seed) {
    const std::size_t d = model.n_features;
    const std::size_t ntree = model.trees.size();
    if (repeats < 1) throw ArgumentError("permutation_importance: repeats must be >= 1");

    std::vector<std::size_t> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) y[i] = model.class_id(labels[i]);

    // per-tree, per-feature accuracy decreases; filled in parallel, reduced
    // in tree order
    std::vector<std::vector<double>> decrease(ntree, std::vector<double>(d, 0.0));
    std::vector<char> has_oob(ntree, 0);

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t tp = 0; tp < static_cast<std::ptrdiff_t>(ntree); ++tp) {
        const auto t = static_cast<std::size_t>(tp);
        const DecisionTree& tree = model.trees[t];
        const auto& oob = tree.oob_indices;
        if (oob.empty()) continue;
        has_oob[t] = 1;
        const double denom = static_cast<double>(oob.size());

        std::size_t base_correct = 0;
        for (std::size_t i : oob) {
            if (tree.predict(features[i]) == y[i]) ++base_correct;
        }
        const double base_acc = static_cast<double>(base_correct) / denom;

        std::vector<std::size_t> perm(oob.size());
        std::vector<int> row;
        for (std::size_t f = 0; f < d; ++f) {
            if (!tree.uses_feature(f)) continue; // permuting cannot change a prediction
            double acc_sum = 0.0;
            for (std::size_t r = 0; r < repeats; ++r) {
                Rng prng(derive_seed(seed, (t * d + f) * repeats + r));
                std::iota(perm.begin(), perm.end(), std::size_t{0});
                prng.shuffle(perm);
                std::size_t correct = 0;
                for (std::size_t p = 0; p < oob.size(); ++p) {
                    row = features[oob[p]];
                    row[f] = features[oob[perm[p]]][f];
                    if (tree.predict(row) == y[oob[p]]) ++correct;
                }
                acc_sum += static_cast<double>(correct) / denom;
            }
            decrease[t][f] = base_acc - acc_sum / static_cast<double>(repeats);
        }
    }

    ImportanceReport report;
    report.mdeca.assign(d, 0.0);
    std::size_t counted_trees = 0;
    for (std::size_t t = 0; t < ntree; ++t) {
        if (!has_oob[t]) continue;
        ++counted_trees;
        for (std::size_t f = 0; f < d; ++f) report.mdeca[f] += decrease[t][f];
    }
    if (counted_trees > 0) {
        for (double& v : report.mdeca) v = v / static_cast<double>(counted_trees) * 100.0;
    }

    report.ranking.resize(d);
    std::iota(report.ranking.begin(), report.ranking.end(), std::size_t{0});
    std::stable_sort(report.ranking.begin(), report.ranking.end(),
                     [&](std::size_t a, std::size_t b) {
                         return report.mdeca[a] > report.mdeca[b];
                     });
    return report;
}

std::map<int, double> per_class_errors(const ForestModel& model) {
    std::map<int, double> out;
    const std::size_t n_classes = model.class_codes.size();
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::size_t total = 0, wrong = 0;
        for (std::size_t p = 0; p < n_classes; ++p) {
            total += model.confusion[c][p];
            if (p != c) wrong += model.confusion[c][p];
        }
        if (total == 0) continue; // class absent from OOB votes
        out[model.class_codes[c]] = static_cast<double>(wrong) / static_cast<double>(total);
    }
    return out;
}

} // namespace lcmine
