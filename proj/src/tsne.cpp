#include "lcmine/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "lcmine/error.hpp"
#include "lcmine/rng.hpp"

namespace lcmine {

namespace {

// conditional row i: p_{j|i} = exp(-beta d_ij^2) / sum, with beta bisected
// so the row perplexity exp(H) hits the target
void conditional_row(const DissimilarityMatrix& distances, std::size_t i,
                     double perplexity, std::vector<double>& row) {
    const std::size_t n = distances.size();
    double beta = 1.0;
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();

    for (int step = 0; step < 100; ++step) {
        double sum = 0.0;
        double weighted = 0.0; // sum of beta * d^2 * p (unnormalized)
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                row[j] = 0.0;
                continue;
            }
            const double d2 = distances.at(i, j) * distances.at(i, j);
            row[j] = std::exp(-beta * d2);
            sum += row[j];
            weighted += row[j] * beta * d2;
        }
        if (sum <= 0.0) {
            // beta too large for this row's scale
            hi = beta;
            beta = (lo + hi) / 2.0;
            continue;
        }
        // Shannon entropy in nats: H = log(sum) + weighted / sum
        const double entropy = std::log(sum) + weighted / sum;
        const double realized = std::exp(entropy);
        if (std::abs(realized - perplexity) <= 1e-3) {
            for (std::size_t j = 0; j < n; ++j) row[j] /= sum;
            return;
        }
        if (realized > perplexity) {
            lo = beta;
            beta = std::isinf(hi) ? beta * 2.0 : (lo + hi) / 2.0;
        } else {
            hi = beta;
            beta = (lo + hi) / 2.0;
        }
    }
    throw NumericalError("tsne_affinities: perplexity bisection did not converge for row " +
                         std::to_string(i));
}

} // namespace

std::vector<double> tsne_conditionals(const DissimilarityMatrix& distances, double perplexity) {
    const std::size_t n = distances.size();
    if (n < 3) throw ArgumentError("tsne_affinities: need at least 3 points");
    if (perplexity >= static_cast<double>(n)) {
        throw ArgumentError("tsne_affinities: perplexity must be < n");
    }
    if (perplexity <= 0.0) throw ArgumentError("tsne_affinities: perplexity must be positive");

    std::vector<double> cond(n * n, 0.0);
    std::exception_ptr failure; // exceptions must not unwind out of the parallel region
#pragma omp parallel
    {
        std::vector<double> row(n);
#pragma omp for schedule(dynamic, 8)
        for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(n); ++ip) {
            const auto i = static_cast<std::size_t>(ip);
            try {
                conditional_row(distances, i, perplexity, row);
                std::copy(row.begin(), row.end(),
                          cond.begin() + static_cast<std::ptrdiff_t>(i * n));
            } catch (...) {
#pragma omp critical(tsne_conditionals_failure)
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return cond;
}

std::vector<double> tsne_affinities(const DissimilarityMatrix& distances, double perplexity) {
    const std::size_t n = distances.size();
    const std::vector<double> cond = tsne_conditionals(distances, perplexity);

    // symmetrize once per pair so P is exactly symmetric
    std::vector<double> P(n * n, 0.0);
    const double scale = 1.0 / (2.0 * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double p = (cond[i * n + j] + cond[j * n + i]) * scale;
            P[i * n + j] = p;
            P[j * n + i] = p;
        }
    }
    return P;
}

namespace {

double student_weight(const std::vector<double>& y, std::size_t i, std::size_t j) {
    const double dx = y[2 * i] - y[2 * j];
    const double dy = y[2 * i + 1] - y[2 * j + 1];
    return 1.0 / (1.0 + dx * dx + dy * dy);
}

// Z = sum over ordered pairs i != j of the Student-t weights; per-row sums
// are reduced in index order so the value is thread-count independent.
double partition_sum(const std::vector<double>& y, std::size_t n) {
    std::vector<double> row_sums(n, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(n); ++ip) {
        const auto i = static_cast<std::size_t>(ip);
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) s += student_weight(y, i, j);
        }
        row_sums[i] = s;
    }
    double z = 0.0;
    for (double s : row_sums) z += s;
    return z;
}

std::vector<double> gradient_impl(const std::vector<double>& P,
                                  const std::vector<double>& y, std::size_t n,
                                  bool parallel) {
    const double Z = partition_sum(y, n);
    std::vector<double> grad(2 * n, 0.0);
    auto point_grad = [&](std::size_t i) {
        double gx = 0.0, gy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double w = student_weight(y, i, j);
            const double q = w / Z;
            const double coef = 4.0 * (P[i * n + j] - q) * w;
            gx += coef * (y[2 * i] - y[2 * j]);
            gy += coef * (y[2 * i + 1] - y[2 * j + 1]);
        }
        grad[2 * i] = gx;
        grad[2 * i + 1] = gy;
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(n); ++ip) {
            point_grad(static_cast<std::size_t>(ip));
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) point_grad(i);
    }
    return grad;
}

} // namespace

double tsne_kl(const std::vector<double>& P, const std::vector<double>& coords, std::size_t n) {
    const double Z = partition_sum(coords, n);
    std::vector<double> row_terms(n, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(n); ++ip) {
        const auto i = static_cast<std::size_t>(ip);
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double p = P[i * n + j];
            if (p <= 0.0) continue;
            const double q = student_weight(coords, i, j) / Z;
            s += p * std::log(p / q);
        }
        row_terms[i] = s;
    }
    double kl = 0.0;
    for (double t : row_terms) kl += t;
    return kl;
}

std::vector<double> tsne_gradient(const std::vector<double>& P,
                                  const std::vector<double>& coords, std::size_t n) {
    return gradient_impl(P, coords, n, true);
}

std::vector<double> tsne_gradient_serial(const std::vector<double>& P,
                                         const std::vector<double>& coords, std::size_t n) {
    return gradient_impl(P, coords, n, false);
}

EmbeddingResult tsne_embed(const std::vector<double>& P, std::size_t n,
                           const TsneConfig& config) {
    if (P.size() != n * n) throw ArgumentError("tsne_embed: P must be n x n");

    EmbeddingResult res;
    res.config = config;
    res.n = n;
    res.coords.resize(2 * n);

    Rng rng(config.seed);
    for (double& c : res.coords) c = rng.next_gaussian() * 1e-4;

    std::vector<double> exaggerated(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) exaggerated[i] = P[i] * config.exaggeration;

    std::vector<double> velocity(2 * n, 0.0);
    std::vector<double> gains(2 * n, 1.0);

    for (std::size_t iter = 0; iter < config.iterations; ++iter) {
        const bool exaggerating = iter < config.exaggeration_until;
        const auto& active_p = exaggerating ? exaggerated : P;
        const std::vector<double> grad = tsne_gradient(active_p, res.coords, n);

        const double momentum =
            iter < config.momentum_switch ? config.momentum_initial : config.momentum_final;
        for (std::size_t d = 0; d < 2 * n; ++d) {
            const bool same_sign = (grad[d] > 0.0) == (velocity[d] > 0.0);
            gains[d] = same_sign ? std::max(gains[d] * 0.8, 0.01) : gains[d] + 0.2;
            velocity[d] = momentum * velocity[d] - config.learning_rate * gains[d] * grad[d];
            res.coords[d] += velocity[d];
            if (!std::isfinite(res.coords[d])) {
                throw NumericalError("tsne_embed: non-finite coordinate at iteration " +
                                     std::to_string(iter));
            }
        }

        // re-center
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mx += res.coords[2 * i];
            my += res.coords[2 * i + 1];
        }
        mx /= static_cast<double>(n);
        my /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            res.coords[2 * i] -= mx;
            res.coords[2 * i + 1] -= my;
        }

        res.kl_history.push_back(tsne_kl(P, res.coords, n));
    }
    res.final_kl = res.kl_history.empty() ? tsne_kl(P, res.coords, n) : res.kl_history.back();
    return res;
}

EmbeddingResult tsne_run(const DissimilarityMatrix& distances, const TsneConfig& config) {
    const std::vector<double> P = tsne_affinities(distances, config.perplexity);
    return tsne_embed(P, distances.size(), config);
}

} // namespace lcmine
