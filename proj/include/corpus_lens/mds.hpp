#ifndef CORPUS_LENS_MDS_HPP
#define CORPUS_LENS_MDS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "corpus_lens/errors.hpp"
#include "corpus_lens/stats.hpp"

namespace corpus_lens {

/// Symmetric non-negative dissimilarities with zero diagonal, row-major.
struct DissimilarityMatrix {
    std::vector<std::string> labels;
    std::vector<double> d;

    std::size_t size() const noexcept { return labels.size(); }
    double at(std::size_t i, std::size_t j) const { return d[i * labels.size() + j]; }
    double& at(std::size_t i, std::size_t j) { return d[i * labels.size() + j]; }

    void validate() const {
        const auto n = labels.size();
        if (d.size() != n * n) throw InvalidArgument("dissimilarity matrix: size mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            if (at(i, i) != 0.0) throw InvalidArgument("dissimilarity matrix: nonzero diagonal");
            for (std::size_t j = 0; j < n; ++j) {
                if (at(i, j) < 0.0) throw InvalidArgument("dissimilarity matrix: negative entry");
                if (at(i, j) != at(j, i)) throw InvalidArgument("dissimilarity matrix: asymmetric");
            }
        }
    }
};

enum class DistanceMetric { Cosine, Euclidean };
enum class VectorWeighting { Tfidf, Counts };

inline DistanceMetric parse_metric(std::string_view name) {
    if (name == "cosine") return DistanceMetric::Cosine;
    if (name == "euclidean") return DistanceMetric::Euclidean;
    throw UnsupportedFormat("unsupported distance metric: " + std::string(name));
}

namespace detail {

/// Dense profile vectors -> pairwise dissimilarity. Cosine works on
/// L2-normalized vectors (zero vectors keep direction "nowhere": distance 0
/// to another zero vector, 1 to anything else). Euclidean works on vectors
/// normalized to sum 1 (relative frequencies) when `relative` is set.
inline DissimilarityMatrix vectors_to_dissimilarity(std::vector<std::vector<double>> vectors,
                                                    std::vector<std::string> labels, DistanceMetric metric,
                                                    bool relative_for_euclidean = true) {
    const auto n = vectors.size();
    DissimilarityMatrix dm;
    dm.labels = std::move(labels);
    dm.d.assign(n * n, 0.0);

    std::vector<bool> zero(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        auto& v = vectors[i];
        if (metric == DistanceMetric::Cosine) {
            double norm2 = 0.0;
            for (const auto x : v) norm2 += x * x;
            if (norm2 > 0.0) {
                const double inv = 1.0 / std::sqrt(norm2);
                for (auto& x : v) x *= inv;
            } else {
                zero[i] = true;
            }
        } else if (relative_for_euclidean) {
            const double sum = std::accumulate(v.begin(), v.end(), 0.0);
            if (sum > 0.0)
                for (auto& x : v) x /= sum;
            else
                zero[i] = true;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dist;
            if (metric == DistanceMetric::Cosine) {
                if (zero[i] && zero[j]) dist = 0.0;
                else if (zero[i] || zero[j]) dist = 1.0;
                else {
                    double dot = 0.0;
                    for (std::size_t t = 0; t < vectors[i].size(); ++t) dot += vectors[i][t] * vectors[j][t];
                    dist = std::clamp(1.0 - dot, 0.0, 2.0);
                }
            } else {
                double acc = 0.0;
                for (std::size_t t = 0; t < vectors[i].size(); ++t) {
                    const double diff = vectors[i][t] - vectors[j][t];
                    acc += diff * diff;
                }
                dist = std::sqrt(acc);
            }
            dm.at(i, j) = dm.at(j, i) = dist;
        }
    }
    return dm;
}

}  // namespace detail

/// Chapter-by-chapter dissimilarity over term profiles. Default: cosine
/// distance of tf-idf weighted, L2-normalized chapter vectors.
inline DissimilarityMatrix chapter_dissimilarity(const TermDocMatrix& m,
                                                 DistanceMetric metric = DistanceMetric::Cosine,
                                                 VectorWeighting weighting = VectorWeighting::Tfidf) {
    const auto n = m.doc_count();
    std::vector<std::vector<double>> vectors(n, std::vector<double>(m.term_count(), 0.0));
    std::vector<std::string> labels(n);
    for (std::size_t j = 0; j < n; ++j) {
        labels[j] = std::to_string(m.doc_label(j));
        if (m.column_sum(j) == 0)
            throw EmptyDocument("chapter " + labels[j] + " has no tokens in the vocabulary");
        for (const auto& [term, count] : m.column(j)) {
            vectors[j][term] = weighting == VectorWeighting::Tfidf ? tfidf(m, term, j)
                                                                   : static_cast<double>(count);
        }
    }
    return detail::vectors_to_dissimilarity(std::move(vectors), std::move(labels), metric);
}

/// Word-profile variant: rows of the matrix (restricted to the top_n most
/// frequent terms) become the objects, their distribution over chapters the
/// profile vector.
inline DissimilarityMatrix term_dissimilarity(const TermDocMatrix& m, std::size_t top_n,
                                              DistanceMetric metric = DistanceMetric::Cosine,
                                              VectorWeighting weighting = VectorWeighting::Tfidf) {
    if (top_n == 0) throw InvalidArgument("term_dissimilarity: top_n must be >= 1");
    std::vector<std::pair<std::size_t, std::size_t>> totals; // (count, term)
    totals.reserve(m.term_count());
    for (std::size_t i = 0; i < m.term_count(); ++i) {
        std::size_t total = 0;
        for (std::size_t j = 0; j < m.doc_count(); ++j) total += m.count(i, j);
        totals.emplace_back(total, i);
    }
    std::sort(totals.begin(), totals.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return m.term(a.second) < m.term(b.second);
    });
    if (totals.size() > top_n) totals.resize(top_n);

    std::vector<std::vector<double>> vectors;
    std::vector<std::string> labels;
    vectors.reserve(totals.size());
    labels.reserve(totals.size());
    for (const auto& [total, term] : totals) {
        std::vector<double> v(m.doc_count(), 0.0);
        for (std::size_t j = 0; j < m.doc_count(); ++j) {
            const auto c = m.count(term, j);
            if (c == 0) continue;
            v[j] = weighting == VectorWeighting::Tfidf ? tfidf(m, term, j) : static_cast<double>(c);
        }
        vectors.push_back(std::move(v));
        labels.push_back(m.term(term));
    }
    return detail::vectors_to_dissimilarity(std::move(vectors), std::move(labels), metric);
}

struct Embedding2D {
    std::vector<std::string> labels;
    std::vector<std::array<double, 2>> coords;

    // diagnostics
    std::vector<double> eigenvalues;            // classical MDS: all eigenvalues, descending
    double negative_eigenvalue_mass = 0.0;      // |sum of negative| / sum of |all|
    double stress = std::numeric_limits<double>::quiet_NaN();
    std::size_t iterations = 0;                 // SMACOF transforms applied
    std::vector<double> stress_history;         // SMACOF stress per iterate, starting at the init

    std::size_t size() const noexcept { return labels.size(); }
    double distance(std::size_t i, std::size_t j) const {
        const double dx = coords[i][0] - coords[j][0];
        const double dy = coords[i][1] - coords[j][1];
        return std::sqrt(dx * dx + dy * dy);
    }
};

struct JacobiResult {
    std::vector<double> eigenvalues;  // unordered
    std::vector<double> vectors;      // column k = eigenvector of eigenvalues[k], row-major n*n
    std::size_t sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition for symmetric matrices. Sweeps rotate
/// every (p, q) pair; convergence is the Frobenius norm of the off-diagonal
/// part falling to `tol`.
inline JacobiResult jacobi_eigen(std::vector<double> a, std::size_t n, double tol = 1e-12,
                                 std::size_t max_sweeps = 100) {
    if (a.size() != n * n) throw InvalidArgument("jacobi_eigen: matrix size mismatch");
    JacobiResult r;
    r.vectors.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) r.vectors[i * n + i] = 1.0;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
        return std::sqrt(2.0 * s);
    };

    bool converged = off_norm() <= tol;
    while (!converged && r.sweeps < max_sweeps) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                // stable rotation (Golub & Van Loan)
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = a[q * n + p] = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = r.vectors[k * n + p];
                    const double vkq = r.vectors[k * n + q];
                    r.vectors[k * n + p] = c * vkp - s * vkq;
                    r.vectors[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        ++r.sweeps;
        converged = off_norm() <= tol;
    }
    if (!converged)
        throw NonConvergence("jacobi_eigen: off-diagonal norm above " + std::to_string(tol) + " after " +
                             std::to_string(max_sweeps) + " sweeps");
    r.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.eigenvalues[i] = a[i * n + i];
    return r;
}

/// B = -1/2 * J * D^2 * J with J = I - (1/n) 1 1^T (Torgerson double centering).
inline std::vector<double> double_centered_gram(const DissimilarityMatrix& dm) {
    const auto n = dm.size();
    std::vector<double> sq(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sq[i * n + j] = dm.at(i, j) * dm.at(i, j);

    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) row_mean[i] += sq[i * n + j];
        row_mean[i] /= static_cast<double>(n);
        grand += row_mean[i];
    }
    grand /= static_cast<double>(n);

    std::vector<double> b(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b[i * n + j] = -0.5 * (sq[i * n + j] - row_mean[i] - row_mean[j] + grand);
    return b;
}

/// Classical (Torgerson) MDS into 2 dimensions. Coordinates come from the two
/// largest eigenpairs of the double-centered Gram matrix; non-positive
/// eigenvalues contribute zero-length axes. Axis signs are fixed so the
/// largest-magnitude coordinate on each axis is positive, and coordinates are
/// recentered, making the output deterministic.
inline Embedding2D classical_mds(const DissimilarityMatrix& dm) {
    dm.validate();
    const auto n = dm.size();
    if (n < 2) throw InvalidArgument("classical_mds: need at least 2 points");

    const auto b = double_centered_gram(dm);
    const auto eig = jacobi_eigen(b, n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (eig.eigenvalues[x] != eig.eigenvalues[y]) return eig.eigenvalues[x] > eig.eigenvalues[y];
        return x < y;
    });

    Embedding2D emb;
    emb.labels = dm.labels;
    emb.coords.assign(n, {0.0, 0.0});
    emb.eigenvalues.reserve(n);
    double neg_mass = 0.0, abs_mass = 0.0;
    for (const auto k : order) {
        emb.eigenvalues.push_back(eig.eigenvalues[k]);
        abs_mass += std::abs(eig.eigenvalues[k]);
        if (eig.eigenvalues[k] < 0.0) neg_mass += -eig.eigenvalues[k];
    }
    emb.negative_eigenvalue_mass = abs_mass > 0.0 ? neg_mass / abs_mass : 0.0;

    for (std::size_t axis = 0; axis < 2 && axis < n; ++axis) {
        const auto k = order[axis];
        const double lambda = eig.eigenvalues[k];
        if (lambda <= 0.0) continue; // non-Euclidean directions are truncated
        const double scale = std::sqrt(lambda);
        std::vector<double> column(n);
        for (std::size_t i = 0; i < n; ++i) column[i] = eig.vectors[i * n + k];

        std::size_t arg_max = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(column[i]) > std::abs(column[arg_max])) arg_max = i;
        const double sign = column[arg_max] < 0.0 ? -1.0 : 1.0;

        for (std::size_t i = 0; i < n; ++i) emb.coords[i][axis] = sign * scale * column[i];
    }

    // enforce the centering convention exactly
    for (std::size_t axis = 0; axis < 2; ++axis) {
        double mean = 0.0;
        for (const auto& c : emb.coords) mean += c[axis];
        mean /= static_cast<double>(n);
        for (auto& c : emb.coords) c[axis] -= mean;
    }
    return emb;
}

/// Raw stress: sum over unordered pairs of squared (d_ij - ||x_i - x_j||).
inline double stress(const DissimilarityMatrix& dm, const Embedding2D& emb) {
    if (dm.labels != emb.labels) throw InvalidArgument("stress: label mismatch");
    const auto n = dm.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double diff = dm.at(i, j) - emb.distance(i, j);
            s += diff * diff;
        }
    return s;
}

/// SMACOF stress majorization: iterates the Guttman transform
/// X <- (1/n) B(X) X, which never increases raw stress. Stops when the
/// relative stress decrease drops below eps or max_iter is reached; the
/// lowest-stress iterate is returned. Coincident points contribute zero to
/// the transform (standard convention).
inline Embedding2D smacof(const DissimilarityMatrix& dm, const Embedding2D& init, std::size_t max_iter = 500,
                          double eps = 1e-9) {
    dm.validate();
    if (dm.labels != init.labels) throw InvalidArgument("smacof: init labels do not match");
    const auto n = dm.size();

    Embedding2D best = init;
    best.eigenvalues.clear();
    best.stress_history.clear();
    best.iterations = 0;

    std::vector<std::array<double, 2>> x = init.coords;
    double current = stress(dm, init);
    best.stress = current;
    best.stress_history.push_back(current);

    std::vector<std::array<double, 2>> next(n);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        if (current == 0.0) break;
        // Guttman transform: next_i = (1/n) * sum_j b_ij * x_j
        for (auto& c : next) c = {0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            double bii = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double dx = x[i][0] - x[j][0];
                const double dy = x[i][1] - x[j][1];
                const double dist = std::sqrt(dx * dx + dy * dy);
                const double bij = dist > 0.0 ? -dm.at(i, j) / dist : 0.0;
                next[i][0] += bij * x[j][0];
                next[i][1] += bij * x[j][1];
                bii -= bij;
            }
            next[i][0] += bii * x[i][0];
            next[i][1] += bii * x[i][1];
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& c : next) {
            c[0] *= inv_n;
            c[1] *= inv_n;
        }
        x.swap(next);

        Embedding2D probe;
        probe.labels = dm.labels;
        probe.coords = x;
        const double updated = stress(dm, probe);
        best.stress_history.push_back(updated);
        ++best.iterations;
        if (updated < best.stress) {
            best.stress = updated;
            best.coords = x;
        }
        const double decrease = current - updated;
        if (current > 0.0 && decrease / current < eps) break;
        current = updated;
    }

    // stress is translation-invariant; keep the centering convention
    for (std::size_t axis = 0; axis < 2; ++axis) {
        double mean = 0.0;
        for (const auto& c : best.coords) mean += c[axis];
        mean /= static_cast<double>(n);
        for (auto& c : best.coords) c[axis] -= mean;
    }
    return best;
}

}  // namespace corpus_lens

#endif
