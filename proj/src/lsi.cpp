#include "tracekit/lsi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tracekit/rng.hpp"

namespace tracekit {

namespace {

using Matrix = std::vector<std::vector<double>>;  // rows

// Cyclic Jacobi eigendecomposition of a small symmetric matrix.
// Returns eigenvalues (desc) and matching eigenvectors as columns of V.
void jacobi_eigen(Matrix m, std::vector<double>& values, Matrix& vectors) {
    const std::size_t n = m.size();
    vectors.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) vectors[i][i] = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += m[p][q] * m[p][q];
        }
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(m[p][q]) < 1e-300) continue;
                const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double mip = m[i][p], miq = m[i][q];
                    m[i][p] = c * mip - s * miq;
                    m[i][q] = s * mip + c * miq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double mpi = m[p][i], mqi = m[q][i];
                    m[p][i] = c * mpi - s * mqi;
                    m[q][i] = s * mpi + c * mqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = vectors[i][p], viq = vectors[i][q];
                    vectors[i][p] = c * vip - s * viq;
                    vectors[i][q] = s * vip + c * viq;
                }
            }
        }
    }
    values.resize(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = m[i][i];

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<double> sorted_values(n);
    Matrix sorted_vectors(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        sorted_values[j] = values[order[j]];
        for (std::size_t i = 0; i < n; ++i) sorted_vectors[i][j] = vectors[i][order[j]];
    }
    values = std::move(sorted_values);
    vectors = std::move(sorted_vectors);
}

// Modified Gram-Schmidt on the columns of q. A column whose norm drops far
// below its pre-projection value is linearly dependent on earlier columns
// (its residue is rounding noise), so it is reseeded from the rng to keep
// the subspace at full width.
void orthonormalize(Matrix& q, Rng& rng) {
    const std::size_t dim = q.size();
    const std::size_t cols = q.empty() ? 0 : q[0].size();
    for (std::size_t j = 0; j < cols; ++j) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            double before = 0.0;
            for (std::size_t i = 0; i < dim; ++i) before += q[i][j] * q[i][j];
            before = std::sqrt(before);
            for (int pass = 0; pass < 2; ++pass) {  // twice is enough
                for (std::size_t prev = 0; prev < j; ++prev) {
                    double dot = 0.0;
                    for (std::size_t i = 0; i < dim; ++i) dot += q[i][prev] * q[i][j];
                    for (std::size_t i = 0; i < dim; ++i) q[i][j] -= dot * q[i][prev];
                }
            }
            double norm = 0.0;
            for (std::size_t i = 0; i < dim; ++i) norm += q[i][j] * q[i][j];
            norm = std::sqrt(norm);
            if (norm > 1e-10 * std::max(before, 1e-300)) {
                for (std::size_t i = 0; i < dim; ++i) q[i][j] /= norm;
                break;
            }
            for (std::size_t i = 0; i < dim; ++i) {
                q[i][j] = uniform_real(rng, -1.0, 1.0);
            }
        }
    }
}

void fix_sign(std::vector<double>& v) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    }
    if (!v.empty() && v[arg] < 0.0) {
        for (double& x : v) x = -x;
    }
}

}  // namespace

const std::vector<double>& LsiIndex::vector_for(const std::string& artifact_id) const {
    const auto it = document_vectors.find(artifact_id);
    if (it == document_vectors.end()) {
        throw std::runtime_error("artifact missing from index: " + artifact_id);
    }
    return it->second;
}

std::size_t default_lsi_rank(std::size_t document_count) {
    if (document_count <= 1) return 1;
    return std::min<std::size_t>(100, document_count - 1);
}

LsiIndex fit_lsi(const VsmIndex& vsm, std::size_t k, const LsiOptions& opts) {
    const std::size_t n_docs = vsm.document_vectors.size();
    const std::size_t n_terms = vsm.idf.size();
    if (k < 1 || k > std::min(n_docs, n_terms)) {
        throw std::runtime_error("fit_lsi: k must satisfy 1 <= k <= min(V, N)");
    }

    // Dense A (docs x terms), rows in artifact-id order.
    std::vector<std::string> ids;
    Matrix a(n_docs, std::vector<double>(n_terms, 0.0));
    {
        std::size_t row = 0;
        for (const auto& [id, vec] : vsm.document_vectors) {
            ids.push_back(id);
            for (const auto& [idx, val] : vec) a[row][idx] = val;
            ++row;
        }
    }

    // Iterate on the smaller Gram side. B x = A^T(A x) or A(A^T x).
    const bool right_side = n_terms <= n_docs;
    const std::size_t dim = right_side ? n_terms : n_docs;

    const auto apply_b = [&](const std::vector<double>& x) {
        if (right_side) {
            std::vector<double> ax(n_docs, 0.0);
            for (std::size_t i = 0; i < n_docs; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < n_terms; ++j) s += a[i][j] * x[j];
                ax[i] = s;
            }
            std::vector<double> y(n_terms, 0.0);
            for (std::size_t i = 0; i < n_docs; ++i) {
                for (std::size_t j = 0; j < n_terms; ++j) y[j] += a[i][j] * ax[i];
            }
            return y;
        }
        std::vector<double> atx(n_terms, 0.0);
        for (std::size_t i = 0; i < n_docs; ++i) {
            for (std::size_t j = 0; j < n_terms; ++j) atx[j] += a[i][j] * x[i];
        }
        std::vector<double> y(n_docs, 0.0);
        for (std::size_t i = 0; i < n_docs; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n_terms; ++j) s += a[i][j] * atx[j];
            y[i] = s;
        }
        return y;
    };

    // Oversampled subspace speeds up convergence at the k-th gap.
    const std::size_t width = std::min(dim, k + 8);
    Rng rng = make_rng(opts.seed);
    Matrix q(dim, std::vector<double>(width));
    for (auto& row : q) {
        for (double& x : row) x = uniform_real(rng, -1.0, 1.0);
    }
    orthonormalize(q, rng);

    std::vector<double> prev_theta(k, 0.0);
    bool converged = false;
    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
        Matrix z(dim, std::vector<double>(width, 0.0));
        std::vector<double> theta(width, 0.0);
        for (std::size_t j = 0; j < width; ++j) {
            std::vector<double> col(dim);
            for (std::size_t i = 0; i < dim; ++i) col[i] = q[i][j];
            const std::vector<double> bcol = apply_b(col);
            double dot = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                z[i][j] = bcol[i];
                dot += col[i] * bcol[i];
            }
            theta[j] = dot;
        }
        double max_theta = 1.0;
        for (std::size_t j = 0; j < k; ++j) max_theta = std::max(max_theta, theta[j]);
        double drift = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            drift = std::max(drift, std::abs(theta[j] - prev_theta[j]));
        }
        std::copy(theta.begin(), theta.begin() + k, prev_theta.begin());
        q = std::move(z);
        orthonormalize(q, rng);
        if (iter > 0 && drift <= opts.tolerance * max_theta) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw std::runtime_error("fit_lsi: subspace iteration did not converge");
    }

    // Rayleigh-Ritz on the converged subspace, then truncate to k.
    Matrix m(width, std::vector<double>(width, 0.0));
    Matrix bq(dim, std::vector<double>(width, 0.0));
    for (std::size_t j = 0; j < width; ++j) {
        std::vector<double> col(dim);
        for (std::size_t i = 0; i < dim; ++i) col[i] = q[i][j];
        const std::vector<double> bcol = apply_b(col);
        for (std::size_t i = 0; i < dim; ++i) bq[i][j] = bcol[i];
    }
    for (std::size_t p = 0; p < width; ++p) {
        for (std::size_t r = 0; r < width; ++r) {
            double dot = 0.0;
            for (std::size_t i = 0; i < dim; ++i) dot += q[i][p] * bq[i][r];
            m[p][r] = dot;
        }
    }
    std::vector<double> eigenvalues;
    Matrix w;
    jacobi_eigen(std::move(m), eigenvalues, w);

    Matrix basis(dim, std::vector<double>(k, 0.0));
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < dim; ++i) {
            double s = 0.0;
            for (std::size_t l = 0; l < width; ++l) s += q[i][l] * w[l][j];
            basis[i][j] = s;
        }
    }

    LsiIndex index;
    index.k = k;
    index.singular_values.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        index.singular_values[j] = std::sqrt(std::max(0.0, eigenvalues[j]));
    }

    index.right_basis.assign(k, std::vector<double>(n_terms, 0.0));
    std::vector<std::vector<double>> doc_vecs(n_docs, std::vector<double>(k, 0.0));
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> col(dim);
        for (std::size_t i = 0; i < dim; ++i) col[i] = basis[i][j];
        if (right_side) {
            // col is a right singular vector; doc projection = A * v.
            fix_sign(col);
            index.right_basis[j].assign(col.begin(), col.end());
            for (std::size_t i = 0; i < n_docs; ++i) {
                double s = 0.0;
                for (std::size_t t = 0; t < n_terms; ++t) s += a[i][t] * col[t];
                doc_vecs[i][j] = s;
            }
        } else {
            // col is a left singular vector; doc projection = u * sigma,
            // right basis recovered as A^T u / sigma when sigma > 0.
            fix_sign(col);
            const double sigma = index.singular_values[j];
            for (std::size_t i = 0; i < n_docs; ++i) doc_vecs[i][j] = col[i] * sigma;
            if (sigma > 1e-150) {
                for (std::size_t i = 0; i < n_docs; ++i) {
                    for (std::size_t t = 0; t < n_terms; ++t) {
                        index.right_basis[j][t] += a[i][t] * col[i] / sigma;
                    }
                }
            }
        }
    }
    for (std::size_t i = 0; i < n_docs; ++i) {
        index.document_vectors[ids[i]] = std::move(doc_vecs[i]);
    }
    return index;
}

}  // namespace tracekit
