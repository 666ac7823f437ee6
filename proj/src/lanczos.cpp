#include "usc/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "usc/errors.hpp"

namespace usc::fock::detail {

namespace {

// Solves (T - shift) x = b for symmetric tridiagonal T via LU with partial
// pivoting (the dgttrf/dgttrs scheme). b is overwritten with x.
void tridiagonal_solve(const std::vector<double>& diag, const std::vector<double>& off,
                       double shift, double tiny, Eigen::VectorXd& b) {
    const std::size_t n = diag.size();
    std::vector<double> d(n), dl(n > 1 ? n - 1 : 0), du(n > 1 ? n - 1 : 0),
        du2(n > 2 ? n - 2 : 0, 0.0);
    std::vector<char> swapped(n > 1 ? n - 1 : 0, 0);
    for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) dl[i] = du[i] = off[i];

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::fabs(d[i]) >= std::fabs(dl[i])) {
            if (d[i] == 0.0) d[i] = tiny;
            const double fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            const double temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            swapped[i] = 1;
        }
    }
    if (d[n - 1] == 0.0) d[n - 1] = tiny;

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!swapped[i]) {
            b(i + 1) -= dl[i] * b(i);
        } else {
            const double temp = b(i);
            b(i) = b(i + 1);
            b(i + 1) = temp - dl[i] * b(i);
        }
    }
    b(n - 1) /= d[n - 1];
    if (n > 1) b(n - 2) = (b(n - 2) - du[n - 2] * b(n - 1)) / d[n - 2];
    for (auto i = static_cast<std::ptrdiff_t>(n) - 3; i >= 0; --i) {
        b(i) = (b(i) - du[i] * b(i + 1) - du2[i] * b(i + 2)) / d[i];
    }
}

// Eigenvector of the tridiagonal matrix for a known eigenvalue, by inverse
// iteration.
Eigen::VectorXd tridiagonal_eigenvector(const std::vector<double>& diag,
                                        const std::vector<double>& off, double theta,
                                        double scale) {
    const auto m = static_cast<Eigen::Index>(diag.size());
    Eigen::VectorXd x = Eigen::VectorXd::Ones(m) / std::sqrt(static_cast<double>(m));
    const double tiny = 1e-300 + 1e-15 * scale;
    const double shift = theta + 1e-14 * scale;
    for (int it = 0; it < 3; ++it) {
        tridiagonal_solve(diag, off, shift, tiny, x);
        x.normalize();
    }
    return x;
}

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
Vec<Scalar> random_start(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Vec<Scalar> v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if constexpr (std::is_same_v<Scalar, double>) {
            v(i) = normal(rng);
        } else {
            v(i) = Scalar(normal(rng), normal(rng));
        }
    }
    return v;
}

// Krylov basis stored in column blocks so growth never copies old vectors.
template <class Scalar>
class KrylovBasis {
public:
    explicit KrylovBasis(Eigen::Index n) : n_(n) {}

    Eigen::Index size() const { return size_; }

    void push(const Vec<Scalar>& v) {
        if (size_ % kBlock == 0) blocks_.emplace_back(n_, kBlock);
        blocks_.back().col(size_ % kBlock) = v;
        ++size_;
    }

    // w <- (I - V V^dag) w
    void orthogonalise(Vec<Scalar>& w) const {
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            const Eigen::Index used = std::min<Eigen::Index>(kBlock, size_ - b * kBlock);
            const auto cols = blocks_[b].leftCols(used);
            const Vec<Scalar> c = cols.adjoint() * w;
            w.noalias() -= cols * c;
        }
    }

    Vec<Scalar> combine(const Eigen::VectorXd& coeff) const {
        Vec<Scalar> y = Vec<Scalar>::Zero(n_);
        for (Eigen::Index j = 0; j < coeff.size(); ++j) {
            y += coeff(j) * blocks_[j / kBlock].col(j % kBlock);
        }
        return y;
    }

    const auto column(Eigen::Index j) const { return blocks_[j / kBlock].col(j % kBlock); }

private:
    static constexpr Eigen::Index kBlock = 128;
    Eigen::Index n_;
    Eigen::Index size_{0};
    std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> blocks_;
};

template <class Scalar>
LowestEigen lanczos(const Eigen::SparseMatrix<Scalar>& h, int k, double tol,
                    Eigen::Index max_krylov) {
    const Eigen::Index n = h.rows();
    if (n != h.cols()) throw SolverFailure("matrix is not square");
    if (k < 1 || k > n) throw SolverFailure("requested eigenvalue count out of range");

    // infinity norm bounds the spectral radius
    double scale = 0.0;
    {
        Eigen::VectorXd rows = Eigen::VectorXd::Zero(n);
        for (Eigen::Index c = 0; c < h.outerSize(); ++c) {
            for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(h, c); it; ++it) {
                rows(it.row()) += std::abs(it.value());
            }
        }
        scale = std::max(rows.maxCoeff(), 1e-300);
    }

    std::mt19937_64 rng(0x5eed);
    const Eigen::Index m_max = std::min(n, max_krylov);
    KrylovBasis<Scalar> basis(n);
    std::vector<double> alpha;
    std::vector<double> beta;  // beta[j] couples v_j and v_{j+1}

    Vec<Scalar> v = random_start<Scalar>(n, rng);
    v.normalize();
    basis.push(v);

    Eigen::VectorXd ritz;
    std::vector<Eigen::VectorXd> ritz_vectors;
    while (true) {
        const Eigen::Index j = basis.size() - 1;
        Vec<Scalar> w = h * basis.column(j);
        const double a = std::real(basis.column(j).dot(w));
        alpha.push_back(a);
        basis.orthogonalise(w);
        basis.orthogonalise(w);
        double b = w.norm();
        const Eigen::Index m = basis.size();

        bool invariant = b < 1e-13 * scale;
        const bool exhausted = m == m_max;
        if (m >= k && (m % 10 == 0 || invariant || exhausted)) {
            Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
            Eigen::VectorXd e = m > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
                                            beta.data(), m - 1))
                                      : Eigen::VectorXd();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
            es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
            ritz = es.eigenvalues().head(k);
            ritz_vectors.clear();
            bool converged = true;
            for (int i = 0; i < k; ++i) {
                ritz_vectors.push_back(tridiagonal_eigenvector(alpha, beta, ritz(i), scale));
                const double residual = b * std::fabs(ritz_vectors.back()(m - 1));
                if (residual > tol * scale) converged = false;
            }
            if (converged || (invariant && m == n)) break;
            if (exhausted) {
                throw SolverFailure("Lanczos did not converge within " + std::to_string(m_max) +
                                    " Krylov vectors");
            }
        } else if (exhausted) {
            throw SolverFailure("Krylov space exhausted before k Ritz values were available");
        }

        if (invariant) {
            // deflate: continue from a fresh direction orthogonal to the basis
            w = random_start<Scalar>(n, rng);
            basis.orthogonalise(w);
            basis.orthogonalise(w);
            b = 0.0;
            w.normalize();
            beta.push_back(0.0);
            basis.push(w);
            continue;
        }
        beta.push_back(b);
        basis.push(w / b);
    }

    LowestEigen out;
    out.values = ritz;
    const Vec<Scalar> g = basis.combine(ritz_vectors.front());
    out.ground = g.template cast<std::complex<double>>();
    out.ground.normalize();
    return out;
}

}  // namespace

LowestEigen lanczos_lowest(const Eigen::SparseMatrix<double>& h, int k, double tol,
                           Eigen::Index max_krylov) {
    return lanczos<double>(h, k, tol, max_krylov);
}

LowestEigen lanczos_lowest(const Eigen::SparseMatrix<std::complex<double>>& h, int k,
                           double tol, Eigen::Index max_krylov) {
    return lanczos<std::complex<double>>(h, k, tol, max_krylov);
}

}  // namespace usc::fock::detail
