// lanczos.hpp: lowest eigenpairs of a sparse Hermitian matrix.

#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace usc::fock::detail {

struct LowestEigen {
    Eigen::VectorXd values;    // ascending, k entries
    Eigen::VectorXcd ground;   // normalised eigenvector of values(0)
};

// Lanczos with full reorthogonalisation. Converged when every requested Ritz
// pair has residual below tol * spectral-scale. Throws SolverFailure if the
// Krylov space hits max_krylov first.
LowestEigen lanczos_lowest(const Eigen::SparseMatrix<double>& h, int k, double tol = 1e-12,
                           Eigen::Index max_krylov = 3000);
LowestEigen lanczos_lowest(const Eigen::SparseMatrix<std::complex<double>>& h, int k,
                           double tol = 1e-12, Eigen::Index max_krylov = 3000);

}  // namespace usc::fock::detail
