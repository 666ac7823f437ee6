// fock.hpp: truncated Fock-space Hamiltonians and their low-lying spectra.
//
// Product basis ordering: bosonic modes first (mode 0 slowest), spin last.
// A cutoff is the largest occupation kept for a mode, so a mode with cutoff c
// contributes c + 1 basis states.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "usc/analytic_dicke.hpp"
#include "usc/analytic_rabi.hpp"

namespace usc::fock {

inline constexpr std::size_t kDefaultDimensionCap = 20000;

using SparseMatrix = Eigen::SparseMatrix<std::complex<double>>;

struct TruncatedSpace {
    std::vector<int> boson_cutoffs;
    int spin_dim{1};

    std::size_t dimension() const;
    // Throws DimensionCap / InvalidParameter.
    void check(std::size_t cap = kDefaultDimensionCap) const;
};

class HermitianOperator {
public:
    HermitianOperator() = default;
    // Throws InvalidParameter if the matrix is not square or not Hermitian to 1e-12.
    explicit HermitianOperator(SparseMatrix m);

    Eigen::Index dim() const { return m_.rows(); }
    const SparseMatrix& matrix() const { return m_; }
    double hermiticity_error() const;
    bool is_real() const;
    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(m_); }

private:
    SparseMatrix m_;
};

struct SpectrumResult {
    Eigen::VectorXd eigenvalues;  // ascending
    double gap{0.0};              // E1 - E0
    Eigen::VectorXcd ground_state;
};

// Annihilation operator of boson `mode` on the full space.
SparseMatrix annihilation(const TruncatedSpace& space, int mode);

HermitianOperator build_dicke_finite(const dicke::DickeParams& p, const TruncatedSpace& space);
HermitianOperator build_hp_two_mode(const dicke::DickeParams& p, const TruncatedSpace& space);
HermitianOperator build_rabi(const rabi::RabiParams& p, const TruncatedSpace& space);

// a^dag a for boson `mode`.
HermitianOperator number_operator(const TruncatedSpace& space, int mode);
// c^dag c for c = (a - b)/sqrt2 (sign = -1) or d = (a + b)/sqrt2 (sign = +1).
HermitianOperator hybrid_number_operator(const TruncatedSpace& space, int sign);

// Lowest k (>= 2) eigenpairs. Dense solver up to kDenseLimit, Lanczos above.
inline constexpr Eigen::Index kDenseLimit = 600;
SpectrumResult spectrum(const HermitianOperator& h, int k = 2);

double ground_expectation(const SpectrumResult& s, const HermitianOperator& obs);

using HamiltonianFamily = std::function<HermitianOperator(double omega)>;

// Central difference of E1 - E0 in omega, Richardson-combined over eps and
// eps/2. eps <= 0 selects 1e-4 * omega0. Throws StepTooSmall when the two
// step sizes disagree by more than 1e-3 relative.
double gap_derivative(const HamiltonianFamily& family, double omega0, double eps = 0.0);

// Cutoff search: raise a single uniform cutoff until the gap moves by at most
// `tol` (relative) between consecutive cutoffs.
struct CutoffSchedule {
    int start{20};
    int step{10};          // additive increment; ignored when doubling
    bool doubling{false};
    double tol{1e-8};
    std::size_t cap{kDefaultDimensionCap};
};

struct ConvergedSpectrum {
    SpectrumResult spectrum;
    int cutoff{0};
};

using CutoffFamily = std::function<HermitianOperator(int cutoff)>;
ConvergedSpectrum converged_spectrum(const CutoffFamily& family, const CutoffSchedule& schedule,
                                     int k = 2);

// Start cutoff 20 (1 + n_virtual_estimate).
int default_start_cutoff(double n_virtual_estimate);

// Gap of the two-boson Hamiltonian with cutoff search (+10 steps, 1e-8).
ConvergedSpectrum converged_hp(const dicke::DickeParams& p, int k = 2,
                               std::size_t cap = kDefaultDimensionCap);
// Gap of the Rabi Hamiltonian with cutoff search (doubling, 1e-9).
ConvergedSpectrum converged_rabi(const rabi::RabiParams& p, int k = 2,
                                 std::size_t cap = kDefaultDimensionCap);

}  // namespace usc::fock
