#include "usc/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "usc/errors.hpp"
#include "usc/lanczos.hpp"
#include "usc/numdiff.hpp"

namespace usc::fock {

using cd = std::complex<double>;

namespace {

SparseMatrix identity(Eigen::Index n) {
    SparseMatrix m(n, n);
    m.setIdentity();
    return m;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
    std::vector<Eigen::Triplet<cd>> t;
    t.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
    for (Eigen::Index ca = 0; ca < a.outerSize(); ++ca) {
        for (SparseMatrix::InnerIterator ia(a, ca); ia; ++ia) {
            for (Eigen::Index cb = 0; cb < b.outerSize(); ++cb) {
                for (SparseMatrix::InnerIterator ib(b, cb); ib; ++ib) {
                    t.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                                   ia.value() * ib.value());
                }
            }
        }
    }
    SparseMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

// Single-mode annihilation operator with occupations 0..cutoff.
SparseMatrix single_mode_annihilation(int cutoff) {
    SparseMatrix a(cutoff + 1, cutoff + 1);
    std::vector<Eigen::Triplet<cd>> t;
    for (int n = 1; n <= cutoff; ++n) t.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

// Collective spin J = N/2 in the |J, m> basis, index = m + J.
struct CollectiveSpin {
    SparseMatrix sz;
    SparseMatrix sx;
};

CollectiveSpin collective_spin(int n_atoms) {
    const double j = 0.5 * n_atoms;
    const int dim = n_atoms + 1;
    std::vector<Eigen::Triplet<cd>> tz, tx;
    for (int i = 0; i < dim; ++i) {
        const double m = i - j;
        tz.emplace_back(i, i, m);
        if (i + 1 < dim) {
            // <m+1| S+ |m> = sqrt(J(J+1) - m(m+1)); Sx = (S+ + S-)/2
            const double el = 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
            tx.emplace_back(i + 1, i, el);
            tx.emplace_back(i, i + 1, el);
        }
    }
    CollectiveSpin s{SparseMatrix(dim, dim), SparseMatrix(dim, dim)};
    s.sz.setFromTriplets(tz.begin(), tz.end());
    s.sx.setFromTriplets(tx.begin(), tx.end());
    return s;
}

SparseMatrix spin_identity(const TruncatedSpace& space) { return identity(space.spin_dim); }

// Operator acting as `spin_op` on the spin factor and identity on the bosons.
SparseMatrix on_spin(const TruncatedSpace& space, const SparseMatrix& spin_op) {
    Eigen::Index bosons = 1;
    for (int c : space.boson_cutoffs) bosons *= c + 1;
    return kron(identity(bosons), spin_op);
}

double gap_of(const Eigen::VectorXd& ev) { return ev.size() > 1 ? ev(1) - ev(0) : 0.0; }

}  // namespace

// ------------------------------------------------------------ TruncatedSpace

std::size_t TruncatedSpace::dimension() const {
    std::size_t d = static_cast<std::size_t>(std::max(spin_dim, 0));
    for (int c : boson_cutoffs) d *= static_cast<std::size_t>(std::max(c + 1, 0));
    return d;
}

void TruncatedSpace::check(std::size_t cap) const {
    if (spin_dim < 1) throw InvalidParameter("spin dimension must be positive");
    for (int c : boson_cutoffs) {
        if (c < 1) throw InvalidParameter("boson cutoffs must be >= 1");
    }
    const std::size_t d = dimension();
    if (d < 2) throw InvalidParameter("truncated space must have dimension >= 2");
    if (d > cap) {
        throw DimensionCap("dimension " + std::to_string(d) + " exceeds cap " +
                           std::to_string(cap));
    }
}

// --------------------------------------------------------- HermitianOperator

HermitianOperator::HermitianOperator(SparseMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvalidParameter("operator must be square");
    m_.makeCompressed();
    if (hermiticity_error() > 1e-12) throw InvalidParameter("operator is not Hermitian");
}

double HermitianOperator::hermiticity_error() const {
    const SparseMatrix diff = m_ - SparseMatrix(m_.adjoint());
    double err = 0.0;
    for (Eigen::Index c = 0; c < diff.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(diff, c); it; ++it) {
            err = std::max(err, std::abs(it.value()));
        }
    }
    return err;
}

bool HermitianOperator::is_real() const {
    for (Eigen::Index i = 0; i < m_.nonZeros(); ++i) {
        if (m_.valuePtr()[i].imag() != 0.0) return false;
    }
    return true;
}

// --------------------------------------------------------------- operators

SparseMatrix annihilation(const TruncatedSpace& space, int mode) {
    const int modes = static_cast<int>(space.boson_cutoffs.size());
    if (mode < 0 || mode >= modes) throw InvalidParameter("boson mode index out of range");
    SparseMatrix op = identity(1);
    for (int k = 0; k < modes; ++k) {
        const int c = space.boson_cutoffs[k];
        op = kron(op, k == mode ? single_mode_annihilation(c) : identity(c + 1));
    }
    return kron(op, spin_identity(space));
}

HermitianOperator number_operator(const TruncatedSpace& space, int mode) {
    space.check();
    const SparseMatrix a = annihilation(space, mode);
    return HermitianOperator(SparseMatrix(a.adjoint()) * a);
}

HermitianOperator hybrid_number_operator(const TruncatedSpace& space, int sign) {
    space.check();
    if (space.boson_cutoffs.size() < 2) throw InvalidParameter("need two boson modes");
    if (sign != 1 && sign != -1) throw InvalidParameter("sign must be +1 or -1");
    const SparseMatrix c =
        (annihilation(space, 0) + static_cast<double>(sign) * annihilation(space, 1)) /
        std::sqrt(2.0);
    return HermitianOperator(SparseMatrix(c.adjoint()) * c);
}

// ------------------------------------------------------------- Hamiltonians

HermitianOperator build_dicke_finite(const dicke::DickeParams& p, const TruncatedSpace& space) {
    dicke::check(p);
    if (!p.n_atoms) throw InvalidParameter("finite Dicke model needs n_atoms");
    const int n = *p.n_atoms;
    if (space.boson_cutoffs.size() != 1 || space.spin_dim != n + 1) {
        throw InvalidParameter("Dicke space needs one boson mode and spin dimension N + 1");
    }
    space.check();
    const SparseMatrix a = annihilation(space, 0);
    const auto spin = collective_spin(n);
    const SparseMatrix x = a + SparseMatrix(a.adjoint());
    const SparseMatrix h = p.omega * SparseMatrix(SparseMatrix(a.adjoint()) * a) +
                           p.Omega * on_spin(space, spin.sz) +
                           (p.g / std::sqrt(static_cast<double>(n))) *
                               SparseMatrix(x * on_spin(space, spin.sx));
    return HermitianOperator(h);
}

HermitianOperator build_hp_two_mode(const dicke::DickeParams& p, const TruncatedSpace& space) {
    dicke::check(p);
    if (space.boson_cutoffs.size() != 2 || space.spin_dim != 1) {
        throw InvalidParameter("two-boson space needs exactly two modes and no spin");
    }
    space.check();
    const SparseMatrix a = annihilation(space, 0);
    const SparseMatrix b = annihilation(space, 1);
    const SparseMatrix xa = a + SparseMatrix(a.adjoint());
    const SparseMatrix xb = b + SparseMatrix(b.adjoint());
    const SparseMatrix h = p.omega * SparseMatrix(SparseMatrix(a.adjoint()) * a) +
                           p.Omega * SparseMatrix(SparseMatrix(b.adjoint()) * b) +
                           (0.5 * p.g) * SparseMatrix(xa * xb);
    return HermitianOperator(h);
}

HermitianOperator build_rabi(const rabi::RabiParams& p, const TruncatedSpace& space) {
    rabi::check(p);
    if (space.boson_cutoffs.size() != 1 || space.spin_dim != 2) {
        throw InvalidParameter("Rabi space needs one boson mode and a two-level system");
    }
    space.check();
    // sigma_z = diag(-1, +1) with index 0 = ground
    SparseMatrix sz(2, 2), sx(2, 2);
    sz.insert(0, 0) = -1.0;
    sz.insert(1, 1) = 1.0;
    sx.insert(0, 1) = 1.0;
    sx.insert(1, 0) = 1.0;
    const SparseMatrix a = annihilation(space, 0);
    const SparseMatrix xa = a + SparseMatrix(a.adjoint());
    const SparseMatrix h = p.omega * SparseMatrix(SparseMatrix(a.adjoint()) * a) +
                           (0.5 * p.Omega) * on_spin(space, sz) +
                           (0.5 * p.g) * SparseMatrix(xa * on_spin(space, sx));
    return HermitianOperator(h);
}

// ------------------------------------------------------------------ spectra

SpectrumResult spectrum(const HermitianOperator& h, int k) {
    const Eigen::Index n = h.dim();
    if (n < 2) throw SolverFailure("need at least a 2x2 operator");
    k = static_cast<int>(std::clamp<Eigen::Index>(k, 2, n));
    SpectrumResult out;
    if (n <= kDenseLimit) {
        if (h.is_real()) {
            const Eigen::MatrixXd m = h.dense().real();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
            if (es.info() != Eigen::Success) throw SolverFailure("dense eigensolver failed");
            out.eigenvalues = es.eigenvalues().head(k);
            out.ground_state = es.eigenvectors().col(0).cast<cd>();
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
            if (es.info() != Eigen::Success) throw SolverFailure("dense eigensolver failed");
            out.eigenvalues = es.eigenvalues().head(k);
            out.ground_state = es.eigenvectors().col(0);
        }
    } else {
        detail::LowestEigen le;
        if (h.is_real()) {
            const Eigen::SparseMatrix<double> m = h.matrix().real();
            le = detail::lanczos_lowest(m, k);
        } else {
            le = detail::lanczos_lowest(h.matrix(), k);
        }
        out.eigenvalues = le.values;
        out.ground_state = le.ground;
    }
    out.ground_state.normalize();
    out.gap = gap_of(out.eigenvalues);
    return out;
}

double ground_expectation(const SpectrumResult& s, const HermitianOperator& obs) {
    if (s.ground_state.size() != obs.dim()) {
        throw DimensionMismatch("observable dimension " + std::to_string(obs.dim()) +
                                " does not match state dimension " +
                                std::to_string(s.ground_state.size()));
    }
    const Eigen::VectorXcd v = obs.matrix() * s.ground_state;
    return std::real(s.ground_state.dot(v));
}

double gap_derivative(const HamiltonianFamily& family, double omega0, double eps) {
    if (eps <= 0.0) eps = 1e-4 * std::fabs(omega0);
    if (eps <= 0.0) throw StepTooSmall("finite-difference step must be positive");
    auto gap = [&](double w) { return spectrum(family(w), 2).gap; };
    const double coarse = numdiff::central(gap, omega0, eps);
    const double fine = numdiff::central(gap, omega0, 0.5 * eps);
    if (numdiff::relative_deviation(coarse, fine, 1e-12) > 1e-3) {
        throw StepTooSmall("gap derivative not resolved: step estimates " + std::to_string(coarse) +
                           " and " + std::to_string(fine));
    }
    return (4.0 * fine - coarse) / 3.0;
}

// ---------------------------------------------------------- cutoff search

int default_start_cutoff(double n_virtual_estimate) {
    return static_cast<int>(std::ceil(20.0 * (1.0 + std::max(0.0, n_virtual_estimate))));
}

ConvergedSpectrum converged_spectrum(const CutoffFamily& family, const CutoffSchedule& schedule,
                                     int k) {
    auto next_cutoff = [&](int c) { return schedule.doubling ? 2 * c : c + schedule.step; };
    auto build = [&](int c) {
        HermitianOperator h = family(c);
        if (static_cast<std::size_t>(h.dim()) > schedule.cap) {
            throw DimensionCap("dimension " + std::to_string(h.dim()) + " exceeds cap " +
                               std::to_string(schedule.cap));
        }
        return h;
    };
    int cutoff = schedule.start;
    SpectrumResult previous;
    try {
        previous = spectrum(build(cutoff), k);
        while (true) {
            const int candidate = next_cutoff(cutoff);
            SpectrumResult current = spectrum(build(candidate), k);
            if (numdiff::relative_deviation(current.gap, previous.gap, 1e-300) <= schedule.tol) {
                return {std::move(current), candidate};
            }
            previous = std::move(current);
            cutoff = candidate;
        }
    } catch (const DimensionCap& e) {
        throw ConvergenceError("gap not converged before the dimension cap (last cutoff " +
                               std::to_string(cutoff) + "): " + e.what());
    }
}

ConvergedSpectrum converged_hp(const dicke::DickeParams& p, int k, std::size_t cap) {
    dicke::check(p);
    const double r = std::min(p.coupling_ratio(), 1.0 - dicke::kThresholdGuard);
    const dicke::SqueezingPair estimate{0.25 * std::log1p(-r), 0.25 * std::log1p(r)};
    CutoffSchedule schedule;
    schedule.start = default_start_cutoff(dicke::bare_mode_occupation(estimate));
    schedule.step = 10;
    schedule.tol = 1e-8;
    schedule.cap = cap;
    auto family = [&](int c) {
        TruncatedSpace space{{c, c}, 1};
        space.check(cap);
        return build_hp_two_mode(p, space);
    };
    return converged_spectrum(family, schedule, k);
}

ConvergedSpectrum converged_rabi(const rabi::RabiParams& p, int k, std::size_t cap) {
    const auto eff = rabi::rabi_effective(p);
    CutoffSchedule schedule;
    schedule.start = default_start_cutoff(eff.n_virtual);
    schedule.doubling = true;
    schedule.tol = 1e-9;
    schedule.cap = cap;
    auto family = [&](int c) {
        TruncatedSpace space{{c}, 2};
        space.check(cap);
        return build_rabi(p, space);
    };
    return converged_spectrum(family, schedule, k);
}

}  // namespace usc::fock
