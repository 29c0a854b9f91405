#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "bargmann/fock.hpp"

namespace bargmann {

/// M x M unitary acting on system indices; internal modes ride along
/// untouched. Construction checks U'U = I entrywise within 1e-10.
class ModeUnitary {
public:
    explicit ModeUnitary(Eigen::MatrixXcd entries);

    int dimension() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    ModeUnitary adjoint() const { return ModeUnitary(entries_.adjoint()); }

private:
    Eigen::MatrixXcd entries_;
};

/// Fourier interferometer, F_{k,j} = omega^{jk} / sqrt(M), omega = e^{2 pi i/M}.
ModeUnitary fourier_matrix(int M);

/// Cyclic shift, defined as the matrix product F D F'. Its lift permutes
/// system blocks of an occupation vector cyclically (block j+1 -> block j,
/// equivalently a'_j -> a'_{j-1} on creation operators).
ModeUnitary cyclic_matrix(int M);

/// Phase layer diag(omega^0, omega^1, ..., omega^{M-1}).
ModeUnitary diagonal_phases(int M);

/// [[cos t, -e^{-i phi} sin t], [e^{i phi} sin t, cos t]]; t = pi/4, phi = 0
/// is a 50:50 splitter equal to fourier_matrix(2) up to external phases.
ModeUnitary beamsplitter_matrix(double theta, double phi);

ModeUnitary identity_matrix(int M);

/// Permanent by Ryser's formula with Gray-code updates, O(2^n n).
/// per(empty) = 1.
cplx permanent(const Eigen::MatrixXcd& A);

/// Permanent of the matrix obtained from A by repeating row i row_mult[i]
/// times and column j col_mult[j] times. Runs in O(prod_j (col_mult[j]+1))
/// terms instead of 2^n, which is what makes many-photon few-mode
/// occupations tractable.
cplx permanent_with_multiplicities(const Eigen::MatrixXcd& A,
                                   const std::vector<int>& row_mult,
                                   const std::vector<int>& col_mult);

/// Basis-size cap refused by the lift (per total-photon sector). Overridable
/// for bigger desks; the CLI also reads BARGMANN_SECTOR_CAP.
std::uint64_t max_sector_size();
void set_max_sector_size(std::uint64_t cap);

/// Applies the Fock-space lift of U (x) I_d to psi. Photon number is
/// conserved; evolution is block-diagonal over total-photon sectors.
PureState lift_and_apply(const ModeUnitary& U, const PureState& psi);

/// Maps each pure component through lift_and_apply; weights unchanged.
MixedState apply_to_mixture(const ModeUnitary& U, const MixedState& rho);

}  // namespace bargmann
