#pragma once

#include "bargmann/fock.hpp"

namespace bargmann {
namespace oracle {

// Brute-force ground truth for the estimation pipeline. Nothing in here
// touches interferometers or permanents; the independence is the point.

/// tr(rho_1 rho_2 ... rho_M) as a mixture-weighted sum of Gram-chain
/// products prod_i <phi_i|phi_{i+1 mod M}>.
cplx direct_multivariate_trace(const std::vector<MixedState>& states);

/// X_k = tr(C^k Omega) via the permutation action of the cyclic shift on
/// occupation-vector system blocks. X_0 = 1.
cplx cyclic_expectation(const MixedState& omega, int k);

/// P_0 = tr(Pi_C Omega) = (1/M) sum_k X_k; real, in [0,1].
double symmetric_projection_weight(const MixedState& omega);

struct SymmetryReport {
    bool is_symmetric;
    double p0;
    double worst_Xk_deviation;  // max_k |X_k - 1|
};

/// is_symmetric iff |P_0 - 1| <= tol.
SymmetryReport certify_cyclic_symmetry(const MixedState& omega, double tol);

}  // namespace oracle
}  // namespace bargmann
