#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "aluthge/types.hpp"

namespace aluthge {

// Invertible diagonal base point d = (d_1, ..., d_r), d_j = |d_j| e^{i theta_j}.
// Precomputes the pairwise equality masks used by the tangent-space and
// entrywise-operator machinery:
//   same_value: |d_i - d_j| <= 1e-10 * max|d|
//   same_modulus: ||d_i| - |d_j|| <= 1e-10 * max(|d_i|, |d_j|)
//   same_phase: |e^{i theta_i} - e^{i theta_j}| <= 1e-10
class DiagonalPoint {
public:
    explicit DiagonalPoint(std::vector<Complex> values);

    Eigen::Index dim() const { return static_cast<Eigen::Index>(d_.size()); }
    const std::vector<Complex>& values() const { return d_; }
    Complex value(Eigen::Index i) const { return d_[static_cast<std::size_t>(i)]; }
    double modulus(Eigen::Index i) const { return moduli_[static_cast<std::size_t>(i)]; }
    double phase(Eigen::Index i) const { return phases_[static_cast<std::size_t>(i)]; }

    bool same_value(Eigen::Index i, Eigen::Index j) const {
        return same_value_[static_cast<std::size_t>(i * dim() + j)];
    }
    bool same_modulus(Eigen::Index i, Eigen::Index j) const {
        return same_modulus_[static_cast<std::size_t>(i * dim() + j)];
    }
    bool same_phase(Eigen::Index i, Eigen::Index j) const {
        return same_phase_[static_cast<std::size_t>(i * dim() + j)];
    }

    CMatrix matrix() const;  // diag(d)

private:
    std::vector<Complex> d_;
    std::vector<double> moduli_;
    std::vector<double> phases_;
    std::vector<bool> same_value_;
    std::vector<bool> same_modulus_;
    std::vector<bool> same_phase_;
};

// Element of the orbit tangent space at D: X_ij = 0 whenever d_i = d_j.
// The sparsity pattern is enforced (zeroed) at construction.
struct TangentVector {
    CMatrix x;
};

// All entrywise matrices of the first-order model of the transform at a
// diagonal fixed point, for fixed (d, lambda):
//   K_ij = |d_j - d_i| sgn(j - i)          (0 when d_i = d_j)
//   J_ij = (d_j - d_i) / K_ij              (1 when d_i = d_j); [A, D] = J o K o A
//   M_half_lambda: divided differences of x -> x^(lambda/2) at |d_i|^2
//   Rmat_ij = 2 conj(d_i) d_j, Tplus_ij = |d_i|^2 + |d_j|^2,
//   Tminus_ij = |d_j|^2 - |d_i|^2          (velocity of t -> (c(t))^* c(t))
//   Nmat_ij = |d_j|^(-lambda), Lmat_ij = |d_i|^lambda |d_j|^(-lambda)
//   H = M_half_lambda o Nmat o (Rmat - Tplus) + Lmat
//   H1 = (H + H^*)/2, H2 = (H - H^*)/2     (H2 = 0 where |d_i| = |d_j|)
//   G_ij = -H2_ij / (1 - H1_ij) on the support, 0 elsewhere; anti-Hermitian
//   k: contraction constant of the derivative transverse to the unitary orbit
struct DerivativeModel {
    double lambda = 0.0;
    CMatrix J, K, M_half_lambda, Rmat, Tplus, Tminus, Nmat, Lmat;
    CMatrix H, H1, H2, G;
    double k = 0.0;
};

DerivativeModel build_model(const DiagonalPoint& d, double lambda);

// max over { (|d_j|^(1-l) |d_i|^l + |d_i|^(1-l) |d_j|^l) / (|d_i| + |d_j|) :
//            |d_i| != |d_j| }
// and     { |l (e^{i(theta_j - theta_i)} - 1) + 1| : theta_i != theta_j }.
// Both families empty (scalar orbit) gives 0 by convention. Always < 1.
double k_constant(const DiagonalPoint& d, double lambda);

// X = A D - D A, with the tangent sparsity pattern applied.
TangentVector tangent_from_direction(const DiagonalPoint& d, const CMatrix& a);

// Zeroes the pattern and throws NotTangent if any forbidden entry exceeds
// 1e-10 * ||m||_F.
TangentVector make_tangent(const DiagonalPoint& d, const CMatrix& m);

// Orthogonal projection from the orbit tangent space onto the complement of
// the unitary-orbit tangent space: Q x = J o P_antiherm(J^(o-1) o x).
TangentVector q_projection(const DiagonalPoint& d, const TangentVector& x);

// Derivative of the transform at D: (C_H . Q + (I - Q)) x.
TangentVector derivative_apply(const DiagonalPoint& d, double lambda, const TangentVector& x);

// Independent oracle: central difference of the transform along the curve
// exp(tA) D exp(-tA), with A recovered from x by A_ij = x_ij / (d_j - d_i).
TangentVector derivative_fd(const DiagonalPoint& d, double lambda, const TangentVector& x,
                            double h);

// The anti-Hermitian matrix G(lambda) of the stable projection block.
CMatrix stable_projection_g(const DiagonalPoint& d, double lambda);

// The projection onto the stable direction parallel to the unitary-orbit
// tangent space: P x = Q x + (I - Q)(G o Q x).
TangentVector stable_projection_apply(const DiagonalPoint& d, double lambda,
                                      const TangentVector& x);

// Operator norm of an entrywise multiplier on the tangent space:
// max |a_ij| over the support.
double hadamard_norm(const DiagonalPoint& d, const CMatrix& a);

// Real orthonormal coordinates on the tangent space (basis E_ij, i*E_ij over
// the support). Lets real-linear operators (the projections are only
// real-linear) be handled as explicit real matrices.
class TangentBasis {
public:
    explicit TangentBasis(const DiagonalPoint& d);

    Eigen::Index real_dim() const { return 2 * static_cast<Eigen::Index>(support_.size()); }
    const std::vector<std::pair<Eigen::Index, Eigen::Index>>& support() const {
        return support_;
    }

    RVector coords(const CMatrix& y) const;
    CMatrix matrix(const RVector& v) const;

    // Real matrix of a real-linear operator on the tangent space.
    RMatrix operator_matrix(const std::function<CMatrix(const CMatrix&)>& op) const;

private:
    Eigen::Index dim_;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> support_;
};

// Operator norm of the Q-compressed derivative (the transverse block),
// computed as the largest singular value of its explicit real matrix on an
// orthonormal basis of range(Q).
double q_compressed_derivative_norm(const DiagonalPoint& d, double lambda);

}  // namespace aluthge
