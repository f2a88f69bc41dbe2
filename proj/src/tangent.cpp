#include "aluthge/tangent.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "aluthge/transform.hpp"

namespace aluthge {

namespace {

constexpr double kPairTol = 1e-10;

CMatrix herm_part(const CMatrix& b) { return 0.5 * (b + b.adjoint()); }
CMatrix antiherm_part(const CMatrix& b) { return 0.5 * (b - b.adjoint()); }

}  // namespace

DiagonalPoint::DiagonalPoint(std::vector<Complex> values) : d_(std::move(values)) {
    if (d_.empty()) throw SingularD("DiagonalPoint: empty diagonal");
    const auto r = d_.size();
    moduli_.resize(r);
    phases_.resize(r);
    double max_mod = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        moduli_[i] = std::abs(d_[i]);
        if (!(moduli_[i] > 0.0))
            throw SingularD("DiagonalPoint: entry " + std::to_string(i) + " is zero");
        double ph = std::arg(d_[i]);
        if (ph < 0) ph += 2.0 * M_PI;
        phases_[i] = ph;
        max_mod = std::max(max_mod, moduli_[i]);
    }
    same_value_.resize(r * r);
    same_modulus_.resize(r * r);
    same_phase_.resize(r * r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            same_value_[i * r + j] = std::abs(d_[i] - d_[j]) <= kPairTol * max_mod;
            same_modulus_[i * r + j] =
                std::abs(moduli_[i] - moduli_[j]) <= kPairTol * std::max(moduli_[i], moduli_[j]);
            const Complex ui = d_[i] / moduli_[i];
            const Complex uj = d_[j] / moduli_[j];
            same_phase_[i * r + j] = std::abs(ui - uj) <= kPairTol;
        }
    }
}

CMatrix DiagonalPoint::matrix() const {
    const Eigen::Index r = dim();
    CMatrix m = CMatrix::Zero(r, r);
    for (Eigen::Index i = 0; i < r; ++i) m(i, i) = value(i);
    return m;
}

double k_constant(const DiagonalPoint& d, double lambda) {
    require_lambda(lambda);
    const Eigen::Index r = d.dim();
    double k = 0.0;
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < r; ++j) {
            if (i == j) continue;
            if (!d.same_modulus(i, j)) {
                const double mi = d.modulus(i), mj = d.modulus(j);
                const double num = std::pow(mj, 1.0 - lambda) * std::pow(mi, lambda) +
                                   std::pow(mi, 1.0 - lambda) * std::pow(mj, lambda);
                k = std::max(k, num / (mi + mj));
            }
            if (!d.same_phase(i, j)) {
                const Complex rot = std::polar(1.0, d.phase(j) - d.phase(i));
                k = std::max(k, std::abs(lambda * (rot - 1.0) + 1.0));
            }
        }
    }
    return k;
}

DerivativeModel build_model(const DiagonalPoint& d, double lambda) {
    require_lambda(lambda);
    const Eigen::Index r = d.dim();
    DerivativeModel m;
    m.lambda = lambda;
    m.K = CMatrix::Zero(r, r);
    m.J = CMatrix::Ones(r, r);
    m.M_half_lambda = CMatrix::Zero(r, r);
    m.Rmat = CMatrix::Zero(r, r);
    m.Tplus = CMatrix::Zero(r, r);
    m.Tminus = CMatrix::Zero(r, r);
    m.Nmat = CMatrix::Zero(r, r);
    m.Lmat = CMatrix::Zero(r, r);
    m.G = CMatrix::Zero(r, r);

    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < r; ++j) {
            const Complex di = d.value(i), dj = d.value(j);
            const double mi = d.modulus(i), mj = d.modulus(j);
            if (!d.same_value(i, j)) {
                const double sgn = (j > i) ? 1.0 : -1.0;
                m.K(i, j) = std::abs(dj - di) * sgn;
                m.J(i, j) = (dj - di) / m.K(i, j);
            }
            if (d.same_modulus(i, j)) {
                m.M_half_lambda(i, j) = 0.5 * lambda * std::pow(mi, lambda - 2.0);
            } else {
                m.M_half_lambda(i, j) =
                    (std::pow(mj, lambda) - std::pow(mi, lambda)) / (mj * mj - mi * mi);
            }
            m.Rmat(i, j) = 2.0 * std::conj(di) * dj;
            m.Tplus(i, j) = mi * mi + mj * mj;
            m.Tminus(i, j) = mj * mj - mi * mi;
            m.Nmat(i, j) = std::pow(mj, -lambda);
            m.Lmat(i, j) = std::pow(mi, lambda) * std::pow(mj, -lambda);
        }
    }

    m.H = m.M_half_lambda.cwiseProduct(m.Nmat).cwiseProduct(m.Rmat - m.Tplus) + m.Lmat;
    m.H1 = herm_part(m.H);
    m.H2 = antiherm_part(m.H);

    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j)
            if (!d.same_value(i, j)) m.G(i, j) = -m.H2(i, j) / (1.0 - m.H1(i, j));

    m.k = k_constant(d, lambda);
    return m;
}

TangentVector make_tangent(const DiagonalPoint& d, const CMatrix& m) {
    if (m.rows() != d.dim() || m.cols() != d.dim())
        throw DimensionMismatch("make_tangent: matrix does not match the diagonal point");
    const double scale = std::max(m.norm(), 1e-300);
    CMatrix x = m;
    for (Eigen::Index i = 0; i < d.dim(); ++i) {
        for (Eigen::Index j = 0; j < d.dim(); ++j) {
            if (!d.same_value(i, j)) continue;
            if (std::abs(x(i, j)) > 1e-10 * scale)
                throw NotTangent("make_tangent: entry (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") violates the sparsity pattern");
            x(i, j) = 0.0;
        }
    }
    return {x};
}

TangentVector tangent_from_direction(const DiagonalPoint& d, const CMatrix& a) {
    if (a.rows() != d.dim() || a.cols() != d.dim())
        throw DimensionMismatch("tangent_from_direction: shape mismatch");
    const CMatrix dd = d.matrix();
    CMatrix x = a * dd - dd * a;
    for (Eigen::Index i = 0; i < d.dim(); ++i)
        for (Eigen::Index j = 0; j < d.dim(); ++j)
            if (d.same_value(i, j)) x(i, j) = 0.0;
    return {x};
}

namespace {

// J^(o-1) o x on the support ( |J_ij| = 1 there, so the reciprocal is the
// conjugate ); entries with d_i = d_j are zero in any tangent vector.
CMatrix j_recip_product(const DiagonalPoint& d, const CMatrix& j, const CMatrix& x) {
    CMatrix y = CMatrix::Zero(d.dim(), d.dim());
    for (Eigen::Index i = 0; i < d.dim(); ++i)
        for (Eigen::Index j2 = 0; j2 < d.dim(); ++j2)
            if (!d.same_value(i, j2)) y(i, j2) = x(i, j2) / j(i, j2);
    return y;
}

CMatrix q_apply(const DiagonalPoint& d, const CMatrix& j, const CMatrix& x) {
    const CMatrix inner = antiherm_part(j_recip_product(d, j, x));
    CMatrix y = j.cwiseProduct(inner);
    for (Eigen::Index i = 0; i < d.dim(); ++i)
        for (Eigen::Index j2 = 0; j2 < d.dim(); ++j2)
            if (d.same_value(i, j2)) y(i, j2) = 0.0;
    return y;
}

CMatrix build_j(const DiagonalPoint& d) {
    const Eigen::Index r = d.dim();
    CMatrix j = CMatrix::Ones(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j2 = 0; j2 < r; ++j2)
            if (!d.same_value(i, j2)) {
                const double sgn = (j2 > i) ? 1.0 : -1.0;
                const Complex diff = d.value(j2) - d.value(i);
                j(i, j2) = diff / (std::abs(diff) * sgn);
            }
    return j;
}

}  // namespace

TangentVector q_projection(const DiagonalPoint& d, const TangentVector& x) {
    const TangentVector checked = make_tangent(d, x.x);
    return {q_apply(d, build_j(d), checked.x)};
}

TangentVector derivative_apply(const DiagonalPoint& d, double lambda, const TangentVector& x) {
    const DerivativeModel m = build_model(d, lambda);
    const TangentVector checked = make_tangent(d, x.x);
    const CMatrix q = q_apply(d, m.J, checked.x);
    return {m.H.cwiseProduct(q) + (checked.x - q)};
}

TangentVector derivative_fd(const DiagonalPoint& d, double lambda, const TangentVector& x,
                            double h) {
    require_lambda(lambda);
    if (!(h > 0.0)) throw Error("derivative_fd: h must be positive");
    const Eigen::Index r = d.dim();
    CMatrix a = CMatrix::Zero(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j)
            if (!d.same_value(i, j)) a(i, j) = x.x(i, j) / (d.value(j) - d.value(i));

    const CMatrix dd = d.matrix();
    const CMatrix e_plus = (h * a).exp();
    const CMatrix e_minus = (-h * a).exp();
    const CMatrix g_plus = transform(e_plus * dd * e_minus, lambda);
    const CMatrix g_minus = transform(e_minus * dd * e_plus, lambda);
    return {(g_plus - g_minus) / (2.0 * h)};
}

CMatrix stable_projection_g(const DiagonalPoint& d, double lambda) {
    return build_model(d, lambda).G;
}

TangentVector stable_projection_apply(const DiagonalPoint& d, double lambda,
                                      const TangentVector& x) {
    const DerivativeModel m = build_model(d, lambda);
    const TangentVector checked = make_tangent(d, x.x);
    const CMatrix q = q_apply(d, m.J, checked.x);
    const CMatrix gq = m.G.cwiseProduct(q);
    return {q + (gq - q_apply(d, m.J, gq))};
}

double hadamard_norm(const DiagonalPoint& d, const CMatrix& a) {
    double mx = 0.0;
    for (Eigen::Index i = 0; i < d.dim(); ++i)
        for (Eigen::Index j = 0; j < d.dim(); ++j)
            if (!d.same_value(i, j)) mx = std::max(mx, std::abs(a(i, j)));
    return mx;
}

TangentBasis::TangentBasis(const DiagonalPoint& d) : dim_(d.dim()) {
    for (Eigen::Index i = 0; i < dim_; ++i)
        for (Eigen::Index j = 0; j < dim_; ++j)
            if (!d.same_value(i, j)) support_.emplace_back(i, j);
}

RVector TangentBasis::coords(const CMatrix& y) const {
    RVector v(real_dim());
    for (std::size_t k = 0; k < support_.size(); ++k) {
        const auto [i, j] = support_[k];
        v(static_cast<Eigen::Index>(2 * k)) = y(i, j).real();
        v(static_cast<Eigen::Index>(2 * k + 1)) = y(i, j).imag();
    }
    return v;
}

CMatrix TangentBasis::matrix(const RVector& v) const {
    CMatrix y = CMatrix::Zero(dim_, dim_);
    for (std::size_t k = 0; k < support_.size(); ++k) {
        const auto [i, j] = support_[k];
        y(i, j) = Complex(v(static_cast<Eigen::Index>(2 * k)),
                          v(static_cast<Eigen::Index>(2 * k + 1)));
    }
    return y;
}

RMatrix TangentBasis::operator_matrix(const std::function<CMatrix(const CMatrix&)>& op) const {
    const Eigen::Index n = real_dim();
    RMatrix m(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        RVector e = RVector::Zero(n);
        e(col) = 1.0;
        m.col(col) = coords(op(matrix(e)));
    }
    return m;
}

double q_compressed_derivative_norm(const DiagonalPoint& d, double lambda) {
    const DerivativeModel model = build_model(d, lambda);
    const TangentBasis basis(d);
    if (basis.real_dim() == 0) return 0.0;

    const RMatrix mq = basis.operator_matrix(
        [&](const CMatrix& x) { return q_apply(d, model.J, x); });
    const RMatrix md = basis.operator_matrix([&](const CMatrix& x) {
        const CMatrix q = q_apply(d, model.J, x);
        return CMatrix(model.H.cwiseProduct(q) + (x - q));
    });

    // Orthonormal basis of range(Q): eigenvectors of the symmetric idempotent
    // with eigenvalue 1.
    Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (mq + mq.transpose()));
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5) cols.push_back(i);
    if (cols.empty()) return 0.0;
    RMatrix b(basis.real_dim(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) b.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(cols[c]);

    const RMatrix compressed = b.transpose() * md * b;
    Eigen::JacobiSVD<RMatrix> svd(compressed);
    return svd.singularValues()(0);
}

}  // namespace aluthge
