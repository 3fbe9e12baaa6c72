#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <utility>

#include "zsigil/common.hpp"
#include "zsigil/hash.hpp"
#include "zsigil/manifold.hpp"
#include "zsigil/rng.hpp"

namespace zsigil {

/// Endomorphism of the tangent fiber, an r x r real matrix.
using Endomorphism = Eigen::MatrixXd;

inline constexpr double kFrameDetFloor = 1e-6;
inline constexpr double kInverseZeroTol = 1e-12;

/// Per-point fiber operation
///
///   star(u, v) = C_p diag(u) diag(eta_p(v)) C_p^{-1}
///
/// with frame C_p an invertible r x r matrix and the componentwise key map
///
///   eta_p(v)_j = a_j v_j + b_j v_j^3,      a_j > 0, b_j >= 0.
///
/// eta_p is strictly increasing per component, hence bijective on R, which
/// gives every public key with nonzero components a unique exact inverse:
///
///   star(e, d) = I  <=>  d_j = eta_p^{-1}(1 / e_j).
///
/// The first slot is linear, so star(s u, v) = s star(u, v) for scalars s;
/// blockwise decryption relies on that homogeneity.
class FiberOperation {
public:
    FiberOperation(ManifoldPoint base, Mat frame, Vec keymap_a, Vec keymap_b)
        : base_(std::move(base)),
          frame_(std::move(frame)),
          a_(std::move(keymap_a)),
          b_(std::move(keymap_b)) {
        const int r = base_.dim();
        if (frame_.rows() != r || frame_.cols() != r)
            throw std::invalid_argument("FiberOperation: frame must be r x r");
        if (a_.size() != r || b_.size() != r)
            throw std::invalid_argument("FiberOperation: key map needs r coefficients");
        for (int j = 0; j < r; ++j)
            if (!(a_[j] > 0.0) || b_[j] < 0.0)
                throw std::invalid_argument("FiberOperation: need a_j > 0 and b_j >= 0");
        Eigen::PartialPivLU<Mat> lu(frame_);
        det_ = lu.determinant();
        if (std::abs(det_) < kFrameDetFloor)
            throw std::invalid_argument("FiberOperation: frame determinant below floor");
        frame_inv_ = lu.inverse();
    }

    /// Identity frame with a_j = a, b_j = b; the worked-example
    /// configuration (a = 1, b = 0 reduces star to diag(u) diag(v)).
    static FiberOperation diagonal(ManifoldPoint base, double a = 1.0, double b = 0.0) {
        const int r = base.dim();
        return FiberOperation(std::move(base), Mat::Identity(r, r), Vec::Constant(r, a),
                              Vec::Constant(r, b));
    }

    const ManifoldPoint& base() const { return base_; }
    int dim() const { return base_.dim(); }
    const Mat& frame() const { return frame_; }
    const Mat& frame_inverse() const { return frame_inv_; }
    double frame_det() const { return det_; }
    const Vec& keymap_a() const { return a_; }
    const Vec& keymap_b() const { return b_; }

    /// eta_p applied componentwise.
    Vec keymap(const Vec& v) const {
        Vec out(v.size());
        for (int j = 0; j < v.size(); ++j)
            out[j] = a_[j] * v[j] + b_[j] * v[j] * v[j] * v[j];
        return out;
    }

    /// Unique real solution x of b_j x^3 + a_j x = y (Cardano plus a
    /// Newton polish; the cubic is strictly increasing so the root is
    /// unique).
    double keymap_invert(int j, double y) const {
        const double a = a_[j];
        const double b = b_[j];
        double x;
        if (b == 0.0) {
            x = y / a;
        } else {
            // depressed cubic x^3 + p x + q = 0 with p = a/b > 0, q = -y/b
            const double p = a / b;
            const double q = -y / b;
            const double disc = q * q / 4.0 + p * p * p / 27.0;
            const double halfq = -q / 2.0;
            const double root = std::sqrt(disc);
            // pick the cube-root branch that adds same-signed terms
            const double u = std::cbrt(halfq >= 0.0 ? halfq + root : halfq - root);
            x = u - p / (3.0 * u);
        }
        // two Newton steps restore full double precision after cancellation
        for (int it = 0; it < 2; ++it) {
            const double f = b * x * x * x + a * x - y;
            const double df = 3.0 * b * x * x + a;
            x -= f / df;
        }
        return x;
    }

private:
    ManifoldPoint base_;
    Mat frame_;
    Mat frame_inv_;
    Vec a_;
    Vec b_;
    double det_ = 0.0;
};

namespace detail {

inline void require_based_at(const FiberOperation& op, const TangentVector& v,
                             const char* what) {
    if (!(v.base == op.base()))
        throw std::invalid_argument(std::string(what) + ": vector not based at the operation's point");
}

}  // namespace detail

/// The fiber operation itself: an endomorphism of T_pM.
inline Endomorphism star(const FiberOperation& op, const TangentVector& u,
                         const TangentVector& v) {
    detail::require_based_at(op, u, "star");
    detail::require_based_at(op, v, "star");
    const Vec w = op.keymap(v.components);
    return op.frame() * u.components.asDiagonal() * w.asDiagonal() * op.frame_inverse();
}

/// Trace of star(u, v) divided by r, computed through the similarity
/// invariance Tr(C X C^{-1}) = Tr(X). Decryption uses this route; it is
/// algebraically identical to tracing the full product and avoids the
/// frame's condition number entirely.
inline double star_normalized_trace(const FiberOperation& op, const TangentVector& u,
                                    const TangentVector& v) {
    detail::require_based_at(op, u, "star_normalized_trace");
    detail::require_based_at(op, v, "star_normalized_trace");
    const Vec w = op.keymap(v.components);
    double acc = 0.0;
    for (int j = 0; j < u.dim(); ++j)
        acc += u.components[j] * w[j];
    return acc / op.dim();
}

/// Normalized trace functional T(X) = Tr(X) / r.
inline double normalized_trace(const Endomorphism& x) {
    if (x.rows() != x.cols())
        throw std::invalid_argument("normalized_trace: matrix must be square");
    return x.trace() / static_cast<double>(x.rows());
}

/// The unique private key d with star(e, d) = identity. Defined only for
/// e with all components nonzero (the fiber composition is partial).
inline TangentVector inverse_key(const FiberOperation& op, const TangentVector& e) {
    detail::require_based_at(op, e, "inverse_key");
    Vec d(e.dim());
    for (int j = 0; j < e.dim(); ++j) {
        const double ej = e.components[j];
        if (std::abs(ej) < kInverseZeroTol)
            throw std::invalid_argument("inverse_key: component too close to zero, inverse undefined");
        d[j] = op.keymap_invert(j, 1.0 / ej);
    }
    return TangentVector{e.base, std::move(d)};
}

/// Key-generation direction: the public key e paired with private d.
inline TangentVector forward_key(const FiberOperation& op, const TangentVector& d) {
    detail::require_based_at(op, d, "forward_key");
    const Vec w = op.keymap(d.components);
    Vec e(d.dim());
    for (int j = 0; j < d.dim(); ++j) {
        if (std::abs(w[j]) < kInverseZeroTol)
            throw GenerationFailure("forward_key: key map vanished, resample the private key");
        e[j] = 1.0 / w[j];
    }
    return TangentVector{d.base, std::move(e)};
}

/// Derive the fiber operation at p from a 32-byte secret. The frame is a
/// seeded Gaussian pre-frame with every entry modulated by a trigonometric
/// polynomial of the base-point coordinates, so the operation depends
/// nonlinearly on p; the key-map coefficients are derived the same way
/// with a_j in [0.5, 2] and b_j in [0, 1]. Resamples until the frame
/// determinant clears the floor.
template <BitSource G = Xoshiro256ss>
FiberOperation derive_operation(const TorusModel& model, const ManifoldPoint& p,
                                const Seed256& secret_seed) {
    const int r = model.dim();
    if (p.dim() != r)
        throw std::invalid_argument("derive_operation: point dimension mismatch");

    Xoshiro256ss gen(tagged_seed(secret_seed, "fiber-op"));
    NormalSampler<Xoshiro256ss> normal;

    // phase of the modulating trig polynomial; frequency is fixed at one
    // cycle across the sum of unit coordinates
    double coord_sum = 0.0;
    for (int j = 0; j < r; ++j) coord_sum += p.unit_coord(j);
    const double theta = 2.0 * std::numbers::pi * coord_sum;
    auto modulate = [&](double phase) {
        return 1.0 + 0.5 * std::sin(theta + phase) + 0.25 * std::cos(2.0 * theta - phase);
    };

    Vec a(r), b(r);
    for (int j = 0; j < r; ++j) {
        const double phase = uniform_range(gen, 0.0, 2.0 * std::numbers::pi);
        const double ta = uniform_unit(gen);
        const double xa = ta + (modulate(phase) - 1.0) * 0.25;
        a[j] = 0.5 + 1.5 * std::clamp(xa - std::floor(xa), 0.0, 1.0);
        const double tb = uniform_unit(gen);
        const double xb = tb + (modulate(-phase) - 1.0) * 0.25;
        b[j] = std::clamp(xb - std::floor(xb), 0.0, 1.0);
    }

    for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
        Mat frame(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                const double phase = uniform_range(gen, 0.0, 2.0 * std::numbers::pi);
                frame(i, j) = normal(gen) * modulate(phase);
            }
        if (std::abs(frame.determinant()) < kFrameDetFloor)
            continue;
        return FiberOperation(p, std::move(frame), a, b);
    }
    throw GenerationFailure("derive_operation: frame determinant floor never met");
}

}  // namespace zsigil
