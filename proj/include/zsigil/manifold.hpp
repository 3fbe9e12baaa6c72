#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include "zsigil/common.hpp"
#include "zsigil/rng.hpp"

namespace zsigil {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Flat complex torus of real dimension r: the fundamental domain is
/// [0, L_1) x ... x [0, L_r). It is compact with trivial canonical
/// bundle, so the flat metric is Ricci-flat; no curvature data is ever
/// needed computationally.
class TorusModel {
public:
    TorusModel(int dim, std::vector<double> moduli) : dim_(dim), moduli_(std::move(moduli)) {
        if (dim_ < 2 || dim_ % 2 != 0)
            throw std::invalid_argument("TorusModel: dimension must be even and >= 2");
        if (static_cast<int>(moduli_.size()) != dim_)
            throw std::invalid_argument("TorusModel: need one modulus per dimension");
        for (double m : moduli_)
            if (!(m > 0.0) || m > 1.0)
                throw std::invalid_argument("TorusModel: moduli must lie in (0, 1]");
    }

    /// Unit moduli in every direction.
    explicit TorusModel(int dim) : TorusModel(dim, std::vector<double>(dim, 1.0)) {}

    int dim() const { return dim_; }
    const std::vector<double>& moduli() const { return moduli_; }

    /// Reduce a raw coordinate into [0, modulus).
    static double reduce_coord(double x, double modulus) {
        double y = std::fmod(x, modulus);
        if (y < 0.0) y += modulus;
        if (y >= modulus) y = 0.0;  // fmod can land exactly on the modulus after the fixup
        return y;
    }

private:
    int dim_;
    std::vector<double> moduli_;
};

/// A point on the torus, coordinates always reduced into the fundamental
/// domain. Carries its moduli so sections and fiber operations can work
/// from the point alone.
class ManifoldPoint {
public:
    ManifoldPoint(const TorusModel& model, std::vector<double> raw)
        : coords_(std::move(raw)), moduli_(model.moduli()) {
        if (static_cast<int>(coords_.size()) != model.dim())
            throw std::invalid_argument("ManifoldPoint: coordinate count mismatch");
        for (std::size_t j = 0; j < coords_.size(); ++j)
            coords_[j] = TorusModel::reduce_coord(coords_[j], moduli_[j]);
    }

    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<double>& coords() const { return coords_; }
    const std::vector<double>& moduli() const { return moduli_; }

    /// Coordinates rescaled to the unit torus, x_j / L_j in [0, 1).
    double unit_coord(int j) const { return coords_[j] / moduli_[j]; }

    friend bool operator==(const ManifoldPoint& a, const ManifoldPoint& b) {
        return a.coords_ == b.coords_ && a.moduli_ == b.moduli_;
    }

private:
    std::vector<double> coords_;
    std::vector<double> moduli_;
};

/// Element of the tangent fiber at `base`, components in the coordinate
/// frame of the flat torus.
struct TangentVector {
    ManifoldPoint base;
    Vec components;

    int dim() const { return static_cast<int>(components.size()); }
};

/// Uniform sample from the fundamental domain.
template <BitSource G>
ManifoldPoint sample_point(const TorusModel& model, G& gen) {
    std::vector<double> coords(model.dim());
    for (int j = 0; j < model.dim(); ++j)
        coords[j] = uniform_unit(gen) * model.moduli()[j];
    return ManifoldPoint(model, std::move(coords));
}

/// Sparse truncated-Fourier vector field: each output component is a sum
/// of at most kMaxTermsPerComponent cosine/sine terms over integer
/// frequency vectors with max-norm <= cutoff. Smooth and exactly periodic
/// by construction, so it is a global section of the tangent bundle.
class FourierSection {
public:
    static constexpr int kMaxTermsPerComponent = 32;

    struct Term {
        std::vector<int> freq;  // integer frequency vector, |k_j| <= cutoff
        double cos_amp;
        double sin_amp;
    };

    FourierSection(int dim, int cutoff, std::vector<std::vector<Term>> terms)
        : dim_(dim), cutoff_(cutoff), terms_(std::move(terms)) {
        if (static_cast<int>(terms_.size()) != dim_)
            throw std::invalid_argument("FourierSection: one term list per component required");
    }

    int dim() const { return dim_; }
    int cutoff() const { return cutoff_; }
    const std::vector<std::vector<Term>>& terms() const { return terms_; }

private:
    int dim_;
    int cutoff_;
    std::vector<std::vector<Term>> terms_;
};

/// Evaluate the section at p. The returned vector is based at p, which
/// realises the section property pi(sigma(p)) = p structurally.
inline TangentVector evaluate_section(const FourierSection& sec, const ManifoldPoint& p) {
    if (sec.dim() != p.dim())
        throw std::invalid_argument("evaluate_section: dimension mismatch");
    const int r = p.dim();
    Vec out(r);
    for (int c = 0; c < r; ++c) {
        double acc = 0.0;
        for (const auto& term : sec.terms()[c]) {
            double phase = 0.0;
            for (int j = 0; j < r; ++j)
                phase += term.freq[j] * p.unit_coord(j);
            const double angle = 2.0 * std::numbers::pi * phase;
            acc += term.cos_amp * std::cos(angle) + term.sin_amp * std::sin(angle);
        }
        out[c] = acc;
    }
    return TangentVector{p, std::move(out)};
}

namespace detail {

/// One candidate section, amplitudes standard normal, frequency vectors
/// distinct per component and drawn uniformly from the cube [-F, F]^r.
template <BitSource G>
FourierSection sample_section_candidate(const TorusModel& model, int cutoff, G& gen) {
    const int r = model.dim();
    const std::uint64_t side = 2 * static_cast<std::uint64_t>(cutoff) + 1;
    // slots available in the frequency cube, saturating at the sparsity cap
    double slots = 1.0;
    for (int j = 0; j < r && slots <= FourierSection::kMaxTermsPerComponent; ++j)
        slots *= static_cast<double>(side);
    const int n_terms = static_cast<int>(
        std::min<double>(FourierSection::kMaxTermsPerComponent, slots));

    NormalSampler<G> normal;
    std::vector<std::vector<FourierSection::Term>> comps(r);
    for (int c = 0; c < r; ++c) {
        std::set<std::vector<int>> seen;
        while (static_cast<int>(comps[c].size()) < n_terms) {
            std::vector<int> freq(r);
            for (int j = 0; j < r; ++j)
                freq[j] = static_cast<int>(uniform_below(gen, side)) - cutoff;
            if (!seen.insert(freq).second)
                continue;
            FourierSection::Term term;
            term.freq = std::move(freq);
            term.cos_amp = normal(gen);
            term.sin_amp = normal(gen);
            comps[c].push_back(std::move(term));
        }
    }
    return FourierSection(r, cutoff, std::move(comps));
}

}  // namespace detail

inline constexpr double kSectionValueMin = 0.1;
inline constexpr double kSectionValueMax = 10.0;
inline constexpr int kResampleBudget = 64;

/// Draw a section whose value at `base` has every component with absolute
/// value in [0.1, 10]. Downstream key inversion divides by quantities
/// derived from these values, so the band keeps floating-point error far
/// below the rounding margin.
template <BitSource G>
FourierSection sample_section(const TorusModel& model, int cutoff, G& gen,
                              const ManifoldPoint& base) {
    if (cutoff < 0)
        throw std::invalid_argument("sample_section: cutoff must be >= 0");
    for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
        FourierSection sec = detail::sample_section_candidate(model, cutoff, gen);
        const TangentVector v = evaluate_section(sec, base);
        bool ok = true;
        for (int j = 0; j < v.dim(); ++j) {
            const double a = std::abs(v.components[j]);
            if (!(a >= kSectionValueMin && a <= kSectionValueMax)) {
                ok = false;
                break;
            }
        }
        if (ok) return sec;
    }
    throw GenerationFailure("sample_section: conditioning guard never satisfied");
}

}  // namespace zsigil
