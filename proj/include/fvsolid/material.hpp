#pragma once

#include <string>
#include <utility>

#include "fvsolid/core.hpp"

namespace fvsolid {

/// Lame parameters (mu, lambda) from Young's modulus and Poisson's ratio.
/// The pure displacement formulation breaks down at incompressibility, so
/// nu must lie strictly inside (-1, 0.5).
inline std::pair<double, double> derivedModuli(double youngsModulus, double poissonRatio) {
    if (!(youngsModulus > 0.0))
        throw InvalidArgumentError("invalid material: Young's modulus must be positive");
    if (!(poissonRatio > -1.0 && poissonRatio < 0.5))
        throw InvalidArgumentError("invalid material: Poisson ratio must lie in (-1, 0.5), got " +
                                   std::to_string(poissonRatio));
    const double mu = youngsModulus / (2.0 * (1.0 + poissonRatio));
    const double lambda = youngsModulus * poissonRatio /
                          ((1.0 + poissonRatio) * (1.0 - 2.0 * poissonRatio));
    return {mu, lambda};
}

/// Uniform isotropic linear-elastic material.
struct LinearElasticMaterial {
    double youngsModulus = 0.0;  // E
    double poissonRatio = 0.0;   // nu
    double density = 0.0;        // rho, unused for steady problems
    double shearModulus = 0.0;   // mu
    double lameLambda = 0.0;     // lambda

    /// 2 mu + lambda: the implicit central coefficient and the smoothing
    /// magnitude of the face diffusion term.
    double implicitStiffness() const { return 2.0 * shearModulus + lameLambda; }

    static LinearElasticMaterial fromYoungPoisson(double youngsModulus, double poissonRatio,
                                                  double density) {
        const auto [mu, lambda] = derivedModuli(youngsModulus, poissonRatio);
        if (!(density > 0.0))
            throw InvalidArgumentError("invalid material: density must be positive");
        LinearElasticMaterial m;
        m.youngsModulus = youngsModulus;
        m.poissonRatio = poissonRatio;
        m.density = density;
        m.shearModulus = mu;
        m.lameLambda = lambda;
        return m;
    }

    static LinearElasticMaterial fromLame(double mu, double lambda, double density) {
        if (!(mu > 0.0))
            throw InvalidArgumentError("invalid material: shear modulus must be positive");
        if (!(2.0 * mu + lambda > 0.0))
            throw InvalidArgumentError("invalid material: 2 mu + lambda must be positive");
        if (!(density > 0.0))
            throw InvalidArgumentError("invalid material: density must be positive");
        LinearElasticMaterial m;
        m.shearModulus = mu;
        m.lameLambda = lambda;
        m.density = density;
        m.youngsModulus = mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu);
        m.poissonRatio = lambda / (2.0 * (lambda + mu));
        return m;
    }
};

/// Hooke's law in terms of the displacement gradient:
///   sigma = mu gradU + mu gradU^T + lambda tr(gradU) I
/// Symmetric by construction.
inline Tensor3 stressFromGradient(const Tensor3& gradU, const LinearElasticMaterial& material) {
    const double mu = material.shearModulus;
    const double lambda = material.lameLambda;
    Tensor3 sigma;
    const double dil = lambda * gradU.trace();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) sigma.m[i][j] = mu * (gradU.m[i][j] + gradU.m[j][i]);
        sigma.m[i][i] += dil;
    }
    return sigma;
}

}  // namespace fvsolid
