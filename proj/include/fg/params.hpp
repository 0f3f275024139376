#pragma once

#include <cmath>

#include "fg/errors.hpp"

namespace fg {

/// Exponent regime of the pair (p, q).
enum class Regime {
    Giant,           ///< q = p-1: source balances the diffusion scaling
    PLaplacianLimit, ///< p-1 < q <= p: source washes out in the long-time limit
    Super            ///< q > p: source can defeat the diffusion for large data
};

/// Validated exponent pair and spatial dimension.
struct Params {
    double p = 3.0; ///< diffusion exponent, p > 2
    double q = 2.0; ///< source exponent, q >= p-1
    int dim = 1;    ///< spatial dimension N >= 1

    Regime regime() const {
        if (q == p - 1.0) return Regime::Giant;
        if (q <= p) return Regime::PLaplacianLimit;
        return Regime::Super;
    }
};

/// Validates (p, q, dim) and returns the tagged parameter set.
/// Throws DomainError naming the violated bound.
inline Params make_params(double p, double q, int dim) {
    if (!std::isfinite(p) || !std::isfinite(q))
        throw DomainError("make_params: p and q must be finite");
    if (!(p > 2.0))
        throw DomainError("make_params: require p > 2, got p = " + std::to_string(p));
    if (!(q >= p - 1.0))
        throw DomainError("make_params: require q >= p-1, got q = " + std::to_string(q) +
                          " < " + std::to_string(p - 1.0));
    if (dim < 1)
        throw DomainError("make_params: require dim >= 1");
    return Params{p, q, dim};
}

} // namespace fg
