#pragma once

// Scalar machinery shared by both equation variants: the function
// f(v) = 1 + v - e^v on (-inf, 0], its inverse g, and the right-hand-side
// nonlinearities with their Lipschitz bounds.

#include <string_view>

namespace csh {

enum class NonlinearityKind {
    Generalized,  // H(w) = -lambda e^{g(w)} (e^{g(w)} - 1)^2, range [-4 lambda/27, 0)
    Standard,     // H(w) =  lambda e^{w} (e^{w} - 1),         range [-lambda/4, 0)
};

const char* kind_name(NonlinearityKind kind);
NonlinearityKind kind_from_name(std::string_view name);  // "generalized" | "standard"

// f(v) = 1 + v - e^v, strictly increasing on (-inf, 0] with f(0) = 0.
// Evaluated as v - expm1(v) to avoid cancellation near zero.
double f_forward(double v);

// Inverse of f on (-inf, 0]: returns v with |f(v) - u| <= tol, v in the
// certified bracket [u-1, u]. Safeguarded Newton with bisection fallback;
// near the origin the expansion f(v) ~ -v^2/2 seeds the iteration since
// f'(v) = 1 - e^v degenerates there. The residual tolerance is honored up
// to the evaluation floor of f in double precision (a few ulps of |u|).
double g_inverse(double u, double tol = 1e-14);

// H(w) for the selected variant; requires w < 0 (the maximal-solution regime).
double nonlinearity(NonlinearityKind kind, double lambda, double w);

// dH/dw; Generalized: lambda t (3t - 1) with t = e^{g(w)};
// Standard: lambda s (2s - 1) with s = e^w.
double nonlinearity_derivative(NonlinearityKind kind, double lambda, double w);

// Certified bound L >= sup_{w<0} |dH/dw|: 2 lambda (Generalized), lambda
// (Standard). Any shift K > L makes the monotone scheme order-preserving.
double lipschitz_bound(NonlinearityKind kind, double lambda);

}  // namespace csh
