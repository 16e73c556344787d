#include "csh/scalar.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace csh {

const char* kind_name(NonlinearityKind kind) {
    return kind == NonlinearityKind::Generalized ? "generalized" : "standard";
}

NonlinearityKind kind_from_name(std::string_view name) {
    if (name == "generalized") return NonlinearityKind::Generalized;
    if (name == "standard") return NonlinearityKind::Standard;
    throw std::invalid_argument("unknown equation variant \"" + std::string(name) +
                                "\" (expected \"generalized\" or \"standard\")");
}

double f_forward(double v) {
    if (v > 0.0) throw std::domain_error("f_forward: argument must be <= 0");
    return v - std::expm1(v);
}

double g_inverse(double u, double tol) {
    if (u > 0.0) throw std::domain_error("g_inverse: argument must be <= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("g_inverse: tol must be positive");
    if (u == 0.0) return 0.0;

    // v <= f(v) <= v + 1 on (-inf, 0] certifies the bracket [u-1, u].
    double lo = u - 1.0;
    double hi = u;
    double v;
    if (u > -1e-8) {
        v = -std::sqrt(-2.0 * u);  // leading order of the inverse near 0
    } else {
        v = u - 1.0 + std::exp(u - 1.0);  // v = u - 1 + e^v seeded with v ~ u-1
    }
    if (v <= lo || v >= hi) v = 0.5 * (lo + hi);

    const double floor_tol = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(u));
    const double eff_tol = std::max(tol, floor_tol);
    for (int it = 0; it < 200; ++it) {
        const double f = (v - std::expm1(v)) - u;
        if (std::fabs(f) <= eff_tol) return v;
        if (f > 0.0)
            hi = v;
        else
            lo = v;
        const double fp = -std::expm1(v);  // 1 - e^v > 0 for v < 0
        double next = (fp > 0.0) ? v - f / fp : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        v = next;
        if (hi - lo <= std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(lo)))
            return 0.5 * (lo + hi);
    }
    return v;
}

namespace {

void require_regime(double lambda, double w, const char* what) {
    if (!(lambda > 0.0)) throw std::invalid_argument(std::string(what) + ": lambda must be positive");
    if (!(w < 0.0))
        throw std::domain_error(std::string(what) + ": argument must be < 0 (solution regime)");
}

}  // namespace

double nonlinearity(NonlinearityKind kind, double lambda, double w) {
    require_regime(lambda, w, "nonlinearity");
    if (kind == NonlinearityKind::Generalized) {
        const double gv = g_inverse(w);
        const double t = std::exp(gv);
        const double one_minus_t = -std::expm1(gv);  // 1 - t without cancellation
        return -lambda * t * one_minus_t * one_minus_t;
    }
    const double s = std::exp(w);
    return lambda * s * std::expm1(w);  // s (s - 1) = s * expm1(w)
}

double nonlinearity_derivative(NonlinearityKind kind, double lambda, double w) {
    require_regime(lambda, w, "nonlinearity_derivative");
    if (kind == NonlinearityKind::Generalized) {
        const double t = std::exp(g_inverse(w));
        return lambda * t * (3.0 * t - 1.0);
    }
    const double s = std::exp(w);
    return lambda * s * (2.0 * s - 1.0);
}

double lipschitz_bound(NonlinearityKind kind, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lipschitz_bound: lambda must be positive");
    return kind == NonlinearityKind::Generalized ? 2.0 * lambda : lambda;
}

}  // namespace csh
