#include "helmdual/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace helmdual {

double dual_exponent(double r) {
    if (!(r > 1.0) || !std::isfinite(r))
        throw DomainError("dual_exponent: r must be finite and > 1, got " + std::to_string(r));
    return r / (r - 1.0);
}

AdmissibleExponents check_admissible(int N, double p, double q) {
    if (N < 3)
        throw DomainError("check_admissible: dimension must be >= 3");
    if (!std::isfinite(p) || !std::isfinite(q) || !(p > 1.0) || !(q > 1.0))
        throw DomainError("check_admissible: exponents must be finite and > 1");

    const double lower = 2.0 * N / (N - 1.0);
    if (!(p > lower))
        throw RegionViolation("below-lower-p",
            "p = " + std::to_string(p) + " not strictly above 2N/(N-1) = " + std::to_string(lower));
    if (!(q > lower))
        throw RegionViolation("below-lower-q",
            "q = " + std::to_string(q) + " not strictly above 2N/(N-1) = " + std::to_string(lower));

    const double s = 1.0 / p + 1.0 / q;
    const double lo = (N - 2.0) / N;
    const double hi = (N - 1.0) / (N + 1.0);
    if (!(s > lo))
        throw RegionViolation("hyperbola-low",
            "1/p + 1/q = " + std::to_string(s) + " not strictly above (N-2)/N = " + std::to_string(lo));
    if (!(s < hi))
        throw RegionViolation("hyperbola-high",
            "1/p + 1/q = " + std::to_string(s) + " not strictly below (N-1)/(N+1) = " + std::to_string(hi));

    AdmissibleExponents e;
    e.N = N;
    e.p = p;
    e.q = q;
    e.p_dual = dual_exponent(p);
    e.q_dual = dual_exponent(q);
    const double half = (1.0 - N) / 2.0;
    e.lambda = -std::max({N / p + half, N / q + half, half + (N + 1.0) / 2.0 * s});
    const RescalingExponents r = rescaling_exponents(p, q);
    e.beta1 = r.beta1;
    e.beta2 = r.beta2;
    return e;
}

double decay_exponent(int N, double p, double q) {
    return check_admissible(N, p, q).lambda;
}

RescalingExponents rescaling_exponents(double p, double q) {
    if (!(p > 2.0) || !(q > 2.0))
        throw DomainError("rescaling_exponents: requires p, q > 2");
    const double denom = 1.0 - (q - 1.0) * (p - 1.0);
    if (denom == 0.0)
        throw DegenerateScaling("rescaling_exponents: (q-1)(p-1) == 1");
    RescalingExponents r;
    r.beta1 = 2.0 * p / denom;
    r.beta2 = 2.0 * q / denom;
    r.power1 = -r.beta1;
    r.power2 = -r.beta2;
    return r;
}

} // namespace helmdual
