#pragma once

#include <algorithm>
#include <cmath>

namespace flatfix::construction {

// rho(s) = 1 on [0, 1/16], 0 on [1/4, inf), strictly decreasing between,
// realised as the blend q(u) / (q(u) + q(1-u)) with q(u) = exp(-1/u) and
// u = (1/4 - s) / (3/16).
template <class Real>
struct BumpProfile {
    static constexpr Real inner = Real(1) / 16;
    static constexpr Real outer = Real(1) / 4;

    static Real u_of(Real s) { return std::clamp((outer - s) * Real(16) / Real(3), Real(0), Real(1)); }

    Real eval(Real s) const {
        if (s <= inner) return 1;
        if (s >= outer) return 0;
        const Real u = u_of(s);
        const Real a = q(u), b = q(1 - u);
        return a / (a + b);
    }

    Real eval_prime(Real s) const {
        if (s <= inner || s >= outer) return 0;
        const Real u = u_of(s);
        const Real a = q(u), b = q(1 - u);
        const Real den = a + b;
        const Real drho_du = (dq(u) * b + a * dq(1 - u)) / (den * den);
        return drho_du * (-Real(16) / Real(3));
    }

private:
    static Real q(Real u) { return u > 0 ? std::exp(-1 / u) : Real(0); }
    static Real dq(Real u) { return u > 0 ? std::exp(-1 / u) / (u * u) : Real(0); }
};

template <class Real>
BumpProfile<Real> make_bump() {
    return {};
}

} // namespace flatfix::construction
