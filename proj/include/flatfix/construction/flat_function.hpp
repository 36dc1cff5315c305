#pragma once

#include <cmath>
#include <limits>

namespace flatfix::construction {

// h(t) = exp(-1/t) for t > 0, extended by 0. Every derivative vanishes at 0.
template <class Real>
struct FlatFunction {
    static Real eval(Real t) { return t > 0 ? std::exp(-1 / t) : Real(0); }
    static Real prime(Real t) { return t > 0 ? std::exp(-1 / t) / (t * t) : Real(0); }
    static Real second(Real t) {
        return t > 0 ? std::exp(-1 / t) * (1 - 2 * t) / (t * t * t * t) : Real(0);
    }
    // log h'(t); finite long after h'(t) itself underflows.
    static Real log_prime(Real t) {
        return t > 0 ? -1 / t - 2 * std::log(t) : -std::numeric_limits<Real>::infinity();
    }
};

} // namespace flatfix::construction
