#pragma once

#include "wplab/moebius.hpp"

namespace wplab {

/// Conformal factor of the curvature -1 metric on the unit disk,
/// lambda^2(z) = 4 / (1 - |z|^2)^2. Shared by domain and target charts.
namespace conformal {

inline double lambda2(complex z) {
    double d = 1.0 - std::norm(z);
    return 4.0 / (d * d);
}

inline double lambda4(complex z) {
    double l = lambda2(z);
    return l * l;
}

/// d/dv of log(lambda^2) = 2 conj(v) / (1 - |v|^2).
inline complex dlog_lambda2(complex v) {
    return 2.0 * std::conj(v) / (1.0 - std::norm(v));
}

/// Wirtinger derivative d(lambda^2)/dv.
inline complex dlambda2_dv(complex v) {
    return lambda2(v) * dlog_lambda2(v);
}

}  // namespace conformal
}  // namespace wplab
