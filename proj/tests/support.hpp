#pragma once

#include "fokas/fokas.hpp"

namespace fokas::testing {

// gaussian preset on [0, 2], T = 2
inline BoundaryDatum gauss0(double T = 2.0) { return BoundaryDatum::gaussian(T, 1.0, 1.0, 0.25, 0.0, 2.0, 0.1); }
inline BoundaryDatum gauss1(double T = 2.0) {
    return BoundaryDatum::gaussian(T, cplx(0, 0.8), 1.0, 0.25, 0.0, 2.0, 0.1);
}

inline DataPair gauss_pair() { return DataPair(gauss0(), gauss1(), 2.0); }
inline DataPair zero_pair() { return DataPair(BoundaryDatum::zero(2.0), BoundaryDatum::zero(2.0), 2.0); }

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace fokas::testing
