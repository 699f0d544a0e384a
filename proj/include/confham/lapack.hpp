#pragma once
// Single include point for LAPACKE with std::complex bindings. Every user in
// the library must come through here: lapacke.h fixes its complex type on
// first inclusion, so a direct include elsewhere could pick C99 _Complex and
// break the prototypes.

#include <complex>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif

#include <lapacke.h>
