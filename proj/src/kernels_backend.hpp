#pragma once

// Internal dispatch table shared by the kernel translation units.

#include <cstddef>
#include <string_view>

#include "crackscat/kernels.hpp"

namespace crackscat::kern {

struct Backend {
    std::string_view name;
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*tanh_backward)(const double*, const double*, double*, std::size_t);
    void (*adam_update)(double*, double*, double*, const double*, std::size_t,
                        double, double, double, double, double, double);
    cdouble (*zdotc)(const cdouble*, const cdouble*, std::size_t);
    void (*zaxpy)(cdouble, const cdouble*, cdouble*, std::size_t);
    double (*znrm2sq)(const cdouble*, std::size_t);
    void (*zrot)(cdouble*, cdouble*, std::size_t, double, cdouble);
};

}  // namespace crackscat::kern
