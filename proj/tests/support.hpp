#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

namespace testing {

/// Adaptive Gauss-Kronrod integral of f over [a, b]; independent of the
/// library's own quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b, double epsabs = 1e-13)
{
    gsl_set_error_handler_off();
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
    gsl_function fn;
    fn.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
    fn.params = const_cast<std::function<double(double)>*>(&f);
    double result = 0.0;
    double error = 0.0;
    const int status = gsl_integration_qag(&fn, a, b, epsabs, 1e-13, 2000, GSL_INTEG_GAUSS61, ws, &result, &error);
    gsl_integration_workspace_free(ws);
    if (status != GSL_SUCCESS && error > 1e-10) {
        throw std::runtime_error("reference integral did not converge");
    }
    return result;
}

/// Integral of f over the whole line.
inline double integrate_line(const std::function<double(double)>& f)
{
    gsl_set_error_handler_off();
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
    gsl_function fn;
    fn.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
    fn.params = const_cast<std::function<double(double)>*>(&f);
    double result = 0.0;
    double error = 0.0;
    gsl_integration_qagi(&fn, 1e-14, 1e-13, 2000, ws, &result, &error);
    gsl_integration_workspace_free(ws);
    return result;
}

struct Rng {
    explicit Rng(std::uint64_t seed) : engine(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
    std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(engine); }
    std::mt19937_64 engine;
};

}  // namespace testing
