#include <cmath>
#include <mutex>
#include <sstream>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "kerrpair/error.hpp"
#include "kerrpair/numerics.hpp"

namespace kerrpair::numerics {
namespace {

// Exponential tails are cut where exp(-x/scale) drops below 2e-22.
constexpr double kExponentialCut = 50.0;

void silence_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

struct Workspace {
  explicit Workspace(std::size_t n) : ptr(gsl_integration_workspace_alloc(n)) {}
  ~Workspace() { gsl_integration_workspace_free(ptr); }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
  gsl_integration_workspace* ptr;
};

struct Callback {
  const std::function<double(double)>* f;
  bool saw_nonfinite = false;
};

double trampoline(double x, void* params) {
  auto* cb = static_cast<Callback*>(params);
  const double v = (*cb->f)(x);
  if (!std::isfinite(v)) {
    cb->saw_nonfinite = true;
    return 0.0;
  }
  return v;
}

QuadratureResult qag(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& spec) {
  silence_gsl();
  Workspace ws(spec.max_subdivisions);
  Callback cb{&f};
  gsl_function fn{&trampoline, &cb};
  double value = 0, error = 0;
  const int status = gsl_integration_qag(&fn, a, b, spec.abs_tol, spec.rel_tol, spec.max_subdivisions,
                                         GSL_INTEG_GAUSS21, ws.ptr, &value, &error);
  if (cb.saw_nonfinite) {
    throw Error(ErrorKind::QuadratureFailure, "integrand returned a non-finite value");
  }
  if (status == GSL_EMAXITER) {
    std::ostringstream msg;
    msg << "tolerance not reached with " << spec.max_subdivisions << " subdivisions on [" << a << ", " << b
        << "], error estimate " << error;
    throw Error(ErrorKind::MaxSubdivisions, msg.str());
  }
  if (status != GSL_SUCCESS) {
    throw Error(ErrorKind::QuadratureFailure, gsl_strerror(status));
  }
  return {value, error};
}

// Integral over [a, +inf) for a finite a.
QuadratureResult upper_tail(const std::function<double(double)>& f, double a, const QuadratureSpec& spec) {
  if (spec.decay == TailDecay::Exponential) {
    return qag(f, a, a + kExponentialCut * spec.scale, spec);
  }
  const double s = spec.scale;
  std::function<double(double)> mapped = [&f, a, s](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    return f(a + s * t / one_minus) * s / (one_minus * one_minus);
  };
  return qag(mapped, 0.0, 1.0, spec);
}

QuadratureResult lower_tail(const std::function<double(double)>& f, double b, const QuadratureSpec& spec) {
  std::function<double(double)> reflected = [&f](double x) { return f(-x); };
  return upper_tail(reflected, -b, spec);
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0) || !(spec.rel_tol > 0)) {
    throw Error(ErrorKind::Validation, "quadrature tolerances must be positive");
  }
  if (!(spec.scale > 0)) {
    throw Error(ErrorKind::Validation, "quadrature scale must be positive");
  }
  if (std::isnan(spec.lower) || std::isnan(spec.upper)) {
    throw Error(ErrorKind::Validation, "quadrature bounds must not be NaN");
  }
  if (spec.lower == spec.upper) return {0.0, 0.0};
  if (spec.lower > spec.upper) {
    QuadratureSpec flipped = spec;
    std::swap(flipped.lower, flipped.upper);
    const QuadratureResult r = integrate(f, flipped);
    return {-r.value, r.error};
  }

  const bool lo_inf = std::isinf(spec.lower);
  const bool hi_inf = std::isinf(spec.upper);
  if (!lo_inf && !hi_inf) return qag(f, spec.lower, spec.upper, spec);
  if (!lo_inf) return upper_tail(f, spec.lower, spec);
  if (!hi_inf) return lower_tail(f, spec.upper, spec);

  // Whole line: split at the origin and share the tolerance.
  QuadratureSpec half = spec;
  half.abs_tol = 0.5 * spec.abs_tol;
  const QuadratureResult left = lower_tail(f, 0.0, half);
  const QuadratureResult right = upper_tail(f, 0.0, half);
  return {left.value + right.value, left.error + right.error};
}

}  // namespace kerrpair::numerics
