#include "mchr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mchr/errors.hpp"

namespace mchr {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gauss_kronrod15(const Integrand& f, double a, double b) {
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double fc = f(centr);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * kXgk[jtw];
    const double f1 = f(centr - absc), f2 = f(centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * kXgk[jtwm1];
    const double f1 = f(centr - absc), f2 = f(centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  const double result = resk * hlgth;
  resabs *= std::abs(hlgth);
  resasc *= std::abs(hlgth);
  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, result, err};
}

QuadratureResult adaptive(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
  std::vector<Piece> heap{gauss_kronrod15(f, a, b)};
  double frozen_value = 0.0, frozen_error = 0.0;
  int subdivisions = 0;
  auto totals = [&] {
    double v = frozen_value, e = frozen_error;
    for (const auto& p : heap) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };
  for (;;) {
    auto [value, error] = totals();
    if (!std::isfinite(value)) throw NonConvergence("integrand produced a non-finite value");
    if (error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value)) || heap.empty())
      return {value, error, subdivisions};
    if (subdivisions >= cfg.max_subdivisions) {
      std::ostringstream msg;
      msg << "quadrature on [" << a << ", " << b << "] did not converge: error estimate " << error << " after "
          << subdivisions << " subdivisions";
      throw NonConvergence(msg.str());
    }
    std::pop_heap(heap.begin(), heap.end());
    const Piece worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const double scale = std::max({std::abs(worst.a), std::abs(worst.b), 1e-300});
    if (worst.b - worst.a <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
      // cannot split further; accept the piece as is
      frozen_value += worst.value;
      frozen_error += worst.error;
      continue;
    }
    heap.push_back(gauss_kronrod15(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(gauss_kronrod15(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end());
    ++subdivisions;
  }
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
  if (!(cfg.abs_tol > 0.0 && cfg.rel_tol > 0.0)) throw ModelError("quadrature tolerances must be > 0");
  if (b <= a) return {};
  if (std::isinf(b)) {
    const Integrand mapped = [&f, a](double u) {
      const double om = 1.0 - u;
      const double t = a + u / om;
      if (!std::isfinite(t)) return 0.0;
      const double v = f(t);
      return v == 0.0 ? 0.0 : v / (om * om);
    };
    return adaptive(mapped, 0.0, 1.0, cfg);
  }
  return adaptive(f, a, b, cfg);
}

QuadratureResult integrate_piecewise(const Integrand& f, double a, double b, std::vector<double> breakpoints,
                                     const QuadratureConfig& cfg) {
  std::vector<double> cuts{a};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double p : breakpoints)
    if (p > cuts.back() && p < b) cuts.push_back(p);
  cuts.push_back(b);
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto r = integrate(f, cuts[i], cuts[i + 1], cfg);
    total.value += r.value;
    total.abs_error += r.abs_error;
    total.subdivisions += r.subdivisions;
  }
  return total;
}

}  // namespace mchr
