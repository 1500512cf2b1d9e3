#ifndef BERGMAN_WEIGHT_HPP
#define BERGMAN_WEIGHT_HPP

#include <cmath>
#include <string>
#include <vector>

#include "bergman/bipoly.hpp"

namespace bergman {

// q = (1/4) Laplacian of p = p_{z w};  Q = q q_{zw} - q_z q_w.
inline std::pair<BiPoly, BiPoly> q_and_Q(const BiPoly& p) {
  BiPoly q = p.d_z().d_w();
  BiPoly Q = q * q.d_z().d_w() - q.d_z() * q.d_w();
  return {q, Q};
}

struct WeightReport {
  bool hermitian = false;
  bool homogeneous = false;
  int degree = -1;           // homogeneous degree r when homogeneous
  bool even_degree = false;
  bool no_pure_terms = false;  // no purely holomorphic / antiholomorphic terms
  bool nonharmonic = false;    // q != 0
  bool subharmonic_grid = false;   // circle values of q >= -margin on dense grid
  bool subharmonic_exact = false;  // Fourier 1-norm bound certifies q >= 0 on circle
  double circle_min = 0.0;         // min of q on the theta grid

  bool subharmonic() const { return subharmonic_grid || subharmonic_exact; }
  bool admissible() const {
    return hermitian && homogeneous && even_degree && no_pure_terms && nonharmonic &&
           subharmonic();
  }

  std::string summary() const {
    std::string s;
    auto add = [&](const char* name, bool v) {
      s += std::string(name) + "=" + (v ? "yes" : "no") + " ";
    };
    add("hermitian", hermitian);
    add("homogeneous", homogeneous);
    if (homogeneous) s += "r=" + std::to_string(degree) + " ";
    add("even_degree", even_degree);
    add("no_pure_terms", no_pure_terms);
    add("nonharmonic", nonharmonic);
    add("subharmonic", subharmonic());
    return s;
  }
};

// Admissibility of a weight polynomial: Hermitian, homogeneous of even
// degree, no pure terms, subharmonic (q >= 0 on the unit circle; q is
// homogeneous so circle values determine the sign everywhere), non-harmonic.
inline WeightReport admissible_weight_check(const BiPoly& p, int ntheta = 4096,
                                            double margin = 1e-9) {
  WeightReport rep;
  if (p.is_zero()) return rep;

  rep.hermitian = p.is_hermitian();
  auto hd = p.homogeneous_degree_opt();
  rep.homogeneous = hd.has_value();
  if (hd) {
    rep.degree = *hd;
    rep.even_degree = (*hd % 2 == 0);
  }

  rep.no_pure_terms = true;
  for (const auto& [k, c] : p.terms()) {
    if ((k.first >= 1 && k.second == 0) || (k.first == 0 && k.second >= 1)) {
      rep.no_pure_terms = false;
      break;
    }
  }

  auto [q, Q] = q_and_Q(p);
  rep.nonharmonic = !q.is_zero();

  // Exact sufficient certificate: on the circle q = sum_m f_m e^{im theta};
  // if f_0 is real and f_0 >= sum_{m != 0} (|Re f_m| + |Im f_m|) then q >= 0.
  auto fourier = q.circle_fourier();
  if (rep.hermitian && !q.is_zero()) {
    Rational c0(0), rest(0);
    bool c0_real = true;
    for (const auto& [m, c] : fourier) {
      if (m == 0) {
        c0 = c.re;
        c0_real = (c.im == 0);
      } else {
        rest += abs(c.re) + abs(c.im);
      }
    }
    rep.subharmonic_exact = c0_real && c0 >= rest;
  }

  // Grid check with a small negative margin.
  double minval = std::numeric_limits<double>::infinity();
  for (int j = 0; j < ntheta; ++j) {
    double th = 2.0 * M_PI * j / ntheta;
    std::complex<double> e(std::cos(th), std::sin(th));
    double v = q.eval(e, std::conj(e)).real();
    minval = std::min(minval, v);
  }
  rep.circle_min = minval;
  rep.subharmonic_grid = minval >= -margin;

  return rep;
}

}  // namespace bergman

#endif
