#pragma once

#include <cmath>
#include <cstddef>

#include "rvprd/grid.hpp"

namespace rvprd {

/// Tensor-product linear (cloud-in-cell) weights of a point on a node grid.
/// Used for both deposition and interpolation so that the pair conserves momentum.
struct CicStencil {
  int i = 0, j = 0, k = 0;  // lower node
  double wx[2]{}, wy[2]{}, wz[2]{};
};

/// Lower cell index and fractional offset along one axis.
inline void cic_axis(double coord, double extent, double inv_h, int& cell, double& frac) {
  double s = (coord + extent) * inv_h;
  double f = std::floor(s);
  cell = static_cast<int>(f);
  frac = s - f;
}

/// True when x lies in [-L + 2h, L - 2h]^3.
inline bool in_safe_domain(const GridSpec& g, double x, double y, double z) {
  double lim = g.extent - 2.0 * g.spacing();
  return std::fabs(x) <= lim && std::fabs(y) <= lim && std::fabs(z) <= lim;
}

inline CicStencil cic_stencil(const GridSpec& g, double x, double y, double z) {
  CicStencil s;
  double inv_h = 1.0 / g.spacing();
  double fx, fy, fz;
  cic_axis(x, g.extent, inv_h, s.i, fx);
  cic_axis(y, g.extent, inv_h, s.j, fy);
  cic_axis(z, g.extent, inv_h, s.k, fz);
  s.wx[0] = 1.0 - fx; s.wx[1] = fx;
  s.wy[0] = 1.0 - fy; s.wy[1] = fy;
  s.wz[0] = 1.0 - fz; s.wz[1] = fz;
  return s;
}

}  // namespace rvprd
