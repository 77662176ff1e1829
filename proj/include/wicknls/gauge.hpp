#pragma once
#include "wicknls/noise.hpp"

// Gauge dictionary between the three solution variables:
//
//   u  original      i du/dt = Lap u + u xi_eps - lambda u|u|^p
//   w  primitive     i dw/dt = Lap w + (xi_eps - c_eps) w - lambda w|w|^p
//   v  gauged        i dv/dt = Lap v + Vt v - 2 grad v . grad Y_eps
//                                        - lambda v|v|^p e^{-p Y_eps}
//
// with v = e^{Y_eps} w and u = e^{-i c_eps t} w = e^{-i c_eps t} e^{-Y_eps} v.
// All maps are pointwise multiplications; the exponential fields are
// precomputed once per bundle because they appear in every step and every
// energy functional.

namespace wicknls {

struct GaugeContext {
  NoiseBundle bundle;
  double p = 2.0;
  double c_eps = 0.0;  // copied for phase use
  Field exp_Y;         // e^{+Y_eps}
  Field exp_mY;        // e^{-Y_eps}
  Field exp_m2Y;       // e^{-2Y_eps}, the mass/energy weight
  Field exp_mpY;       // e^{-p Y_eps}, the nonlinearity weight

  GaugeContext(NoiseBundle b, double p);
};

Field to_primitive(const Field& v, const GaugeContext& ctx);    // w = e^{-Y_eps} v
Field from_primitive(const Field& w, const GaugeContext& ctx);  // v = e^{+Y_eps} w
// u = e^{-i c_eps t} e^{-Y_eps} v
Field to_original(const Field& v, const GaugeContext& ctx, double t);

}  // namespace wicknls
