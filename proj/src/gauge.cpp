#include "wicknls/gauge.hpp"

#include <cmath>
#include <utility>

namespace wicknls {

namespace {

void check_grid(const Field& f, const GaugeContext& ctx, const char* who) {
  if (f.grid != ctx.exp_Y.grid || f.tag != Tag::physical)
    throw UsageError(std::string(who) + ": physical field on the context's grid required");
}

}  // namespace

GaugeContext::GaugeContext(NoiseBundle b, double p_)
    : bundle(std::move(b)), p(p_), c_eps(bundle.c_eps) {
  require(p >= 1.0, "gauge: p must be >= 1");
  const GridSpec& g = bundle.Y_eps.grid;
  require(g.n > 0, "gauge: bundle carries no fields");
  exp_Y = Field(g, Tag::physical);
  exp_mY = Field(g, Tag::physical);
  exp_m2Y = Field(g, Tag::physical);
  exp_mpY = Field(g, Tag::physical);
  for (size_t i = 0; i < exp_Y.v.size(); ++i) {
    double y = bundle.Y_eps.v[i].real();
    exp_Y.v[i] = std::exp(y);
    exp_mY.v[i] = std::exp(-y);
    exp_m2Y.v[i] = std::exp(-2.0 * y);
    exp_mpY.v[i] = std::exp(-p * y);
  }
}

Field to_primitive(const Field& v, const GaugeContext& ctx) {
  check_grid(v, ctx, "to_primitive");
  Field w = v;
  for (size_t i = 0; i < w.v.size(); ++i) w.v[i] *= ctx.exp_mY.v[i].real();
  return w;
}

Field from_primitive(const Field& w, const GaugeContext& ctx) {
  check_grid(w, ctx, "from_primitive");
  Field v = w;
  for (size_t i = 0; i < v.v.size(); ++i) v.v[i] *= ctx.exp_Y.v[i].real();
  return v;
}

Field to_original(const Field& v, const GaugeContext& ctx, double t) {
  check_grid(v, ctx, "to_original");
  cd phase = std::polar(1.0, -ctx.c_eps * t);
  Field u = v;
  for (size_t i = 0; i < u.v.size(); ++i) u.v[i] *= phase * ctx.exp_mY.v[i].real();
  return u;
}

}  // namespace wicknls
