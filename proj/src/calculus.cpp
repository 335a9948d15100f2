#include "maxrep/calculus.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace maxrep {

namespace {
void require_same_horizon(const CadlagPath& a, const CadlagPath& b,
                          const char* who) {
  if (a.horizon() != b.horizon()) {
    std::ostringstream msg;
    msg << who << ": mismatched horizons " << a.horizon() << " vs "
        << b.horizon();
    throw std::invalid_argument(msg.str());
  }
}
}  // namespace

PathDecomposition decompose(const CadlagPath& x) {
  PathBuilder cont(x.initial_value(), x.horizon(),
                   x.tail());
  PathBuilder jump(0.0, x.horizon(), x.tail());
  double c = x.initial_value();
  double j = 0.0;
  for (const auto& inc : increments(x)) {
    if (inc.kind == EventKind::Grid) {
      c += inc.delta;
      cont.append(inc.time, c, EventKind::Grid);
    } else {
      j += inc.delta;
      jump.append(inc.time, j, EventKind::Jump);
    }
  }
  return {std::move(cont).build(), std::move(jump).build()};
}

CadlagPath integrate_left(const CadlagPath& h, const CadlagPath& x) {
  require_same_horizon(h, x, "integrate_left");
  PathBuilder out(0.0, x.horizon(), x.tail());
  double acc = 0.0;
  for (const auto& inc : increments(x)) {
    acc += h.left_limit_at(inc.time) * inc.delta;
    out.append(inc.time, acc, inc.kind);
  }
  return std::move(out).build();
}

namespace {
CadlagPath covariation_impl(const CadlagPath& x, const CadlagPath& y,
                            bool jumps_only) {
  require_same_horizon(x, y, "covariation");
  auto xi = increments(x);
  auto yi = increments(y);
  PathBuilder out(0.0, x.horizon(), x.tail());
  double acc = 0.0;
  std::size_t i = 0, j = 0;
  while (i < xi.size() && j < yi.size()) {
    if (xi[i].time < yi[j].time) {
      ++i;
    } else if (yi[j].time < xi[i].time) {
      ++j;
    } else {
      if (xi[i].kind == yi[j].kind &&
          (!jumps_only || xi[i].kind == EventKind::Jump)) {
        acc += xi[i].delta * yi[j].delta;
        out.append_if_changed(xi[i].time, acc, xi[i].kind);
      }
      ++i;
      ++j;
    }
  }
  return std::move(out).build();
}
}  // namespace

CadlagPath covariation(const CadlagPath& x, const CadlagPath& y) {
  return covariation_impl(x, y, false);
}

CadlagPath jump_covariation(const CadlagPath& x, const CadlagPath& y) {
  return covariation_impl(x, y, true);
}

CadlagPath stoch_exp(const CadlagPath& x) {
  PathBuilder out(1.0, x.horizon(), x.tail());
  double log_flow = 0.0;   // accumulated grid increments
  double jump_factor = 1.0;  // product of (1 + jump)
  bool absorbed = false;
  for (const auto& inc : increments(x)) {
    double v;
    if (absorbed) {
      v = 0.0;
    } else if (inc.kind == EventKind::Grid) {
      log_flow += inc.delta;
      v = jump_factor * std::exp(log_flow);
    } else {
      jump_factor *= 1.0 + inc.delta;
      if (jump_factor == 0.0) absorbed = true;
      v = jump_factor * std::exp(log_flow);
    }
    out.append_if_changed(inc.time, v, inc.kind);
  }
  return std::move(out).build();
}

RatioDecomposition ratio_decomposition(const CadlagPath& u) {
  if (u.initial_value() != 1.0)
    throw std::invalid_argument("ratio_decomposition: U(0) must be 1");
  if (u.max_value() < 0.0 || u.initial_value() < 0.0)
    throw std::invalid_argument("ratio_decomposition: U must be nonnegative");
  double hz = u.horizon();
  PathBuilder zb(1.0, hz, u.tail());
  // reconstruction 1 + (1/U*_-).U - (1/U*_-).U* with each increment divided
  // by the left max directly: increments taken while U rides its maximum
  // cancel bitwise, and a kill atom contributes exactly -1
  double acc = 0.0;
  double residual = 0.0;
  double pu = 1.0;
  double pm = 1.0;
  for (const auto& e : u.events()) {
    if (e.value < 0.0)
      throw std::invalid_argument("ratio_decomposition: U must be nonnegative");
    double m = std::max(pm, e.value);
    double zv = e.value == m ? 1.0 : e.value / m;
    zb.append(e.time, zv, e.kind);
    acc += (e.value - pu) / pm - (m - pm) / pm;
    residual = std::max(residual, std::fabs(zv - (1.0 + acc)));
    pu = e.value;
    pm = m;
  }
  CadlagPath z = std::move(zb).build();
  return {std::move(z), residual};
}

GexpForward gexp_forward(const CadlagPath& w) {
  if (w.initial_value() != 0.0)
    throw std::invalid_argument("gexp_forward: w(0) must be 0");
  CadlagPath gamma = running_max(w);  // w(0)=0 keeps the floor at 0 built in
  for (const auto& e : w.events()) {
    double gap = gamma.value_at(e.time) - e.value;
    if (gap > 1.0) {
      std::ostringstream msg;
      msg << "gexp_forward: drawdown gamma - w = " << gap << " > 1 at t = "
          << e.time;
      throw std::invalid_argument(msg.str());
    }
  }
  CadlagPath ustar = stoch_exp(gamma);
  // U = 1 + E(gamma)_- . w, with grid flow integrated in closed form: while w
  // rides its maximum the integrand equals e^w and the segment integral is
  // exponential; below the maximum E(gamma)_- is frozen and the flow sums
  // linearly; a segment that crosses the old maximum splits at the crossing
  double hz = w.horizon();
  PathBuilder ub(1.0, hz, w.tail());
  double uval = 1.0;
  double pw = 0.0;
  double pg = 0.0;
  double pstar = 1.0;
  for (const auto& e : w.events()) {
    if (e.kind == EventKind::Jump || e.value <= pg) {
      uval += pstar * (e.value - pw);
    } else {
      if (pw < pg) uval += pstar * (pg - pw);
      uval += pstar * std::expm1(e.value - pg);
    }
    ub.append(e.time, uval, e.kind);
    pw = e.value;
    pg = std::max(pg, e.value);
    pstar = ustar.value_at(e.time);
  }
  CadlagPath u = std::move(ub).build();

  bool ok = true;
  CadlagPath umax = running_max(u);
  auto close = [](double a, double b) {
    return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a),
                                                 std::fabs(b)});
  };
  auto probe = [&](double t) {
    if (u.value_at(t) < -1e-12) ok = false;
    if (!close(umax.value_at(t), ustar.value_at(t))) ok = false;
  };
  probe(0.0);
  for (const auto& e : w.events()) probe(e.time);
  return {std::move(u), std::move(gamma), std::move(ustar), ok};
}

SupMultip supmultip_transform(const CadlagPath& x, const CadlagPath& v,
                              double T) {
  require_same_horizon(x, v, "supmultip_transform");
  if (x.initial_value() < 0.0 || x.max_value() < 0.0)
    throw std::invalid_argument("supmultip_transform: X must be nonnegative");
  for (const auto& e : x.events())
    if (e.value < 0.0)
      throw std::invalid_argument("supmultip_transform: X must be nonnegative");

  CadlagPath xstar = running_max(x);
  double prev = v.initial_value();
  for (const auto& e : v.events()) {
    if (e.value < prev)
      throw std::invalid_argument("supmultip_transform: v not non-decreasing");
    if (e.time > T && e.value != prev)
      throw std::invalid_argument("supmultip_transform: v not stopped at T");
    prev = e.value;
  }
  // dv carried on {X_- = X*_-}; grid mass may close the interval at either end
  TimePredicate at_max{
      [&](double t) { return x.value_at(t) == xstar.value_at(t); },
      [&](double t) { return x.left_limit_at(t) == xstar.left_limit_at(t); }};
  TimePredicate at_max_left{
      [&](double t) {
        return x.left_limit_at(t) == xstar.left_limit_at(t);
      },
      at_max.before};
  for (const auto& inc : increments(v)) {
    if (inc.delta == 0.0) continue;
    bool carried = inc.kind == EventKind::Jump
                       ? at_max_left.at(inc.time)
                       : (at_max.before(inc.time) || at_max.at(inc.time));
    if (!carried) {
      std::ostringstream msg;
      msg << "supmultip_transform: dv mass off {X_- = X*_-} at t = "
          << inc.time;
      throw std::invalid_argument(msg.str());
    }
    if (inc.kind == EventKind::Jump && x.jump_at(inc.time) < 0.0)
      throw std::invalid_argument(
          "supmultip_transform: v jumps against a downward X jump");
  }
  if (std::isfinite(T) && T <= x.horizon()) {
    if (x.left_limit_at(T) != xstar.left_limit_at(T))
      throw std::invalid_argument(
          "supmultip_transform: X(T-) != X*(T-) at the stop time");
  }

  // y = e^v x over the union of event times
  double hz = x.horizon();
  PathBuilder yb(std::exp(v.initial_value()) * x.initial_value(), hz,
                 x.tail());
  std::map<double, EventKind> times;
  for (const auto& e : x.events()) times[e.time] = e.kind;
  for (const auto& e : v.events()) {
    auto [it, fresh] = times.emplace(e.time, e.kind);
    if (!fresh && e.kind == EventKind::Jump) it->second = EventKind::Jump;
  }
  for (const auto& [t, kind] : times)
    yb.append(t, std::exp(v.value_at(t)) * x.value_at(t), kind);
  CadlagPath y = std::move(yb).build();

  bool ok = true;
  CadlagPath ymax = running_max(y);
  auto close = [](double a, double b) {
    return std::fabs(a - b) <=
           1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
  };
  auto probe = [&](double t) {
    if (!close(ymax.value_at(t), std::exp(v.value_at(t)) * xstar.value_at(t)))
      ok = false;
  };
  probe(0.0);
  for (const auto& [t, kind] : times) probe(t);
  return {std::move(y), ok};
}

}  // namespace maxrep
